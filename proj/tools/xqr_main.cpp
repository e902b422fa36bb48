// Command-line driver: factor or solve matrix files, or run the experiment
// harness and emit CSV.  Exit codes: 0 ok, 2 usage, 3 data/parse,
// 4 numerical failure.  Every failure prints one line to stderr starting
// with "usage:", "data:", or "numerical:".

#include <cstdio>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "xqr/experiment.hpp"
#include "xqr/matrix_io.hpp"
#include "xqr/mgs.hpp"
#include "xqr/parallel.hpp"

namespace {

// Input/output trouble that is not a usage mistake: unreadable files,
// malformed contents, failed writes.
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

xqr::any_matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    try {
        return xqr::read_matrix(in);
    } catch (const xqr::parse_error& e) {
        throw data_error(path + ": " + e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw data_error("cannot create '" + tmp + "'");
        out << contents;
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw data_error("write failed for '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw data_error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

template <class R>
std::string matrix_text(const xqr::col_matrix<R>& a) {
    std::ostringstream out;
    xqr::write_matrix(out, a);
    return out.str();
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(out_path, text);
    }
}

template <class R>
xqr::precision_tag tag_of() {
    if (std::is_same_v<R, double>) return xqr::precision_tag::d;
    if (std::is_same_v<R, xqr::double_double>) return xqr::precision_tag::dd;
    return xqr::precision_tag::qd;
}

template <class R>
void require_precision(const std::string& flag, const std::string& path) {
    if (flag.empty()) return;
    xqr::precision_tag want = xqr::parse_precision(flag);
    if (want != tag_of<R>()) {
        throw data_error(path + ": expected precision '" + flag + "', file holds '" +
                         xqr::precision_label(tag_of<R>()) + "'");
    }
}

template <class R>
struct wider_real {
    using type = void;
};
template <>
struct wider_real<double> {
    using type = xqr::double_double;
};
template <>
struct wider_real<xqr::double_double> {
    using type = xqr::quad_double;
};

struct qr_opts {
    std::string input;
    std::string precision;
    std::string q_out;
    std::string r_out;
    std::string mode = "designated";
    std::string check_precision;
    std::size_t workers = 1;
};

xqr::normalize_mode mode_from(const std::string& name) {
    if (name == "designated") return xqr::normalize_mode::designated;
    if (name == "redundant") return xqr::normalize_mode::redundant;
    throw xqr::usage_error("unknown normalize mode '" + name + "'");
}

template <class R>
void run_qr_typed(const xqr::col_matrix<R>& a, const qr_opts& o) {
    require_precision<R>(o.precision, o.input);
    const xqr::normalize_mode mode = mode_from(o.mode);
    if (!o.check_precision.empty() && o.check_precision != "next") {
        throw xqr::usage_error("--check-precision only accepts 'next'");
    }

    xqr::qr_factors<R> f =
        o.workers == 1 ? xqr::mgs_qr(a) : xqr::par_mgs_qr(a, o.workers, mode);

    write_file_atomic(o.q_out.empty() ? o.input + ".q" : o.q_out, matrix_text(f.q));
    write_file_atomic(o.r_out.empty() ? o.input + ".r" : o.r_out, matrix_text(f.r));

    double resid;
    if (o.check_precision == "next") {
        if constexpr (std::is_same_v<R, xqr::quad_double>) {
            throw xqr::usage_error("no precision wider than cqd is available");
        } else {
            using W = typename wider_real<R>::type;
            resid = xqr::to_double(xqr::residual_max_entry_widened<W>(a, f.q, f.r));
        }
    } else {
        resid = xqr::to_double(xqr::residual_max_entry(a, f.q, f.r));
    }
    double defect = xqr::to_double(xqr::orthogonality_defect(f.q));

    std::cout << "residual_max_entry " << xqr::detail::shortest(resid) << "\n";
    std::cout << "orthogonality_defect " << xqr::detail::shortest(defect) << "\n";
}

void run_qr(const qr_opts& o) {
    if (!o.precision.empty()) xqr::parse_precision(o.precision);
    auto any = read_matrix_file(o.input);
    std::visit([&](const auto& a) { run_qr_typed(a, o); }, any);
}

struct solve_opts {
    std::string input;
    std::string rhs;
    std::string precision;
    std::string x_out;
    std::size_t workers = 1;
};

template <class R>
void run_solve_typed(const xqr::col_matrix<R>& a, const solve_opts& o) {
    require_precision<R>(o.precision, o.input);

    auto rhs_any = read_matrix_file(o.rhs);
    const auto* rhs = std::get_if<xqr::col_matrix<R>>(&rhs_any);
    if (rhs == nullptr) {
        throw data_error(o.rhs + ": right-hand side precision differs from the matrix");
    }
    if (rhs->cols() != 1 || rhs->rows() != a.rows()) {
        throw data_error(o.rhs + ": right-hand side must be a " +
                         std::to_string(a.rows()) + "x1 column");
    }
    const xqr::cvector<R>& b = rhs->column(0);

    xqr::lsq_solution<R> sol =
        o.workers == 1 ? xqr::lsq_solve(a, b) : xqr::par_lsq_solve(a, b, o.workers);

    xqr::col_matrix<R> xm(a.cols(), 1);
    xm.column(0) = sol.x;
    write_file_atomic(o.x_out.empty() ? o.input + ".x" : o.x_out, matrix_text(xm));

    std::cout << "residual_norm " << xqr::detail::shortest(xqr::to_double(sol.residual_norm))
              << "\n";
}

void run_solve(const solve_opts& o) {
    if (!o.precision.empty()) xqr::parse_precision(o.precision);
    auto any = read_matrix_file(o.input);
    std::visit([&](const auto& a) { run_solve_typed(a, o); }, any);
}

struct accuracy_opts {
    std::string precision = "cd";
    std::size_t m = 32;
    std::size_t n = 32;
    std::vector<double> g{1.0};
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string dist = "log";
    bool paper_scale = false;
    std::string out;
};

xqr::modulus_dist dist_from(const std::string& name) {
    if (name == "log") return xqr::modulus_dist::log_uniform;
    if (name == "linear") return xqr::modulus_dist::linear_uniform;
    throw xqr::usage_error("unknown modulus distribution '" + name + "'");
}

void run_accuracy(const accuracy_opts& o) {
    xqr::accuracy_config cfg;
    cfg.precision = xqr::parse_precision(o.precision);
    cfg.m = o.m;
    cfg.n = o.n;
    cfg.g_values = o.g;
    cfg.trials = o.paper_scale ? o.trials * 10 : o.trials;
    cfg.seed = o.seed;
    cfg.dist = dist_from(o.dist);
    emit(o.out, xqr::accuracy_csv(xqr::run_accuracy_sweep(cfg)));
}

struct bench_opts {
    std::size_t m = 32;
    std::size_t n = 32;
    std::size_t reps = 1000;
    std::uint64_t seed = 1;
    bool paper_scale = false;
    std::string out;
    std::vector<std::size_t> n_grid{64, 128, 256};
    std::size_t scaling_reps = 5;
    std::size_t speedup_n = 256;
    std::vector<std::size_t> worker_grid{1, 2, 4, 8};
    std::size_t speedup_reps = 3;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QR factorization and linear-system experiments in double,"
                 " double-double, and quad-double complex arithmetic"};
    app.require_subcommand(1);

    qr_opts qo;
    auto* qr = app.add_subcommand("qr", "factor a matrix file and report residuals");
    qr->add_option("input", qo.input, "matrix file")->required();
    qr->add_option("--precision", qo.precision, "require cd, cdd, or cqd input");
    qr->add_option("--q-out", qo.q_out, "output path for Q (default <input>.q)");
    qr->add_option("--r-out", qo.r_out, "output path for R (default <input>.r)");
    qr->add_option("--workers", qo.workers, "worker threads (1 = sequential)")
        ->envname("XQR_WORKERS");
    qr->add_option("--normalize-mode", qo.mode, "designated or redundant pivot handling");
    qr->add_option("--check-precision", qo.check_precision,
                   "'next': audit the residual in the next wider precision");
    qr->callback([&] { run_qr(qo); });

    solve_opts so;
    auto* solve = app.add_subcommand("solve", "least-squares solve against a right-hand side");
    solve->add_option("input", so.input, "matrix file")->required();
    solve->add_option("rhs", so.rhs, "right-hand side file (m x 1)")->required();
    solve->add_option("--precision", so.precision, "require cd, cdd, or cqd input");
    solve->add_option("--x-out", so.x_out, "output path for x (default <input>.x)");
    solve->add_option("--workers", so.workers, "worker threads (1 = sequential)")
        ->envname("XQR_WORKERS");
    solve->callback([&] { run_solve(so); });

    accuracy_opts ao;
    auto* acc = app.add_subcommand("accuracy", "residual accuracy sweep over g");
    acc->add_option("--precision", ao.precision, "cd, cdd, or cqd")->required();
    acc->add_option("--m", ao.m, "rows");
    acc->add_option("--n", ao.n, "columns");
    acc->add_option("--g", ao.g, "magnitude ranges, repeatable");
    acc->add_option("--trials", ao.trials, "factorizations per g");
    acc->add_option("--seed", ao.seed, "rng seed");
    acc->add_option("--modulus-dist", ao.dist, "log or linear");
    acc->add_flag("--paper-scale", ao.paper_scale, "multiply trials by 10");
    acc->add_option("--out", ao.out, "write CSV here instead of stdout");
    acc->callback([&] { run_accuracy(ao); });

    bench_opts bo;
    auto* ovh = app.add_subcommand("bench-overhead", "cost of each precision vs real double");
    ovh->add_option("--m", bo.m, "rows");
    ovh->add_option("--n", bo.n, "columns");
    ovh->add_option("--reps", bo.reps, "factorizations per precision");
    ovh->add_option("--seed", bo.seed, "rng seed");
    ovh->add_flag("--paper-scale", bo.paper_scale, "multiply repetitions by 10");
    ovh->add_option("--out", bo.out, "write CSV here instead of stdout");
    ovh->callback([&] {
        xqr::overhead_config cfg;
        cfg.m = bo.m;
        cfg.n = bo.n;
        cfg.repetitions = bo.paper_scale ? bo.reps * 10 : bo.reps;
        cfg.seed = bo.seed;
        emit(bo.out, xqr::bench_csv(xqr::run_overhead_bench(cfg)));
    });

    auto* scl = app.add_subcommand("bench-scaling", "factorization time across dimensions");
    scl->add_option("--n", bo.n_grid, "dimension grid, repeatable, strictly increasing");
    scl->add_option("--reps", bo.scaling_reps, "runs per dimension (median reported)");
    scl->add_option("--seed", bo.seed, "rng seed");
    scl->add_option("--out", bo.out, "write CSV here instead of stdout");
    scl->callback([&] {
        xqr::scaling_config cfg;
        cfg.n_grid = bo.n_grid;
        cfg.repetitions = bo.scaling_reps;
        cfg.seed = bo.seed;
        emit(bo.out, xqr::bench_csv(xqr::run_scaling_bench(cfg)));
    });

    auto* spd = app.add_subcommand("bench-speedup", "parallel factorization time by workers");
    spd->add_option("--n", bo.speedup_n, "matrix dimension");
    spd->add_option("--workers", bo.worker_grid, "worker grid, repeatable, starts at 1");
    spd->add_option("--reps", bo.speedup_reps, "runs per worker count (median reported)");
    spd->add_option("--seed", bo.seed, "rng seed");
    spd->add_option("--out", bo.out, "write CSV here instead of stdout");
    spd->callback([&] {
        xqr::speedup_config cfg;
        cfg.n = bo.speedup_n;
        cfg.worker_grid = bo.worker_grid;
        cfg.repetitions = bo.speedup_reps;
        cfg.seed = bo.seed;
        emit(bo.out, xqr::bench_csv(xqr::run_speedup_bench(cfg)));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "usage: " << e.what() << std::endl;
        return 2;
    } catch (const xqr::usage_error& e) {
        std::cerr << "usage: " << e.what() << std::endl;
        return 2;
    } catch (const data_error& e) {
        std::cerr << "data: " << e.what() << std::endl;
        return 3;
    } catch (const xqr::parse_error& e) {
        std::cerr << "data: " << e.what() << std::endl;
        return 3;
    } catch (const xqr::dimension_error& e) {
        std::cerr << "data: " << e.what() << std::endl;
        return 3;
    } catch (const xqr::breakdown_error& e) {
        std::cerr << "numerical: " << e.what() << std::endl;
        return 4;
    } catch (const xqr::overflow_error& e) {
        std::cerr << "numerical: " << e.what() << std::endl;
        return 4;
    } catch (const xqr::domain_error& e) {
        std::cerr << "numerical: " << e.what() << std::endl;
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
