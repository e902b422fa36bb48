#pragma once

// Experiment harness: random instance generation, the accuracy sweep over
// the magnitude range g, and the timing benches (precision overhead, cubic
// scaling, parallel speedup).  Results aggregate into two fixed CSV shapes:
//   accuracy: kind,precision,m,n,g,trials,exclusions,m_e,M_e,D_e,wall_seconds
//   bench:    kind,precision,m,n,reps,wall_seconds,factor_vs_baseline
// All numeric CSV fields use shortest round-trip decimal.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "xqr/errors.hpp"
#include "xqr/matrix.hpp"
#include "xqr/mgs.hpp"
#include "xqr/parallel.hpp"
#include "xqr/random.hpp"
#include "xqr/real_type.hpp"

namespace xqr {

enum class precision_tag { d, dd, qd };

inline const char* precision_label(precision_tag p) {
    switch (p) {
        case precision_tag::d: return "cd";
        case precision_tag::dd: return "cdd";
        default: return "cqd";
    }
}

inline precision_tag parse_precision(const std::string& token) {
    if (token == "cd") return precision_tag::d;
    if (token == "cdd") return precision_tag::dd;
    if (token == "cqd") return precision_tag::qd;
    throw usage_error("unknown precision token '" + token + "'");
}

inline int precision_digits(precision_tag p) {
    switch (p) {
        case precision_tag::d: return real_traits<double>::decimal_digits;
        case precision_tag::dd: return real_traits<double_double>::decimal_digits;
        default: return real_traits<quad_double>::decimal_digits;
    }
}

// Smallest supported precision carrying at least `digits` decimal digits.
inline precision_tag precision_for_digits(int digits) {
    if (digits <= precision_digits(precision_tag::d)) return precision_tag::d;
    if (digits <= precision_digits(precision_tag::dd)) return precision_tag::dd;
    if (digits <= precision_digits(precision_tag::qd)) return precision_tag::qd;
    throw usage_error("no precision with " + std::to_string(digits) + " decimal digits");
}

// Entries are drawn column-major (column index outer, row index inner).
template <class R>
col_matrix<R> gen_matrix(split_mix64& rng, std::size_t m, std::size_t n, double g,
                         modulus_dist dist = modulus_dist::log_uniform) {
    col_matrix<R> a(m, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) a(i, j) = random_ranged_complex<R>(rng, g, dist);
    return a;
}

template <class R>
cvector<R> gen_rhs(split_mix64& rng, std::size_t m, double g,
                   modulus_dist dist = modulus_dist::log_uniform) {
    cvector<R> b(m);
    for (auto& e : b) e = random_ranged_complex<R>(rng, g, dist);
    return b;
}

struct accuracy_config {
    precision_tag precision = precision_tag::d;
    std::size_t m = 32;
    std::size_t n = 32;
    std::vector<double> g_values{1.0};
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    modulus_dist dist = modulus_dist::log_uniform;
};

struct accuracy_record {
    precision_tag precision = precision_tag::d;
    std::size_t m = 0;
    std::size_t n = 0;
    double g = 0.0;
    std::size_t trials = 0;      // completed trials; configured = trials + exclusions
    std::size_t exclusions = 0;
    std::vector<double> log10_e;  // per completed trial, not serialized
    double m_e = 0.0;
    double big_m_e = 0.0;
    double d_e = 0.0;
    double wall_seconds = 0.0;
};

namespace detail {

template <class F>
double time_seconds(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

inline volatile double timing_sink = 0.0;

template <class R>
accuracy_record accuracy_point(const accuracy_config& cfg, double g, std::size_t g_index) {
    accuracy_record rec;
    rec.precision = cfg.precision;
    rec.m = cfg.m;
    rec.n = cfg.n;
    rec.g = g;
    split_mix64 root(cfg.seed);

    rec.wall_seconds = time_seconds([&] {
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            split_mix64 stream = root.split(g_index * cfg.trials + t);
            auto a = gen_matrix<R>(stream, cfg.m, cfg.n, g, cfg.dist);
            try {
                auto f = mgs_qr(a);
                double e = to_double(residual_max_entry(a, f.q, f.r));
                rec.log10_e.push_back(std::log10(e));
            } catch (const breakdown_error&) {
                ++rec.exclusions;
            }
        }
    });

    rec.trials = rec.log10_e.size();
    if (rec.log10_e.empty()) {
        rec.m_e = rec.big_m_e = rec.d_e = std::numeric_limits<double>::quiet_NaN();
    } else {
        auto [lo, hi] = std::minmax_element(rec.log10_e.begin(), rec.log10_e.end());
        rec.m_e = *lo;
        rec.big_m_e = *hi;
        rec.d_e = rec.m_e - rec.big_m_e;
    }
    return rec;
}

}  // namespace detail

// One record per g value: `trials` factorizations, the max-entry residual e
// of each, and the min/max of log10(e).  Breakdowns are excluded from the
// statistics but kept on the books.
inline std::vector<accuracy_record> run_accuracy_sweep(const accuracy_config& cfg) {
    if (cfg.trials == 0) throw usage_error("trials must be at least 1");
    if (cfg.m < cfg.n || cfg.n == 0) throw usage_error("need rows >= cols >= 1");
    std::vector<accuracy_record> out;
    for (std::size_t gi = 0; gi < cfg.g_values.size(); ++gi) {
        double g = cfg.g_values[gi];
        switch (cfg.precision) {
            case precision_tag::d:
                out.push_back(detail::accuracy_point<double>(cfg, g, gi));
                break;
            case precision_tag::dd:
                out.push_back(detail::accuracy_point<double_double>(cfg, g, gi));
                break;
            default:
                out.push_back(detail::accuracy_point<quad_double>(cfg, g, gi));
                break;
        }
    }
    return out;
}

struct bench_record {
    std::string kind;
    std::string precision;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t reps = 0;
    double wall_seconds = 0.0;
    double factor_vs_baseline = 1.0;
};

namespace detail {

// Plain real-double modified Gram-Schmidt, the cost baseline the complex
// precisions are normalized against.  Same loop shape and the same pairwise
// reduction order as the complex path.
inline double real_tree_sum(std::vector<double>& terms) {
    for (std::size_t stride = 1; stride < terms.size(); stride <<= 1)
        for (std::size_t i = 0; i + stride < terms.size(); i += 2 * stride)
            terms[i] += terms[i + stride];
    return terms.empty() ? 0.0 : terms[0];
}

inline double real_mgs_pass(std::vector<std::vector<double>> cols) {
    const std::size_t m = cols.front().size();
    const std::size_t n = cols.size();
    std::vector<double> scratch(m);
    double trace = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < m; ++l) scratch[l] = cols[k][l] * cols[k][l];
        double rkk = std::sqrt(real_tree_sum(scratch));
        trace += rkk;
        for (auto& e : cols[k]) e /= rkk;
        for (std::size_t j = k + 1; j < n; ++j) {
            for (std::size_t l = 0; l < m; ++l) scratch[l] = cols[k][l] * cols[j][l];
            double rkj = real_tree_sum(scratch);
            for (std::size_t l = 0; l < m; ++l) cols[j][l] -= rkj * cols[k][l];
        }
    }
    return trace;
}

template <class R>
double time_complex_mgs(const col_matrix<R>& a, std::size_t reps) {
    for (int w = 0; w < 3; ++w) {
        auto f = mgs_qr(a);
        timing_sink = timing_sink + to_double(f.r(0, 0).re);
    }
    return time_seconds([&] {
        for (std::size_t rep = 0; rep < reps; ++rep) {
            auto f = mgs_qr(a);
            timing_sink = timing_sink + to_double(f.r(0, 0).re);
        }
    });
}

}  // namespace detail

struct overhead_config {
    std::size_t m = 32;
    std::size_t n = 32;
    std::size_t repetitions = 1000;
    std::uint64_t seed = 1;
};

// Times `repetitions` factorizations of one fixed random instance per
// precision.  Row order: real-double baseline, then cd, cdd, cqd; factors
// are normalized to the baseline row.
inline std::vector<bench_record> run_overhead_bench(const overhead_config& cfg) {
    std::vector<bench_record> out;
    if (cfg.repetitions == 0) return out;
    if (cfg.m < cfg.n || cfg.n == 0) throw usage_error("need rows >= cols >= 1");

    split_mix64 rng(cfg.seed);
    auto cd = gen_matrix<double>(rng, cfg.m, cfg.n, 1.0);

    std::vector<std::vector<double>> real_cols(cfg.n, std::vector<double>(cfg.m));
    for (std::size_t j = 0; j < cfg.n; ++j)
        for (std::size_t i = 0; i < cfg.m; ++i) real_cols[j][i] = cd(i, j).re;

    for (int w = 0; w < 3; ++w) detail::timing_sink = detail::real_mgs_pass(real_cols);
    double t_d = detail::time_seconds([&] {
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            detail::timing_sink = detail::real_mgs_pass(real_cols);
        }
    });
    out.push_back({"overhead", "d", cfg.m, cfg.n, cfg.repetitions, t_d, 1.0});

    double t_cd = detail::time_complex_mgs(cd, cfg.repetitions);
    out.push_back({"overhead", "cd", cfg.m, cfg.n, cfg.repetitions, t_cd, t_cd / t_d});

    split_mix64 rng_dd(cfg.seed);
    auto cdd = gen_matrix<double_double>(rng_dd, cfg.m, cfg.n, 1.0);
    double t_cdd = detail::time_complex_mgs(cdd, cfg.repetitions);
    out.push_back({"overhead", "cdd", cfg.m, cfg.n, cfg.repetitions, t_cdd, t_cdd / t_d});

    split_mix64 rng_qd(cfg.seed);
    auto cqd = gen_matrix<quad_double>(rng_qd, cfg.m, cfg.n, 1.0);
    double t_cqd = detail::time_complex_mgs(cqd, cfg.repetitions);
    out.push_back({"overhead", "cqd", cfg.m, cfg.n, cfg.repetitions, t_cqd, t_cqd / t_d});

    return out;
}

struct scaling_config {
    std::vector<std::size_t> n_grid{64, 128, 256};
    std::size_t repetitions = 5;
    std::uint64_t seed = 1;
};

namespace detail {

template <class F>
double median_run_seconds(std::size_t reps, F&& once) {
    std::vector<double> times;
    times.reserve(reps);
    for (std::size_t rep = 0; rep < reps; ++rep) times.push_back(time_seconds(once));
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

}  // namespace detail

// Complex-double factorization time across a strictly increasing n grid;
// factor_vs_baseline on each row is the ratio to the previous grid point
// (doubling n should land near the cubic-cost factor 8).
inline std::vector<bench_record> run_scaling_bench(const scaling_config& cfg) {
    if (cfg.repetitions == 0) throw usage_error("repetitions must be at least 1");
    for (std::size_t i = 1; i < cfg.n_grid.size(); ++i) {
        if (cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
            throw usage_error("dimension grid must be strictly increasing");
        }
    }
    std::vector<bench_record> out;
    double prev = 0.0;
    for (std::size_t n : cfg.n_grid) {
        split_mix64 rng(cfg.seed);
        auto a = gen_matrix<double>(rng, n, n, 1.0);
        for (int w = 0; w < 3; ++w) {
            auto f = mgs_qr(a);
            detail::timing_sink = detail::timing_sink + f.r(0, 0).re;
        }
        double t = detail::median_run_seconds(cfg.repetitions, [&] {
            auto f = mgs_qr(a);
            detail::timing_sink = detail::timing_sink + f.r(0, 0).re;
        });
        double factor = prev > 0.0 ? t / prev : 1.0;
        out.push_back({"scaling", "cd", n, n, cfg.repetitions, t, factor});
        prev = t;
    }
    return out;
}

struct speedup_config {
    std::size_t n = 256;
    std::vector<std::size_t> worker_grid{1, 2, 4, 8};
    std::size_t repetitions = 3;
    std::uint64_t seed = 1;
};

// Parallel factorization time across worker counts; factor_vs_baseline is
// the ratio to the 1-worker row (below 1.0 means actual speedup).  The kind
// column carries the worker count.
inline std::vector<bench_record> run_speedup_bench(const speedup_config& cfg) {
    if (cfg.repetitions == 0) throw usage_error("repetitions must be at least 1");
    if (cfg.worker_grid.empty() || cfg.worker_grid.front() != 1) {
        throw usage_error("worker grid must start at 1");
    }
    split_mix64 rng(cfg.seed);
    auto a = gen_matrix<double>(rng, cfg.n, cfg.n, 1.0);

    std::vector<bench_record> out;
    double base = 0.0;
    for (std::size_t workers : cfg.worker_grid) {
        worker_pool pool(workers);
        for (int w = 0; w < 2; ++w) {
            auto f = par_mgs_qr(a, pool);
            detail::timing_sink = detail::timing_sink + f.r(0, 0).re;
        }
        double t = detail::median_run_seconds(cfg.repetitions, [&] {
            auto f = par_mgs_qr(a, pool);
            detail::timing_sink = detail::timing_sink + f.r(0, 0).re;
        });
        if (base == 0.0) base = t;
        out.push_back({"speedup-" + std::to_string(workers), "cd", cfg.n, cfg.n,
                       cfg.repetitions, t, t / base});
    }
    return out;
}

// Dimension reachable in the time budget of the baseline dimension n when
// each unit of work costs `factor` times more (cube-root law).
inline double recalibrated_dimension(std::size_t n, double factor) {
    if (factor <= 0.0) throw usage_error("cost factor must be positive");
    return static_cast<double>(n) * std::cbrt(factor);
}

namespace detail {

inline std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline double parse_csv_double(const std::string& tok, std::size_t line) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (tok.empty() || end != begin + tok.size()) {
        throw parse_error(line, "bad numeric field '" + tok + "'");
    }
    return v;
}

inline std::size_t parse_csv_size(const std::string& tok, std::size_t line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw parse_error(line, "bad count field '" + tok + "'");
    }
    return static_cast<std::size_t>(std::stoull(tok));
}

}  // namespace detail

inline constexpr const char* accuracy_csv_header =
    "kind,precision,m,n,g,trials,exclusions,m_e,M_e,D_e,wall_seconds";
inline constexpr const char* bench_csv_header =
    "kind,precision,m,n,reps,wall_seconds,factor_vs_baseline";

inline std::string accuracy_csv(const std::vector<accuracy_record>& records) {
    std::string out = accuracy_csv_header;
    out += '\n';
    for (const auto& r : records) {
        out += "accuracy,";
        out += precision_label(r.precision);
        out += ',' + std::to_string(r.m) + ',' + std::to_string(r.n);
        out += ',' + detail::shortest(r.g);
        out += ',' + std::to_string(r.trials) + ',' + std::to_string(r.exclusions);
        out += ',' + detail::shortest(r.m_e) + ',' + detail::shortest(r.big_m_e);
        out += ',' + detail::shortest(r.d_e) + ',' + detail::shortest(r.wall_seconds);
        out += '\n';
    }
    return out;
}

inline std::string bench_csv(const std::vector<bench_record>& records) {
    std::string out = bench_csv_header;
    out += '\n';
    for (const auto& r : records) {
        out += r.kind + ',' + r.precision;
        out += ',' + std::to_string(r.m) + ',' + std::to_string(r.n);
        out += ',' + std::to_string(r.reps);
        out += ',' + detail::shortest(r.wall_seconds) + ',' +
               detail::shortest(r.factor_vs_baseline);
        out += '\n';
    }
    return out;
}

namespace detail {

inline std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

}  // namespace detail

// Parses what accuracy_csv wrote (aggregates only; per-trial data is not
// serialized).
inline std::vector<accuracy_record> parse_accuracy_csv(const std::string& text) {
    auto lines = detail::csv_lines(text);
    if (lines.empty() || lines[0] != accuracy_csv_header) {
        throw parse_error(1, "bad accuracy CSV header");
    }
    std::vector<accuracy_record> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        auto f = detail::split_csv_line(lines[li]);
        if (f.size() != 11) throw parse_error(li + 1, "expected 11 fields");
        if (f[0] != "accuracy") throw parse_error(li + 1, "bad kind '" + f[0] + "'");
        accuracy_record r;
        r.precision = parse_precision(f[1]);
        r.m = detail::parse_csv_size(f[2], li + 1);
        r.n = detail::parse_csv_size(f[3], li + 1);
        r.g = detail::parse_csv_double(f[4], li + 1);
        r.trials = detail::parse_csv_size(f[5], li + 1);
        r.exclusions = detail::parse_csv_size(f[6], li + 1);
        r.m_e = detail::parse_csv_double(f[7], li + 1);
        r.big_m_e = detail::parse_csv_double(f[8], li + 1);
        r.d_e = detail::parse_csv_double(f[9], li + 1);
        r.wall_seconds = detail::parse_csv_double(f[10], li + 1);
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<bench_record> parse_bench_csv(const std::string& text) {
    auto lines = detail::csv_lines(text);
    if (lines.empty() || lines[0] != bench_csv_header) {
        throw parse_error(1, "bad bench CSV header");
    }
    std::vector<bench_record> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        auto f = detail::split_csv_line(lines[li]);
        if (f.size() != 7) throw parse_error(li + 1, "expected 7 fields");
        bench_record r;
        r.kind = f[0];
        r.precision = f[1];
        r.m = detail::parse_csv_size(f[2], li + 1);
        r.n = detail::parse_csv_size(f[3], li + 1);
        r.reps = detail::parse_csv_size(f[4], li + 1);
        r.wall_seconds = detail::parse_csv_double(f[5], li + 1);
        r.factor_vs_baseline = detail::parse_csv_double(f[6], li + 1);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace xqr
