#pragma once

// Parallel driver for the factorization.  Each pivot column k gets one
// fork-join round: every later column is updated by its own task, then a
// barrier separates round k from round k+1; the last column is normalized
// by a final single-task launch.  Every arithmetic step reuses the
// sequential primitives on bitwise-equal inputs, so parallel results are
// indistinguishable from sequential ones.

#include <cstddef>
#include <utility>
#include <vector>

#include "xqr/matrix.hpp"
#include "xqr/mgs.hpp"
#include "xqr/worker_pool.hpp"

namespace xqr {

// Whether the pivot column is normalized once by a designated task before
// the update tasks run, or privately by every update task (the variant that
// trades repeated work for one less synchronization point).
enum class normalize_mode { designated, redundant };

// Per-worker working set: pivot copy, target copy, reduction scratch.
// Exactly three length-m vectors per task, never more.
template <class R>
struct worker_arena {
    cvector<R> pivot;
    cvector<R> target;
    cvector<R> work;
    explicit worker_arena(std::size_t m) : pivot(m), target(m), work(m) {}
};

template <class R>
qr_factors<R> par_mgs_qr(col_matrix<R> a, worker_pool& pool,
                         normalize_mode mode = normalize_mode::designated) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    col_matrix<R> r(n, n);

    std::vector<worker_arena<R>> arenas;
    arenas.reserve(pool.size());
    for (std::size_t w = 0; w < pool.size(); ++w) arenas.emplace_back(m);

    cvector<R> scratch(m);
    R max_norm(0.0);
    for (std::size_t j = 0; j < n; ++j) {
        R nrm = detail::column_norm(a.column(j), scratch);
        if (nrm > max_norm) max_norm = nrm;
    }
    const R threshold = detail::breakdown_threshold(m, max_norm);

    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (mode == normalize_mode::designated) {
            pool.run_tasks(1, [&](std::size_t, std::size_t w) {
                R rkk = detail::normalize_column(a.column(k), arenas[w].work, threshold, k + 1);
                r(k, k) = cplx<R>{rkk, R(0.0)};
            });
            pool.run_tasks(n - k - 1, [&](std::size_t t, std::size_t w) {
                const std::size_t j = k + 1 + t;
                auto& ar = arenas[w];
                ar.pivot = a.column(k);
                ar.target = a.column(j);
                r(k, j) = detail::remove_projection(ar.pivot, ar.target, ar.work);
                a.column(j) = ar.target;
            });
        } else {
            pool.run_tasks(n - k - 1, [&](std::size_t t, std::size_t w) {
                const std::size_t j = k + 1 + t;
                auto& ar = arenas[w];
                ar.pivot = a.column(k);
                R rkk = detail::normalize_column(ar.pivot, ar.work, threshold, k + 1);
                if (t == 0) r(k, k) = cplx<R>{rkk, R(0.0)};
                ar.target = a.column(j);
                r(k, j) = detail::remove_projection(ar.pivot, ar.target, ar.work);
                a.column(j) = ar.target;
            });
            // the shared pivot still holds raw data; apply the same division
            // every task already performed on its private copy
            R rkk = r(k, k).re;
            for (auto& e : a.column(k)) e = div_real(e, rkk);
        }
    }

    pool.run_tasks(1, [&](std::size_t, std::size_t w) {
        R rnn = detail::normalize_column(a.column(n - 1), arenas[w].work, threshold, n);
        r(n - 1, n - 1) = cplx<R>{rnn, R(0.0)};
    });

    return {std::move(a), std::move(r)};
}

template <class R>
qr_factors<R> par_mgs_qr(col_matrix<R> a, std::size_t workers,
                         normalize_mode mode = normalize_mode::designated) {
    worker_pool pool(workers);
    return par_mgs_qr(std::move(a), pool, mode);
}

// Least-squares solve with the same fork-join rounds as par_mgs_qr.  The
// right-hand side rides along as one more update target and is never
// normalized, exactly as in the sequential solve, so results match it bit
// for bit.
template <class R>
lsq_solution<R> par_lsq_solve(const col_matrix<R>& a, const cvector<R>& b, worker_pool& pool) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m) throw dimension_error("right-hand side length mismatch");

    std::vector<cvector<R>> cols;
    cols.reserve(n + 1);
    for (std::size_t j = 0; j < n; ++j) cols.push_back(a.column(j));
    cols.push_back(b);

    std::vector<worker_arena<R>> arenas;
    arenas.reserve(pool.size());
    for (std::size_t w = 0; w < pool.size(); ++w) arenas.emplace_back(m);

    cvector<R> scratch(m);
    const R threshold = detail::breakdown_threshold(m, detail::max_column_norm(cols, scratch));

    col_matrix<R> r(n, n);
    cvector<R> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        pool.run_tasks(1, [&](std::size_t, std::size_t w) {
            R rkk = detail::normalize_column(cols[k], arenas[w].work, threshold, k + 1);
            r(k, k) = cplx<R>{rkk, R(0.0)};
        });
        pool.run_tasks(n - k, [&](std::size_t t, std::size_t w) {
            const std::size_t j = k + 1 + t;
            auto& ar = arenas[w];
            ar.pivot = cols[k];
            ar.target = cols[j];
            cplx<R> rkj = detail::remove_projection(ar.pivot, ar.target, ar.work);
            cols[j] = ar.target;
            if (j < n) {
                r(k, j) = rkj;
            } else {
                y[k] = rkj;
            }
        });
    }
    R z = detail::column_norm(cols[n], scratch);

    return {par_back_substitute(r, y, pool), z};
}

template <class R>
lsq_solution<R> par_lsq_solve(const col_matrix<R>& a, const cvector<R>& b, std::size_t workers) {
    worker_pool pool(workers);
    return par_lsq_solve(a, b, pool);
}

// Triangular solve with one division task per step followed by data-parallel
// updates of the remaining entries.
template <class R>
cvector<R> par_back_substitute(const col_matrix<R>& r, const cvector<R>& y, worker_pool& pool) {
    const std::size_t n = r.cols();
    if (r.rows() != n) throw dimension_error("triangular factor must be square");
    if (y.size() != n) throw dimension_error("right-hand side length mismatch");

    cvector<R> x = y;
    for (std::size_t k = n; k-- > 0;) {
        pool.run_tasks(1, [&](std::size_t, std::size_t) {
            cplx<R> d = r(k, k);
            if (d.re == R(0.0) && d.im == R(0.0)) {
                throw domain_error("zero diagonal entry in triangular solve");
            }
            x[k] = x[k] / d;
        });
        pool.run_tasks(k, [&](std::size_t j, std::size_t) {
            x[j] = x[j] - r(j, k) * x[k];
        });
    }
    return x;
}

template <class R>
cvector<R> par_back_substitute(const col_matrix<R>& r, const cvector<R>& y, std::size_t workers) {
    worker_pool pool(workers);
    return par_back_substitute(r, y, pool);
}

}  // namespace xqr
