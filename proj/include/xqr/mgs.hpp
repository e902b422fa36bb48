#pragma once

// Sequential modified Gram-Schmidt factorization and the triangular solves
// built on it.  Column k is normalized first, then every later column sheds
// its component along q_k immediately.  All inner products go through the
// fixed reduction tree, which is what makes the parallel driver able to
// reproduce these results bit for bit.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "xqr/complex.hpp"
#include "xqr/errors.hpp"
#include "xqr/matrix.hpp"
#include "xqr/real_type.hpp"
#include "xqr/reduction.hpp"

namespace xqr {

template <class R>
struct qr_factors {
    col_matrix<R> q;
    col_matrix<R> r;
};

template <class R>
struct lsq_solution {
    cvector<R> x;
    R residual_norm;
};

namespace detail {

// The imaginary part of a^H a cancels term by term, so only the real part
// feeds the square root.
template <class R>
R column_norm(const cvector<R>& a, cvector<R>& scratch) {
    cplx<R> s = tree_inner_product<R>(a, a, scratch);
    return sqrt(s.re);
}

// Normalizes in place and returns r_kk.  `column_index` is 1-based and only
// used for the breakdown report.
template <class R>
R normalize_column(cvector<R>& a, cvector<R>& scratch, const R& threshold,
                   std::size_t column_index) {
    R rkk = column_norm(a, scratch);
    if (rkk <= threshold) throw breakdown_error(column_index);
    for (auto& e : a) e = div_real(e, rkk);
    return rkk;
}

// Removes the q-component from a and returns the coefficient q^H a.
template <class R>
cplx<R> remove_projection(const cvector<R>& q, cvector<R>& a, cvector<R>& scratch) {
    cplx<R> r = tree_inner_product<R>(q, a, scratch);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] - r * q[i];
    return r;
}

// Columns whose norm falls at or below rows * eps * (largest column norm)
// signal numerical rank deficiency.  `<=` rather than `<` so an exactly zero
// column trips the check even when the whole matrix is zero.
template <class R>
R breakdown_threshold(std::size_t rows, const R& max_column_norm) {
    double scale = static_cast<double>(rows) * real_traits<R>::epsilon;
    return R(scale) * max_column_norm;
}

template <class R>
R max_column_norm(const std::vector<cvector<R>>& cols, cvector<R>& scratch) {
    R best(0.0);
    for (const auto& c : cols) {
        R nrm = column_norm(c, scratch);
        if (nrm > best) best = nrm;
    }
    return best;
}

}  // namespace detail

template <class R>
qr_factors<R> mgs_qr(col_matrix<R> a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    col_matrix<R> r(n, n);
    cvector<R> scratch(m);

    R max_norm(0.0);
    for (std::size_t j = 0; j < n; ++j) {
        R nrm = detail::column_norm(a.column(j), scratch);
        if (nrm > max_norm) max_norm = nrm;
    }
    const R threshold = detail::breakdown_threshold(m, max_norm);

    for (std::size_t k = 0; k < n; ++k) {
        R rkk = detail::normalize_column(a.column(k), scratch, threshold, k + 1);
        r(k, k) = cplx<R>{rkk, R(0.0)};
        for (std::size_t j = k + 1; j < n; ++j) {
            r(k, j) = detail::remove_projection(a.column(k), a.column(j), scratch);
        }
    }
    return {std::move(a), std::move(r)};
}

// Solves Rx = y column by column: one division for x_k, then every earlier
// entry drops its r_jk x_k term.
template <class R>
cvector<R> back_substitute(const col_matrix<R>& r, const cvector<R>& y) {
    const std::size_t n = r.cols();
    if (r.rows() != n) throw dimension_error("triangular factor must be square");
    if (y.size() != n) throw dimension_error("right-hand side length mismatch");

    cvector<R> x = y;
    for (std::size_t k = n; k-- > 0;) {
        cplx<R> d = r(k, k);
        if (d.re == R(0.0) && d.im == R(0.0)) {
            throw domain_error("zero diagonal entry in triangular solve");
        }
        x[k] = x[k] / d;
        for (std::size_t j = 0; j < k; ++j) x[j] = x[j] - r(j, k) * x[k];
    }
    return x;
}

// Factors the augmented columns [A b] but never normalizes the residual
// column: its norm is the least-squares residual z, which may legitimately
// be zero when b lies in the range of A.
template <class R>
lsq_solution<R> lsq_solve(const col_matrix<R>& a, const cvector<R>& b) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m) throw dimension_error("right-hand side length mismatch");

    std::vector<cvector<R>> cols;
    cols.reserve(n + 1);
    for (std::size_t j = 0; j < n; ++j) cols.push_back(a.column(j));
    cols.push_back(b);

    cvector<R> scratch(m);
    const R threshold = detail::breakdown_threshold(m, detail::max_column_norm(cols, scratch));

    col_matrix<R> r(n, n);
    cvector<R> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        R rkk = detail::normalize_column(cols[k], scratch, threshold, k + 1);
        r(k, k) = cplx<R>{rkk, R(0.0)};
        for (std::size_t j = k + 1; j < n; ++j) {
            r(k, j) = detail::remove_projection(cols[k], cols[j], scratch);
        }
        y[k] = detail::remove_projection(cols[k], cols[n], scratch);
    }
    R z = detail::column_norm(cols[n], scratch);

    return {back_substitute(r, y), z};
}

// Largest entry modulus of A - QR, accumulated in working precision.
template <class R>
R residual_max_entry(const col_matrix<R>& a, const col_matrix<R>& q, const col_matrix<R>& r) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (q.rows() != m || q.cols() != n || r.rows() != n || r.cols() != n) {
        throw dimension_error("factor shapes do not match the input matrix");
    }
    R worst(0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            cplx<R> s{R(0.0), R(0.0)};
            for (std::size_t l = 0; l <= j; ++l) s = s + q(i, l) * r(l, j);
            R e = cabs(a(i, j) - s);
            if (e > worst) worst = e;
        }
    }
    return worst;
}

// Same metric, recomputed with every entry widened to W first.  Auditing a
// result in the next precision up shows whether the working-precision value
// is accumulation-limited.
template <class W, class R>
W residual_max_entry_widened(const col_matrix<R>& a, const col_matrix<R>& q,
                             const col_matrix<R>& r) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (q.rows() != m || q.cols() != n || r.rows() != n || r.cols() != n) {
        throw dimension_error("factor shapes do not match the input matrix");
    }
    auto widen = [](const cplx<R>& v) {
        return cplx<W>{real_cast<W>(v.re), real_cast<W>(v.im)};
    };
    W worst(0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            cplx<W> s{W(0.0), W(0.0)};
            for (std::size_t l = 0; l <= j; ++l) s = s + widen(q(i, l)) * widen(r(l, j));
            W e = cabs(widen(a(i, j)) - s);
            if (e > worst) worst = e;
        }
    }
    return worst;
}

// Largest entry modulus of Q^H Q - I.  Conjugate symmetry of the tree inner
// product makes the lower triangle redundant.
template <class R>
R orthogonality_defect(const col_matrix<R>& q) {
    const std::size_t n = q.cols();
    cvector<R> scratch(q.rows());
    R worst(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            cplx<R> s = tree_inner_product<R>(q.column(i), q.column(j), scratch);
            if (i == j) s.re = s.re - R(1.0);
            R e = cabs(s);
            if (e > worst) worst = e;
        }
    }
    return worst;
}

}  // namespace xqr
