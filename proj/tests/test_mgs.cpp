#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "xqr/matrix.hpp"
#include "xqr/mgs.hpp"
#include "xqr/random.hpp"
#include "support/exact_dyadic.hpp"
#include "support/householder.hpp"
#include "support/random_values.hpp"
#include "support/ulps.hpp"

using xqr::col_matrix;
using xqr::cplx;
using xqr::cvector;
using xqr::double_double;
using xqr::quad_double;
using xqr::to_double;
using oracle::exact_dyadic;
using oracle::ulps_between;

namespace {

template <class R>
col_matrix<R> random_matrix(xqr::split_mix64& rng, std::size_t m, std::size_t n, double g) {
    col_matrix<R> a(m, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) a(i, j) = xqr::random_ranged_complex<R>(rng, g);
    return a;
}

oracle::cmat to_cmat(const col_matrix<double>& a) {
    oracle::cmat out(a.cols(), std::vector<oracle::cxd>(a.rows()));
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out[j][i] = {a(i, j).re, a(i, j).im};
    return out;
}

}  // namespace

TEMPLATE_TEST_CASE("identity factors to identity", "[mgs]", double, double_double, quad_double) {
    using R = TestType;
    auto f = xqr::mgs_qr(col_matrix<R>::identity(4));
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t i = 0; i < 4; ++i) {
            cplx<R> expect{R(i == j ? 1.0 : 0.0), R(0.0)};
            REQUIRE(f.q(i, j) == expect);
            REQUIRE(f.r(i, j) == expect);
        }
    }
}

TEST_CASE("single real column normalizes exactly") {
    col_matrix<double> a(2, 1);
    a(0, 0) = {3.0, 0.0};
    a(1, 0) = {4.0, 0.0};
    auto f = xqr::mgs_qr(a);
    CHECK(f.r(0, 0).re == 5.0);
    CHECK(f.r(0, 0).im == 0.0);
    CHECK(f.q(0, 0).re == 0.6);
    CHECK(f.q(1, 0).re == 0.8);
    CHECK(f.q(0, 0).im == 0.0);
    CHECK(f.q(1, 0).im == 0.0);
}

TEST_CASE("dependent columns break down with the offending index") {
    col_matrix<double> a(3, 2);
    for (std::size_t i = 0; i < 3; ++i) {
        a(i, 0) = {double(i) + 1.0, 0.5};
        a(i, 1) = a(i, 0);
    }
    try {
        xqr::mgs_qr(a);
        FAIL("expected breakdown");
    } catch (const xqr::breakdown_error& e) {
        CHECK(e.column == 2);
    }

    col_matrix<double> z(2, 2);
    try {
        xqr::mgs_qr(z);
        FAIL("expected breakdown");
    } catch (const xqr::breakdown_error& e) {
        CHECK(e.column == 1);
    }
}

TEST_CASE("factorization agrees with a Householder reference") {
    std::mt19937_64 gen(20260817);
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{{8, 5}, {16, 16}, {12, 9}};
    for (auto [m, n] : shapes) {
        col_matrix<double> a(m, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < m; ++i)
                a(i, j) = {testsupport::signed_unit(gen), testsupport::signed_unit(gen)};

        oracle::cmat ac = to_cmat(a);
        auto hh = oracle::householder_qr(ac, m, n);
        double scale = oracle::max_entry_norm(ac, m, n);
        double hh_res = oracle::reconstruction_residual(ac, hh.q, hh.r, m, n);

        auto f = xqr::mgs_qr(a);
        double mgs_res = oracle::reconstruction_residual(ac, to_cmat(f.q), to_cmat(f.r), m, n);

        CHECK(hh_res <= 1e-13 * scale);
        CHECK(mgs_res <= 1e-13 * scale);
    }
}

TEST_CASE("R diagonal tracks the reduced column norms to a few ulps") {
    xqr::split_mix64 rng(91);
    auto a = random_matrix<double>(rng, 8, 8, 1.0);
    auto f = xqr::mgs_qr(a);

    col_matrix<double> w = a;
    cvector<double> scratch(8);
    double max_norm = 0.0;
    for (std::size_t j = 0; j < 8; ++j) {
        double nrm = xqr::detail::column_norm(w.column(j), scratch);
        if (nrm > max_norm) max_norm = nrm;
    }
    double threshold = xqr::detail::breakdown_threshold(8, max_norm);

    for (std::size_t k = 0; k < 8; ++k) {
        quad_double acc(0.0);
        for (const auto& e : w.column(k)) {
            acc = acc + quad_double(e.re) * quad_double(e.re) +
                  quad_double(e.im) * quad_double(e.im);
        }
        double reference = to_double(xqr::sqrt(acc));
        CHECK(ulps_between(f.r(k, k).re, reference) <= 4);
        CHECK(f.r(k, k).im == 0.0);
        CHECK(f.r(k, k).re > 0.0);
        for (std::size_t i = k + 1; i < 8; ++i) {
            CHECK(f.r(i, k).re == 0.0);
            CHECK(f.r(i, k).im == 0.0);
        }

        xqr::detail::normalize_column(w.column(k), scratch, threshold, k + 1);
        for (std::size_t j = k + 1; j < 8; ++j)
            xqr::detail::remove_projection(w.column(k), w.column(j), scratch);
    }
}

TEST_CASE("factorization is deterministic") {
    xqr::split_mix64 rng(7);
    auto a = random_matrix<double_double>(rng, 6, 6, 2.0);
    auto f1 = xqr::mgs_qr(a);
    auto f2 = xqr::mgs_qr(a);
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t i = 0; i < 6; ++i) {
            REQUIRE(f1.q(i, j) == f2.q(i, j));
            REQUIRE(f1.r(i, j) == f2.r(i, j));
        }
}

TEST_CASE("back substitution solves hand-checked systems") {
    col_matrix<double> r(2, 2);
    r(0, 0) = {2.0, 0.0};
    r(0, 1) = {1.0, 0.0};
    r(1, 1) = {4.0, 0.0};
    cvector<double> y{{4.0, 0.0}, {8.0, 0.0}};
    auto x = xqr::back_substitute(r, y);
    CHECK(x[0].re == 1.0);
    CHECK(x[1].re == 2.0);
    CHECK(x[0].im == 0.0);
    CHECK(x[1].im == 0.0);

    auto eye = col_matrix<double>::identity(3);
    cvector<double> y3{{1.5, -2.0}, {0.25, 3.0}, {-1.0, 0.5}};
    auto x3 = xqr::back_substitute(eye, y3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(x3[i] == y3[i]);

    col_matrix<double> bad(2, 2);
    bad(0, 0) = {1.0, 0.0};
    CHECK_THROWS_AS(xqr::back_substitute(bad, y), xqr::domain_error);

    col_matrix<double> rect(3, 2);
    CHECK_THROWS_AS(xqr::back_substitute(rect, y), xqr::dimension_error);
    cvector<double> shorty{{1.0, 0.0}};
    CHECK_THROWS_AS(xqr::back_substitute(eye, shorty), xqr::dimension_error);
}

TEST_CASE("back substitution residual is tiny under exact forward multiply") {
    std::mt19937_64 gen(20260818);
    const std::size_t n = 16;
    col_matrix<double> r(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) r(i, j) = {testsupport::signed_unit(gen), testsupport::signed_unit(gen)};
        double theta = 2.0 * std::numbers::pi * testsupport::unit(gen);
        double rad = 0.5 + 1.5 * testsupport::unit(gen);
        r(j, j) = {rad * std::cos(theta), rad * std::sin(theta)};
    }
    cvector<double> y(n);
    for (auto& e : y) e = {testsupport::signed_unit(gen), testsupport::signed_unit(gen)};
    auto x = xqr::back_substitute(r, y);

    double ymax = 0.0;
    for (const auto& e : y) ymax = std::max(ymax, std::abs(std::complex<double>(e.re, e.im)));
    exact_dyadic tol = oracle::dyadic_of(1e-13 * ymax);
    exact_dyadic tol_sq = tol * tol;

    for (std::size_t i = 0; i < n; ++i) {
        oracle::dyadic_complex acc{oracle::dyadic_of(-y[i].re), oracle::dyadic_of(-y[i].im)};
        for (std::size_t j = i; j < n; ++j) {
            oracle::dyadic_complex rij{oracle::dyadic_of(r(i, j).re), oracle::dyadic_of(r(i, j).im)};
            oracle::dyadic_complex xj{oracle::dyadic_of(x[j].re), oracle::dyadic_of(x[j].im)};
            acc.re = acc.re + rij.re * xj.re - rij.im * xj.im;
            acc.im = acc.im + rij.re * xj.im + rij.im * xj.re;
        }
        exact_dyadic row_sq = acc.re * acc.re + acc.im * acc.im;
        REQUIRE(exact_dyadic::abs_le_scaled(row_sq, tol_sq, 0));
    }
}

TEMPLATE_TEST_CASE("least squares on the identity returns the right-hand side", "[lsq]",
                   double, double_double) {
    using R = TestType;
    auto a = col_matrix<R>::identity(3);
    cvector<R> b{{R(1.5), R(-2.0)}, {R(0.25), R(3.0)}, {R(-1.0), R(0.5)}};
    auto sol = xqr::lsq_solve(a, b);
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(sol.x[i] == b[i]);
    CHECK(sol.residual_norm == R(0.0));
}

TEST_CASE("square solve matches Cramer's rule") {
    col_matrix<double> a(2, 2);
    a(0, 0) = {1.0, 2.0};
    a(1, 0) = {-0.25, 0.75};
    a(0, 1) = {0.5, -1.0};
    a(1, 1) = {2.0, 0.5};
    cvector<double> b{{1.0, 0.0}, {0.0, 1.0}};

    using cxd = std::complex<double>;
    cxd a00(1.0, 2.0), a10(-0.25, 0.75), a01(0.5, -1.0), a11(2.0, 0.5);
    cxd b0(1.0, 0.0), b1(0.0, 1.0);
    cxd det = a00 * a11 - a01 * a10;
    cxd x0 = (b0 * a11 - a01 * b1) / det;
    cxd x1 = (a00 * b1 - b0 * a10) / det;

    auto sol = xqr::lsq_solve(a, b);
    CHECK(std::abs(cxd(sol.x[0].re, sol.x[0].im) - x0) <= 1e-12);
    CHECK(std::abs(cxd(sol.x[1].re, sol.x[1].im) - x1) <= 1e-12);
    CHECK(sol.residual_norm >= 0.0);
}

namespace {

// 2x2 normal equations solved exactly: returns x entries as dyadic ratios
// evaluated in double at the very end.
struct exact_lsq2 {
    double x0, x1;
};

exact_lsq2 normal_equations_2col(const col_matrix<double>& a, const cvector<double>& b) {
    using oracle::dyadic_of;
    exact_dyadic g00 = dyadic_of(0.0), g01 = dyadic_of(0.0), g11 = dyadic_of(0.0);
    exact_dyadic c0 = dyadic_of(0.0), c1 = dyadic_of(0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        exact_dyadic a0 = dyadic_of(a(i, 0).re);
        exact_dyadic a1 = dyadic_of(a(i, 1).re);
        exact_dyadic bi = dyadic_of(b[i].re);
        g00 = g00 + a0 * a0;
        g01 = g01 + a0 * a1;
        g11 = g11 + a1 * a1;
        c0 = c0 + a0 * bi;
        c1 = c1 + a1 * bi;
    }
    exact_dyadic det = g00 * g11 - g01 * g01;
    exact_dyadic n0 = c0 * g11 - g01 * c1;
    exact_dyadic n1 = g00 * c1 - g01 * c0;
    return {n0.to_double_approx() / det.to_double_approx(),
            n1.to_double_approx() / det.to_double_approx()};
}

}  // namespace

TEST_CASE("overdetermined real solve matches exact normal equations") {
    col_matrix<double> a(4, 2);
    const double col0[] = {1.0, 0.5, -2.0, 0.25};
    const double col1[] = {3.0, 1.5, -0.75, 2.0};
    const double rhs[] = {1.0, -2.0, 0.5, 3.0};
    cvector<double> b(4);
    for (std::size_t i = 0; i < 4; ++i) {
        a(i, 0) = {col0[i], 0.0};
        a(i, 1) = {col1[i], 0.0};
        b[i] = {rhs[i], 0.0};
    }

    auto sol = xqr::lsq_solve(a, b);
    auto exact = normal_equations_2col(a, b);
    CHECK(std::abs(sol.x[0].re - exact.x0) <= 1e-12 * (1.0 + std::abs(exact.x0)));
    CHECK(std::abs(sol.x[1].re - exact.x1) <= 1e-12 * (1.0 + std::abs(exact.x1)));
    CHECK(std::abs(sol.x[0].im) <= 1e-13);
    CHECK(std::abs(sol.x[1].im) <= 1e-13);

    // the squared residual splits into the triangular part plus z^2
    auto aug = col_matrix<double>(4, 3);
    for (std::size_t i = 0; i < 4; ++i) {
        aug(i, 0) = a(i, 0);
        aug(i, 1) = a(i, 1);
        aug(i, 2) = b[i];
    }
    auto f = xqr::mgs_qr(aug);
    CHECK(f.r(2, 2).re == sol.residual_norm);

    col_matrix<double> r2(2, 2);
    r2(0, 0) = f.r(0, 0);
    r2(0, 1) = f.r(0, 1);
    r2(1, 1) = f.r(1, 1);
    cvector<double> y{f.r(0, 2), f.r(1, 2)};
    auto x_again = xqr::back_substitute(r2, y);
    CHECK(x_again[0] == sol.x[0]);
    CHECK(x_again[1] == sol.x[1]);

    using cxd = std::complex<double>;
    double lhs = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        cxd row = cxd(b[i].re, b[i].im);
        row -= cxd(a(i, 0).re, a(i, 0).im) * cxd(sol.x[0].re, sol.x[0].im);
        row -= cxd(a(i, 1).re, a(i, 1).im) * cxd(sol.x[1].re, sol.x[1].im);
        lhs += std::norm(row);
    }
    double rhs_sq = sol.residual_norm * sol.residual_norm;
    for (std::size_t i = 0; i < 2; ++i) {
        cxd row = cxd(y[i].re, y[i].im);
        for (std::size_t j = i; j < 2; ++j)
            row -= cxd(r2(i, j).re, r2(i, j).im) * cxd(sol.x[j].re, sol.x[j].im);
        rhs_sq += std::norm(row);
    }
    CHECK(ulps_between(lhs, rhs_sq) <= 8);
}

TEST_CASE("squared residual identity holds on random instances") {
    xqr::split_mix64 rng(20260819);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_matrix<double>(rng, 6, 3, 0.0);
        cvector<double> b(6);
        for (auto& e : b) e = xqr::random_unit_complex<double>(rng);

        auto sol = xqr::lsq_solve(a, b);

        using cxd = std::complex<double>;
        double lhs = 0.0;
        for (std::size_t i = 0; i < 6; ++i) {
            cxd row(b[i].re, b[i].im);
            for (std::size_t j = 0; j < 3; ++j)
                row -= cxd(a(i, j).re, a(i, j).im) * cxd(sol.x[j].re, sol.x[j].im);
            lhs += std::norm(row);
        }

        col_matrix<double> aug(6, 4);
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 3; ++j) aug(i, j) = a(i, j);
            aug(i, 3) = b[i];
        }
        auto f = xqr::mgs_qr(aug);
        REQUIRE(f.r(3, 3).re == sol.residual_norm);

        double rhs_sq = sol.residual_norm * sol.residual_norm;
        for (std::size_t i = 0; i < 3; ++i) {
            cxd row(f.r(i, 3).re, f.r(i, 3).im);
            for (std::size_t j = i; j < 3; ++j)
                row -= cxd(f.r(i, j).re, f.r(i, j).im) * cxd(sol.x[j].re, sol.x[j].im);
            rhs_sq += std::norm(row);
        }
        REQUIRE(ulps_between(lhs, rhs_sq) <= 16);
    }
}

TEST_CASE("residual and orthogonality metrics vanish on exact factors") {
    auto eye = col_matrix<double>::identity(3);
    CHECK(xqr::residual_max_entry(eye, eye, eye) == 0.0);
    CHECK(xqr::orthogonality_defect(eye) == 0.0);

    // rank-1 reconstruction: A built from the same products the metric forms
    std::mt19937_64 gen(5);
    const std::size_t m = 5, n = 3;
    cvector<double> qv(m), rv(n);
    for (auto& e : qv) e = {testsupport::signed_unit(gen), testsupport::signed_unit(gen)};
    for (auto& e : rv) e = {testsupport::signed_unit(gen), testsupport::signed_unit(gen)};
    rv[0].im = 0.0;

    col_matrix<double> a(m, n), q(m, n), r(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) a(i, j) = qv[i] * rv[j];
    for (std::size_t i = 0; i < m; ++i) q(i, 0) = qv[i];
    for (std::size_t j = 0; j < n; ++j) r(0, j) = rv[j];
    double e = xqr::residual_max_entry(a, q, r);
    CHECK(e <= m * 0x1p-52);

    col_matrix<double> wrong(m, n - 1);
    CHECK_THROWS_AS(xqr::residual_max_entry(a, wrong, r), xqr::dimension_error);
}

TEMPLATE_TEST_CASE("random factorizations stay inside the working-precision bands",
                   "[mgs][bands]", double, double_double, quad_double) {
    using R = TestType;
    xqr::split_mix64 rng(20260820);
    auto a = random_matrix<R>(rng, 32, 32, 1.0);
    auto f = xqr::mgs_qr(a);
    double resid = to_double(xqr::residual_max_entry(a, f.q, f.r));
    double defect = to_double(xqr::orthogonality_defect(f.q));

    double resid_bound, defect_bound;
    if constexpr (std::is_same_v<R, double>) {
        resid_bound = 1e-13;
        defect_bound = 1e-13;
    } else if constexpr (std::is_same_v<R, double_double>) {
        resid_bound = 1e-29;
        defect_bound = 1e-29;
    } else {
        resid_bound = 1e-45;
        defect_bound = 1e-45;
    }
    CHECK(resid <= resid_bound);
    CHECK(defect <= defect_bound);
    CHECK(resid > 0.0);
}

TEST_CASE("widened residual audit stays in band") {
    xqr::split_mix64 rng(3);
    auto a = random_matrix<double>(rng, 8, 8, 1.0);
    auto f = xqr::mgs_qr(a);
    double audited = to_double(xqr::residual_max_entry_widened<double_double>(a, f.q, f.r));
    CHECK(audited > 0.0);
    CHECK(audited <= 1e-13);
}
