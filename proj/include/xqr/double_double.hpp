#pragma once

// Unevaluated sum of two doubles, roughly 31 significant decimal digits.
// Invariant for a normalized value: hi == fl(hi + lo), i.e. |lo| <= ulp(hi)/2,
// and exact zero is hi == lo == 0.  All operators keep that invariant and
// throw overflow_error instead of returning Inf/NaN.

#include <cmath>

#include "xqr/eft.hpp"
#include "xqr/errors.hpp"

namespace xqr {

struct double_double {
    double hi = 0.0;
    double lo = 0.0;

    constexpr double_double() = default;
    constexpr double_double(double h) : hi(h), lo(0.0) {}  // exact widening
    constexpr double_double(double h, double l) : hi(h), lo(l) {}
};

inline double to_double(const double_double& a) { return a.hi; }

inline bool isfinite(const double_double& a) { return std::isfinite(a.hi); }

inline double_double renormalize(const double_double& a) {
    eft_result s = quick_two_sum(a.hi, a.lo);
    return {s.value, s.err};
}

namespace detail {
inline double_double dd_checked(double hi, double lo) {
    if (!std::isfinite(hi)) throw overflow_error("double_double overflow");
    return {hi, lo};
}
}  // namespace detail

// 20 flops; relative error below 3u^2 with u = 2^-53.
inline double_double operator+(const double_double& a, const double_double& b) {
    eft_result s = two_sum(a.hi, b.hi);
    eft_result t = two_sum(a.lo, b.lo);
    eft_result v = quick_two_sum(s.value, s.err + t.value);
    eft_result z = quick_two_sum(v.value, v.err + t.err);
    return detail::dd_checked(z.value, z.err);
}

inline double_double operator-(const double_double& a) { return {-a.hi, -a.lo}; }

inline double_double operator-(const double_double& a, const double_double& b) {
    return a + (-b);
}

// two_prod on the heads plus an fma-folded tail; relative error below 4u^2.
inline double_double operator*(const double_double& a, const double_double& b) {
    eft_result p = two_prod(a.hi, b.hi);
    double t = a.lo * b.lo;
    t = std::fma(a.hi, b.lo, t);
    t = std::fma(a.lo, b.hi, t);
    eft_result z = quick_two_sum(p.value, p.err + t);
    return detail::dd_checked(z.value, z.err);
}

namespace detail {
inline double_double dd_add_d(const double_double& a, double b) {
    eft_result s = two_sum(a.hi, b);
    eft_result z = quick_two_sum(s.value, s.err + a.lo);
    return {z.value, z.err};
}

inline double_double dd_mul_d(const double_double& a, double b) {
    eft_result p = two_prod(a.hi, b);
    eft_result z = quick_two_sum(p.value, std::fma(a.lo, b, p.err));
    return {z.value, z.err};
}
}  // namespace detail

// Newton refinement of the double reciprocal, then one residual correction.
inline double_double operator/(const double_double& a, const double_double& b) {
    if (b.hi == 0.0) throw domain_error("double_double division by zero");
    double x0 = 1.0 / b.hi;
    if (!std::isfinite(x0)) throw overflow_error("double_double division overflow");
    double_double e = double_double(1.0) - detail::dd_mul_d(b, x0);
    double_double x1 = detail::dd_add_d(detail::dd_mul_d(e, x0), x0);
    double_double q = a * x1;
    double_double r = a - b * q;
    q = q + r * x1;
    return detail::dd_checked(q.hi, q.lo);
}

// Karp-style: double estimate, one correction from the exact square residual.
// The result squares back to the argument within about 2^-104 relative.
inline double_double sqrt(const double_double& a) {
    if (a.hi == 0.0 && a.lo == 0.0) return {};
    if (a.hi < 0.0) throw domain_error("double_double sqrt of negative value");
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    eft_result sq = two_prod(ax, ax);
    double_double diff = a - double_double(sq.value, sq.err);
    double corr = diff.hi * (x * 0.5);
    eft_result z = quick_two_sum(ax, corr);
    return detail::dd_checked(z.value, z.err);
}

inline bool operator==(const double_double& a, const double_double& b) {
    return a.hi == b.hi && a.lo == b.lo;
}
inline bool operator!=(const double_double& a, const double_double& b) { return !(a == b); }
inline bool operator<(const double_double& a, const double_double& b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const double_double& a, const double_double& b) { return b < a; }
inline bool operator<=(const double_double& a, const double_double& b) { return !(b < a); }
inline bool operator>=(const double_double& a, const double_double& b) { return !(a < b); }

inline double_double abs(const double_double& a) { return a.hi < 0.0 ? -a : a; }

// Exact scaling by a power of two.
inline double_double mul_pwr2(const double_double& a, double p2) {
    return {a.hi * p2, a.lo * p2};
}

}  // namespace xqr
