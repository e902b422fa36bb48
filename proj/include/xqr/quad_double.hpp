#pragma once

// Unevaluated sum of four doubles, roughly 62 significant decimal digits.
// Normalized form: each component is at most half an ulp of the one before
// it, c[0] == fl(value).  The add/mul kernels below are the "accurate"
// variants: they merge every partial term through error-free transforms
// before renormalizing, so the result is correct to the last component up
// to its final rounding.

#include <array>
#include <cmath>

#include "xqr/double_double.hpp"
#include "xqr/eft.hpp"
#include "xqr/errors.hpp"

namespace xqr {

struct quad_double {
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

    constexpr quad_double() = default;
    constexpr quad_double(double d) : c{d, 0.0, 0.0, 0.0} {}  // exact widening
    constexpr quad_double(double c0, double c1, double c2, double c3) : c{c0, c1, c2, c3} {}
    explicit constexpr quad_double(const double_double& d) : c{d.hi, d.lo, 0.0, 0.0} {}
};

inline double to_double(const quad_double& a) { return a.c[0]; }

inline double_double to_double_double(const quad_double& a) {
    eft_result s = two_sum(a.c[0], a.c[1]);
    eft_result z = quick_two_sum(s.value, s.err + (a.c[2] + a.c[3]));
    return {z.value, z.err};
}

inline bool isfinite(const quad_double& a) { return std::isfinite(a.c[0]); }

namespace detail {

// (a, b, c) -> (sum, err1, err2), exact.
inline void three_sum(double& a, double& b, double& c) {
    eft_result t = two_sum(a, b);
    eft_result u = two_sum(c, t.value);
    eft_result v = two_sum(t.err, u.err);
    a = u.value;
    b = v.value;
    c = v.err;
}

// As three_sum but the two error terms are folded into one rounded value.
inline void three_sum2(double& a, double& b, double c) {
    eft_result t = two_sum(a, b);
    eft_result u = two_sum(c, t.value);
    a = u.value;
    b = t.err + u.err;
}

// Accumulate c into the pair (a, b); returns a component that has become
// final (or 0 when the pair absorbed everything).
inline double quick_three_accum(double& a, double& b, double c) {
    eft_result t = two_sum(b, c);
    eft_result u = two_sum(a, t.value);
    b = t.err;
    a = u.err;
    bool za = (a != 0.0);
    bool zb = (b != 0.0);
    if (za && zb) return u.value;
    if (!zb) {
        b = a;
        a = u.value;
    } else {
        a = u.value;
    }
    return 0.0;
}

// Five components down to a normalized four-component form.
inline void renorm(double& c0, double& c1, double& c2, double& c3, double& c4) {
    if (std::isinf(c0)) return;
    eft_result t;
    t = quick_two_sum(c3, c4);
    c4 = t.err;
    t = quick_two_sum(c2, t.value);
    c3 = t.err;
    t = quick_two_sum(c1, t.value);
    c2 = t.err;
    t = quick_two_sum(c0, t.value);
    c1 = t.err;
    c0 = t.value;

    double s0 = c0, s1 = c1, s2 = 0.0, s3 = 0.0;
    if (s1 != 0.0) {
        t = quick_two_sum(s1, c2);
        s1 = t.value;
        s2 = t.err;
        if (s2 != 0.0) {
            t = quick_two_sum(s2, c3);
            s2 = t.value;
            s3 = t.err;
            if (s3 != 0.0)
                s3 += c4;
            else
                s2 += c4;
        } else {
            t = quick_two_sum(s1, c3);
            s1 = t.value;
            s2 = t.err;
            if (s2 != 0.0) {
                t = quick_two_sum(s2, c4);
                s2 = t.value;
                s3 = t.err;
            } else {
                t = quick_two_sum(s1, c4);
                s1 = t.value;
                s2 = t.err;
            }
        }
    } else {
        t = quick_two_sum(s0, c2);
        s0 = t.value;
        s1 = t.err;
        if (s1 != 0.0) {
            t = quick_two_sum(s1, c3);
            s1 = t.value;
            s2 = t.err;
            if (s2 != 0.0) {
                t = quick_two_sum(s2, c4);
                s2 = t.value;
                s3 = t.err;
            } else {
                t = quick_two_sum(s1, c4);
                s1 = t.value;
                s2 = t.err;
            }
        } else {
            t = quick_two_sum(s0, c3);
            s0 = t.value;
            s1 = t.err;
            if (s1 != 0.0) {
                t = quick_two_sum(s1, c4);
                s1 = t.value;
                s2 = t.err;
            } else {
                t = quick_two_sum(s0, c4);
                s0 = t.value;
                s1 = t.err;
            }
        }
    }
    c0 = s0;
    c1 = s1;
    c2 = s2;
    c3 = s3;
}

// Four components to normalized form.
inline void renorm(double& c0, double& c1, double& c2, double& c3) {
    if (std::isinf(c0)) return;
    eft_result t;
    t = quick_two_sum(c2, c3);
    c3 = t.err;
    t = quick_two_sum(c1, t.value);
    c2 = t.err;
    t = quick_two_sum(c0, t.value);
    c1 = t.err;
    c0 = t.value;

    double s0 = c0, s1 = c1, s2 = 0.0, s3 = 0.0;
    if (s1 != 0.0) {
        t = quick_two_sum(s1, c2);
        s1 = t.value;
        s2 = t.err;
        if (s2 != 0.0) {
            t = quick_two_sum(s2, c3);
            s2 = t.value;
            s3 = t.err;
        } else {
            t = quick_two_sum(s1, c3);
            s1 = t.value;
            s2 = t.err;
        }
    } else {
        t = quick_two_sum(s0, c2);
        s0 = t.value;
        s1 = t.err;
        if (s1 != 0.0) {
            t = quick_two_sum(s1, c3);
            s1 = t.value;
            s2 = t.err;
        } else {
            t = quick_two_sum(s0, c3);
            s0 = t.value;
            s1 = t.err;
        }
    }
    c0 = s0;
    c1 = s1;
    c2 = s2;
    c3 = s3;
}

inline quad_double qd_checked(const quad_double& a) {
    if (!std::isfinite(a.c[0])) throw overflow_error("quad_double overflow");
    return a;
}

}  // namespace detail

inline quad_double renormalize(const quad_double& a) {
    double c0 = a.c[0], c1 = a.c[1], c2 = a.c[2], c3 = a.c[3];
    detail::renorm(c0, c1, c2, c3);
    return {c0, c1, c2, c3};
}

// Merge the eight components in decreasing magnitude, condensing exactly.
inline quad_double operator+(const quad_double& a, const quad_double& b) {
    int i = 0, j = 0, k = 0;
    double u, v;
    double x[4] = {0.0, 0.0, 0.0, 0.0};

    if (std::abs(a.c[i]) > std::abs(b.c[j]))
        u = a.c[i++];
    else
        u = b.c[j++];
    if (std::abs(a.c[i]) > std::abs(b.c[j]))
        v = a.c[i++];
    else
        v = b.c[j++];

    eft_result t = quick_two_sum(u, v);
    u = t.value;
    v = t.err;

    while (k < 4) {
        if (i >= 4 && j >= 4) {
            x[k] = u;
            if (k < 3) x[++k] = v;
            break;
        }
        double s;
        if (i >= 4)
            s = b.c[j++];
        else if (j >= 4)
            s = a.c[i++];
        else if (std::abs(a.c[i]) > std::abs(b.c[j]))
            s = a.c[i++];
        else
            s = b.c[j++];
        double d = detail::quick_three_accum(u, v, s);
        if (d != 0.0) x[k++] = d;
    }
    for (; i < 4; ++i) x[3] += a.c[i];
    for (; j < 4; ++j) x[3] += b.c[j];

    detail::renorm(x[0], x[1], x[2], x[3]);
    return detail::qd_checked({x[0], x[1], x[2], x[3]});
}

inline quad_double operator-(const quad_double& a) {
    return {-a.c[0], -a.c[1], -a.c[2], -a.c[3]};
}

inline quad_double operator-(const quad_double& a, const quad_double& b) { return a + (-b); }

// All partial products down to order u^3 through error-free transforms,
// the u^4 strip folded in rounded.
inline quad_double operator*(const quad_double& a, const quad_double& b) {
    eft_result e;
    e = two_prod(a.c[0], b.c[0]);
    double p0 = e.value, q0 = e.err;
    e = two_prod(a.c[0], b.c[1]);
    double p1 = e.value, q1 = e.err;
    e = two_prod(a.c[1], b.c[0]);
    double p2 = e.value, q2 = e.err;
    e = two_prod(a.c[0], b.c[2]);
    double p3 = e.value, q3 = e.err;
    e = two_prod(a.c[1], b.c[1]);
    double p4 = e.value, q4 = e.err;
    e = two_prod(a.c[2], b.c[0]);
    double p5 = e.value, q5 = e.err;

    detail::three_sum(p1, p2, q0);

    detail::three_sum(p2, q1, q2);
    detail::three_sum(p3, p4, p5);
    eft_result s = two_sum(p2, p3);
    double s0 = s.value, t0 = s.err;
    eft_result s_ = two_sum(q1, p4);
    double s1 = s_.value, t1 = s_.err;
    double s2 = q2 + p5;
    s_ = two_sum(s1, t0);
    s1 = s_.value;
    t0 = s_.err;
    s2 += (t0 + t1);

    e = two_prod(a.c[0], b.c[3]);
    double p6 = e.value, q6 = e.err;
    e = two_prod(a.c[1], b.c[2]);
    double p7 = e.value, q7 = e.err;
    e = two_prod(a.c[2], b.c[1]);
    double p8 = e.value, q8 = e.err;
    e = two_prod(a.c[3], b.c[0]);
    double p9 = e.value, q9 = e.err;

    s_ = two_sum(q0, q3);
    q0 = s_.value;
    q3 = s_.err;
    s_ = two_sum(q4, q5);
    q4 = s_.value;
    q5 = s_.err;
    s_ = two_sum(p6, p7);
    p6 = s_.value;
    p7 = s_.err;
    s_ = two_sum(p8, p9);
    p8 = s_.value;
    p9 = s_.err;

    s_ = two_sum(q0, q4);
    double t0b = s_.value, t1b = s_.err;
    t1b += (q3 + q5);

    s_ = two_sum(p6, p8);
    double r0 = s_.value, r1 = s_.err;
    r1 += (p7 + p9);

    s_ = two_sum(t0b, r0);
    double q3b = s_.value, q4b = s_.err;
    q4b += (t1b + r1);

    s_ = two_sum(q3b, s1);
    double t0c = s_.value, t1c = s_.err;
    t1c += q4b;

    t1c += a.c[1] * b.c[3] + a.c[2] * b.c[2] + a.c[3] * b.c[1] + q6 + q7 + q8 + q9;

    detail::renorm(p0, p1, s0, t0c, t1c);
    return detail::qd_checked({p0, p1, s0, t0c});
}

// Exact scaling by a power of two.
inline quad_double mul_pwr2(const quad_double& a, double p2) {
    return {a.c[0] * p2, a.c[1] * p2, a.c[2] * p2, a.c[3] * p2};
}

// Newton refinement of the double reciprocal, then one residual correction.
inline quad_double operator/(const quad_double& a, const quad_double& b) {
    if (b.c[0] == 0.0) throw domain_error("quad_double division by zero");
    double seed = 1.0 / b.c[0];
    if (!std::isfinite(seed)) throw overflow_error("quad_double division overflow");
    quad_double x(seed);
    for (int it = 0; it < 2; ++it) x = x + x * (quad_double(1.0) - b * x);
    quad_double q = a * x;
    q = q + x * (a - b * q);
    return detail::qd_checked(q);
}

// Newton on the inverse square root, then one Heron correction; the result
// squares back to the argument within about 2^-208 relative.
inline quad_double sqrt(const quad_double& a) {
    if (a.c[0] == 0.0 && a.c[1] == 0.0 && a.c[2] == 0.0 && a.c[3] == 0.0) return {};
    if (a.c[0] < 0.0) throw domain_error("quad_double sqrt of negative value");
    quad_double x(1.0 / std::sqrt(a.c[0]));
    for (int it = 0; it < 2; ++it) {
        quad_double t = a * x;
        x = x + mul_pwr2(x * (quad_double(1.0) - t * x), 0.5);
    }
    quad_double y = a * x;
    y = y + mul_pwr2((a - y * y) * x, 0.5);
    return detail::qd_checked(y);
}

inline bool operator==(const quad_double& a, const quad_double& b) { return a.c == b.c; }
inline bool operator!=(const quad_double& a, const quad_double& b) { return !(a == b); }
inline bool operator<(const quad_double& a, const quad_double& b) {
    for (int i = 0; i < 4; ++i) {
        if (a.c[i] < b.c[i]) return true;
        if (a.c[i] > b.c[i]) return false;
    }
    return false;
}
inline bool operator>(const quad_double& a, const quad_double& b) { return b < a; }
inline bool operator<=(const quad_double& a, const quad_double& b) { return !(b < a); }
inline bool operator>=(const quad_double& a, const quad_double& b) { return !(a < b); }

inline quad_double abs(const quad_double& a) { return a.c[0] < 0.0 ? -a : a; }

}  // namespace xqr
