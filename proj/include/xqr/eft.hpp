#pragma once

// Error-free transforms on IEEE double: each returns a rounded result plus
// the exact rounding error, so value + err reproduces the ideal result bit
// for bit.  All of them assume round-to-nearest-even and require that the
// compiler performs no contraction (-ffp-contract=off).

#include <cmath>

#include "xqr/errors.hpp"

#if defined(__FMA__) || defined(FP_FAST_FMA)
#define XQR_HARDWARE_FMA 1
#endif

namespace xqr {

struct eft_result {
    double value;
    double err;
};

// Knuth two-sum, 6 flops.  No ordering requirement on |a|, |b|.
inline eft_result two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double ea = a - (s - bb);
    double eb = b - bb;
    return {s, ea + eb};
}

// 3-flop variant, valid only when |a| >= |b| or a == 0.
inline eft_result quick_two_sum(double a, double b) {
    double s = a + b;
    double err = b - (s - a);
    return {s, err};
}

// Veltkamp split: a == hi + lo with both halves on 26/27 significant bits,
// so products of halves are exact.  Overflows for |a| near 2^996.
inline void veltkamp_split(double a, double& hi, double& lo) {
    constexpr double splitter = 134217729.0;  // 2^27 + 1
    double t = splitter * a;
    hi = t - (t - a);
    lo = a - hi;
}

// Dekker product via splitting, 17 flops, no fma needed.
inline eft_result two_prod_split(double a, double b) {
    double p = a * b;
    double ah, al, bh, bl;
    veltkamp_split(a, ah, al);
    veltkamp_split(b, bh, bl);
    double err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    return {p, err};
}

// Product via fused multiply-add, 2 flops where the hardware provides fma.
inline eft_result two_prod_fma(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

// Default product transform: the fma form on hardware that fuses, otherwise
// Dekker splitting (a correct soft fma would also work but costs far more).
inline eft_result two_prod(double a, double b) {
#ifdef XQR_HARDWARE_FMA
    return two_prod_fma(a, b);
#else
    return two_prod_split(a, b);
#endif
}

// Checked forms: reject results outside the finite range.  The unchecked
// forms are for inner loops whose callers test the final result instead.
inline eft_result two_sum_checked(double a, double b) {
    eft_result r = two_sum(a, b);
    if (!std::isfinite(r.value)) throw overflow_error("two_sum overflow");
    return r;
}

inline eft_result two_prod_checked(double a, double b) {
    eft_result r = two_prod(a, b);
    if (!std::isfinite(r.value)) throw overflow_error("two_prod overflow");
    return r;
}

}  // namespace xqr
