#pragma once

// Complex arithmetic generic over the real scalar type R.

#include <vector>

#include "xqr/errors.hpp"
#include "xqr/real_type.hpp"

namespace xqr {

template <class R>
struct cplx {
    R re{};
    R im{};
};

template <class R>
using cvector = std::vector<cplx<R>>;

template <class R>
cplx<R> conj(const cplx<R>& z) {
    return {z.re, -z.im};
}

template <class R>
cplx<R> operator+(const cplx<R>& a, const cplx<R>& b) {
    return {a.re + b.re, a.im + b.im};
}

template <class R>
cplx<R> operator-(const cplx<R>& a, const cplx<R>& b) {
    return {a.re - b.re, a.im - b.im};
}

template <class R>
cplx<R> operator-(const cplx<R>& a) {
    return {-a.re, -a.im};
}

template <class R>
cplx<R> operator*(const cplx<R>& a, const cplx<R>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

// Smith's scaled division: no intermediate overflow for extreme moduli.
template <class R>
cplx<R> operator/(const cplx<R>& a, const cplx<R>& b) {
    if (b.re == R(0.0) && b.im == R(0.0)) throw domain_error("complex division by zero");
    if (abs(b.re) >= abs(b.im)) {
        R t = b.im / b.re;
        R d = b.re + b.im * t;
        return {(a.re + a.im * t) / d, (a.im - a.re * t) / d};
    }
    R t = b.re / b.im;
    R d = b.re * t + b.im;
    return {(a.re * t + a.im) / d, (a.im * t - a.re) / d};
}

// Division by a real scalar (used when normalizing a column by its norm).
template <class R>
cplx<R> div_real(const cplx<R>& a, const R& r) {
    if (r == R(0.0)) throw domain_error("division by zero real scalar");
    return {a.re / r, a.im / r};
}

template <class R>
bool operator==(const cplx<R>& a, const cplx<R>& b) {
    return a.re == b.re && a.im == b.im;
}

template <class R>
bool operator!=(const cplx<R>& a, const cplx<R>& b) {
    return !(a == b);
}

template <class R>
R abs2(const cplx<R>& z) {
    return z.re * z.re + z.im * z.im;
}

template <class R>
R cabs(const cplx<R>& z) {
    return sqrt(abs2(z));
}

}  // namespace xqr
