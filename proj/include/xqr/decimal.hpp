#pragma once

// Decimal scientific-notation strings for the three real types.  Digit
// extraction and parsing run in quad_double regardless of the target type,
// so the conversion error stays below the target's last ulp; round trips
// at 34 (dd) / 66 (qd) digits reproduce the value to within one ulp.

#include <cctype>
#include <string>

#include "xqr/errors.hpp"
#include "xqr/real_type.hpp"

namespace xqr {

namespace detail {

inline quad_double pow10_qd(int n) {
    if (n < 0) return quad_double(1.0) / pow10_qd(-n);
    quad_double r(1.0), b(10.0);
    int k = n;
    while (k) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

// Peels `count` decimal digits off |x|; returns the decimal exponent of the
// leading digit.  The digit loop is exact: subtracting a one-digit integer
// and scaling by 10 lose no bits, so all error lives in the initial scaling.
inline int qd_extract_digits(quad_double x, int count, std::string& digits) {
    int e10 = static_cast<int>(std::floor(std::log10(std::fabs(to_double(x)))));
    quad_double r = abs(x);
    // scale by 10^-e10 in chunks that keep every power-of-ten factor and
    // its reciprocal seed inside the normal double range
    int k = e10;
    while (k > 290) {
        r = r / pow10_qd(290);
        k -= 290;
    }
    while (k < -290) {
        r = r * pow10_qd(290);
        k += 290;
    }
    if (k > 0)
        r = r / pow10_qd(k);
    else if (k < 0)
        r = r * pow10_qd(-k);
    if (r >= quad_double(10.0)) {
        r = r / quad_double(10.0);
        ++e10;
    } else if (r < quad_double(1.0)) {
        r = r * quad_double(10.0);
        --e10;
    }

    digits.assign(static_cast<std::size_t>(count) + 1, '0');
    for (int i = 0; i <= count; ++i) {
        int d = static_cast<int>(to_double(r));
        r = r - quad_double(static_cast<double>(d));
        r = r * quad_double(10.0);
        digits[static_cast<std::size_t>(i)] = static_cast<char>(d + '0');
    }
    // the truncated head may sit one off; repair by borrow/carry
    for (int i = count; i > 0; --i) {
        if (digits[static_cast<std::size_t>(i)] < '0') {
            digits[static_cast<std::size_t>(i - 1)] -= 1;
            digits[static_cast<std::size_t>(i)] += 10;
        } else if (digits[static_cast<std::size_t>(i)] > '9') {
            digits[static_cast<std::size_t>(i - 1)] += 1;
            digits[static_cast<std::size_t>(i)] -= 10;
        }
    }
    // round away the guard digit
    if (digits[static_cast<std::size_t>(count)] >= '5') {
        int i = count - 1;
        digits[static_cast<std::size_t>(i)] += 1;
        while (i > 0 && digits[static_cast<std::size_t>(i)] > '9') {
            digits[static_cast<std::size_t>(i)] -= 10;
            digits[static_cast<std::size_t>(i - 1)] += 1;
            --i;
        }
    }
    digits.resize(static_cast<std::size_t>(count));
    if (digits[0] > '9') {
        ++e10;
        digits[0] = '1';
        for (int i = 1; i < count; ++i) digits[static_cast<std::size_t>(i)] = '0';
    } else if (digits[0] == '0') {
        --e10;
        digits.erase(digits.begin());
        digits.push_back('0');
    }
    return e10;
}

}  // namespace detail

template <class R>
std::string to_decimal_string(const R& x, int digits) {
    if (digits < 1) throw usage_error("decimal digit count must be positive");
    if (!isfinite(x)) throw overflow_error("cannot format non-finite value");
    quad_double w = real_cast<quad_double>(x);
    if (to_double(w) == 0.0) return "0.0e0";

    std::string ds;
    int e10 = detail::qd_extract_digits(w, digits, ds);

    std::string out;
    if (to_double(w) < 0.0) out += '-';
    out += ds[0];
    if (digits > 1) {
        out += '.';
        out.append(ds.begin() + 1, ds.end());
    }
    out += 'e';
    out += std::to_string(e10);
    return out;
}

template <class R>
R parse_decimal(const std::string& s) {
    std::size_t pos = 0;
    auto fail = [&](const char* msg) -> parse_error { return parse_error(1, msg); };
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) neg = (s[pos++] == '-');

    std::string mant;
    long frac_digits = 0;
    bool seen_point = false, seen_digit = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mant += c;
            seen_digit = true;
            if (seen_point) ++frac_digits;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw fail("expected decimal digits");

    long exp10 = 0;
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        ++pos;
        bool eneg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) eneg = (s[pos++] == '-');
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            throw fail("expected exponent digits");
        long e = 0;
        for (; pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])); ++pos) {
            e = e * 10 + (s[pos] - '0');
            if (e > 100000) throw fail("exponent out of range");
        }
        exp10 = eneg ? -e : e;
    }
    if (pos != s.size()) throw fail("trailing characters in decimal literal");

    // accumulate the digit string in 15-digit exact chunks
    quad_double v(0.0);
    std::size_t i = 0;
    while (i < mant.size()) {
        std::size_t len = std::min<std::size_t>(15, mant.size() - i);
        double chunk = 0.0;
        for (std::size_t k = 0; k < len; ++k) chunk = chunk * 10.0 + (mant[i + k] - '0');
        v = v * detail::pow10_qd(static_cast<int>(len)) + quad_double(chunk);
        i += len;
    }
    long e = exp10 - frac_digits;
    if (e > 100000 || e < -100000) throw fail("exponent out of range");
    while (e > 290) {
        v = v * detail::pow10_qd(290);
        e -= 290;
    }
    while (e < -290) {
        v = v / detail::pow10_qd(290);
        e += 290;
    }
    if (e > 0)
        v = v * detail::pow10_qd(static_cast<int>(e));
    else if (e < 0)
        v = v / detail::pow10_qd(static_cast<int>(-e));
    if (neg) v = -v;
    return real_cast<R>(v);
}

}  // namespace xqr
