#pragma once

// Hex-float component serialization: one %a token per double component,
// whitespace separated ("hi lo" for double_double, "c0 c1 c2 c3" for
// quad_double).  Round trips are bit exact.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "xqr/errors.hpp"
#include "xqr/real_type.hpp"

namespace xqr {

inline std::string hex_token(double v) {
    if (!std::isfinite(v)) throw overflow_error("cannot serialize non-finite value");
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

// Strict single-token parse; strtod accepts both hex-float and decimal forms.
inline double parse_numeric_token(const std::string& tok, std::size_t line) {
    if (tok.empty()) throw parse_error(line, "empty numeric token");
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + tok.size()) throw parse_error(line, "bad numeric token '" + tok + "'");
    if (!std::isfinite(v)) throw parse_error(line, "non-finite value '" + tok + "'");
    return v;
}

template <class R>
std::string to_hex_components(const R& x) {
    if constexpr (std::is_same_v<R, double>) {
        return hex_token(x);
    } else if constexpr (std::is_same_v<R, double_double>) {
        return hex_token(x.hi) + " " + hex_token(x.lo);
    } else {
        return hex_token(x.c[0]) + " " + hex_token(x.c[1]) + " " + hex_token(x.c[2]) + " " +
               hex_token(x.c[3]);
    }
}

template <class R>
R from_components(const std::vector<double>& comps, std::size_t offset) {
    if constexpr (std::is_same_v<R, double>) {
        return comps[offset];
    } else if constexpr (std::is_same_v<R, double_double>) {
        return renormalize(double_double(comps[offset], comps[offset + 1]));
    } else {
        return renormalize(
            quad_double(comps[offset], comps[offset + 1], comps[offset + 2], comps[offset + 3]));
    }
}

}  // namespace xqr
