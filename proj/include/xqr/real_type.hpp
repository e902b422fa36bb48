#pragma once

// Compile-time description of the supported real scalar types, plus the
// double overloads that let generic code call sqrt/abs/to_double
// unqualified for every R.

#include <cmath>
#include <cstddef>
#include <type_traits>

#include "xqr/double_double.hpp"
#include "xqr/quad_double.hpp"

namespace xqr {

inline double sqrt(double x) { return std::sqrt(x); }
inline double abs(double x) { return std::fabs(x); }
inline double to_double(double x) { return x; }
inline bool isfinite(double x) { return std::isfinite(x); }
inline double renormalize(double x) { return x; }

template <class R>
struct real_traits;

template <>
struct real_traits<double> {
    static constexpr const char* name = "d";
    static constexpr int decimal_digits = 15;
    static constexpr double epsilon = 0x1p-52;
    static constexpr std::size_t components = 1;
};

template <>
struct real_traits<double_double> {
    static constexpr const char* name = "dd";
    static constexpr int decimal_digits = 31;
    static constexpr double epsilon = 0x1p-104;
    static constexpr std::size_t components = 2;
};

template <>
struct real_traits<quad_double> {
    static constexpr const char* name = "qd";
    static constexpr int decimal_digits = 62;
    static constexpr double epsilon = 0x1p-209;
    static constexpr std::size_t components = 4;
};

// Conversions between the real types.  Widening is exact; narrowing rounds.
template <class To>
To real_cast(const double& x) {
    return To(x);
}

template <class To>
To real_cast(const double_double& x) {
    if constexpr (std::is_same_v<To, double>)
        return to_double(x);
    else if constexpr (std::is_same_v<To, double_double>)
        return x;
    else
        return quad_double(x);
}

template <class To>
To real_cast(const quad_double& x) {
    if constexpr (std::is_same_v<To, double>)
        return to_double(x);
    else if constexpr (std::is_same_v<To, double_double>)
        return to_double_double(x);
    else
        return x;
}

}  // namespace xqr
