#pragma once

// Matrix files: a header line `m n precision` followed by one complex entry
// per line, column-major, each entry spelled as hex-float components (real
// part first).  Hex floats make write-then-read reproduce every bit.

#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "xqr/errors.hpp"
#include "xqr/hexfloat.hpp"
#include "xqr/matrix.hpp"
#include "xqr/real_type.hpp"

namespace xqr {

using any_matrix =
    std::variant<col_matrix<double>, col_matrix<double_double>, col_matrix<quad_double>>;

template <class R>
void write_matrix(std::ostream& out, const col_matrix<R>& a) {
    out << a.rows() << ' ' << a.cols() << ' ' << real_traits<R>::name << '\n';
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            out << to_hex_components(a(i, j).re) << ' ' << to_hex_components(a(i, j).im)
                << '\n';
        }
    }
}

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

inline std::size_t parse_size_token(const std::string& tok, std::size_t line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw parse_error(line, "bad dimension '" + tok + "'");
    }
    return static_cast<std::size_t>(std::stoull(tok));
}

template <class R>
col_matrix<R> read_matrix_body(std::istream& in, std::size_t m, std::size_t n,
                               std::size_t& line_no) {
    if (n == 0 || m < n) throw parse_error(1, "dimensions must satisfy rows >= cols >= 1");
    const std::size_t per_part = real_traits<R>::components;
    col_matrix<R> a(m, n);
    std::string line;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!std::getline(in, line)) {
                throw parse_error(line_no + 1, "unexpected end of file");
            }
            ++line_no;
            auto toks = split_tokens(line);
            if (toks.size() != 2 * per_part) {
                throw parse_error(line_no, "expected " + std::to_string(2 * per_part) +
                                               " components per entry");
            }
            std::vector<double> comps(toks.size());
            for (std::size_t t = 0; t < toks.size(); ++t) {
                comps[t] = parse_numeric_token(toks[t], line_no);
            }
            a(i, j) = cplx<R>{from_components<R>(comps, 0), from_components<R>(comps, per_part)};
        }
    }
    std::string rest;
    while (std::getline(in, rest)) {
        ++line_no;
        if (!split_tokens(rest).empty()) {
            throw parse_error(line_no, "trailing content after last entry");
        }
    }
    return a;
}

}  // namespace detail

// Reads whichever precision the header declares.
inline any_matrix read_matrix(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw parse_error(1, "missing header");
    auto toks = detail::split_tokens(header);
    if (toks.size() != 3) throw parse_error(1, "header must be 'rows cols precision'");
    std::size_t m = detail::parse_size_token(toks[0], 1);
    std::size_t n = detail::parse_size_token(toks[1], 1);
    std::size_t line_no = 1;
    if (toks[2] == real_traits<double>::name) {
        return detail::read_matrix_body<double>(in, m, n, line_no);
    }
    if (toks[2] == real_traits<double_double>::name) {
        return detail::read_matrix_body<double_double>(in, m, n, line_no);
    }
    if (toks[2] == real_traits<quad_double>::name) {
        return detail::read_matrix_body<quad_double>(in, m, n, line_no);
    }
    throw parse_error(1, "unknown precision '" + toks[2] + "'");
}

// Reads a file that must carry precision R.
template <class R>
col_matrix<R> read_matrix_as(std::istream& in) {
    any_matrix any = read_matrix(in);
    if (auto* p = std::get_if<col_matrix<R>>(&any)) return std::move(*p);
    throw parse_error(1, std::string("expected precision '") + real_traits<R>::name + "'");
}

}  // namespace xqr
