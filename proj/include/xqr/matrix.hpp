#pragma once

#include <cstddef>
#include <vector>

#include "xqr/complex.hpp"
#include "xqr/errors.hpp"

namespace xqr {

// column-major complex matrix with at least as many rows as columns
template <class R>
class col_matrix {
public:
    col_matrix(std::size_t m, std::size_t n) : m_(m), n_(n), cols_(n, cvector<R>(m)) {
        if (n == 0 || m < n) {
            throw dimension_error("matrix shape must satisfy rows >= cols >= 1");
        }
    }

    static col_matrix identity(std::size_t n) {
        col_matrix a(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            a(k, k) = cplx<R>{R(1.0), R(0.0)};
        }
        return a;
    }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }

    cvector<R>& column(std::size_t j) { return cols_[j]; }
    const cvector<R>& column(std::size_t j) const { return cols_[j]; }

    cplx<R>& operator()(std::size_t i, std::size_t j) { return cols_[j][i]; }
    const cplx<R>& operator()(std::size_t i, std::size_t j) const { return cols_[j][i]; }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<cvector<R>> cols_;
};

}  // namespace xqr
