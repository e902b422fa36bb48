#pragma once

// Fixed-order pairwise summation.  The pairing schedule is a pure function
// of the leaf count: conceptually the term list is padded with exact zeros
// to the next power of two and combined level by level; a missing partner
// is skipped, which leaves the surviving term bit-identical.  Sequential
// and parallel inner products both funnel through tree_inner_product, so
// they agree bitwise by construction.

#include <bit>
#include <cstddef>
#include <span>

#include "xqr/complex.hpp"
#include "xqr/errors.hpp"

namespace xqr {

struct reduction_tree {
    std::size_t leaf_count = 0;

    std::size_t padded_size() const {
        return leaf_count <= 1 ? leaf_count : std::bit_ceil(leaf_count);
    }
    std::size_t level_count() const {
        std::size_t levels = 0;
        for (std::size_t stride = 1; stride < leaf_count; stride <<= 1) ++levels;
        return levels;
    }
};

// Destructive reduce over the span; terms[0] receives the total.
template <class R>
cplx<R> tree_reduce(std::span<cplx<R>> terms) {
    if (terms.empty()) return {};
    for (std::size_t stride = 1; stride < terms.size(); stride <<= 1)
        for (std::size_t i = 0; i + stride < terms.size(); i += 2 * stride)
            terms[i] = terms[i] + terms[i + stride];
    return terms[0];
}

// Conjugated inner product x^H y = sum conj(x_l) y_l over the fixed tree.
// `scratch` holds the termwise products; it must cover the vector length.
template <class R>
cplx<R> tree_inner_product(std::span<const cplx<R>> x, std::span<const cplx<R>> y,
                           std::span<cplx<R>> scratch) {
    if (x.size() != y.size()) throw dimension_error("inner product length mismatch");
    if (scratch.size() < x.size()) throw dimension_error("inner product scratch too short");
    for (std::size_t l = 0; l < x.size(); ++l) scratch[l] = conj(x[l]) * y[l];
    return tree_reduce(scratch.subspan(0, x.size()));
}

template <class R>
cplx<R> inner_product(const cvector<R>& x, const cvector<R>& y) {
    cvector<R> scratch(x.size());
    return tree_inner_product<R>(x, y, scratch);
}

}  // namespace xqr
