#pragma once

#include "liftlab/f2_linalg.hpp"

#include <bit>
#include <cstdint>

namespace liftlab {

/// Variable numbering of a formula or tree lifted with IND_m, m = 2^ell.
/// Block i (0-based) owns ell + m consecutive variables: first the x-bits
/// x_{i,0..ell-1}, then y_{i,0..m-1}. In 1-based DIMACS terms
/// x_{i,j'} -> (i-1)(ell+m) + j' + 1 and y_{i,j} -> (i-1)(ell+m) + ell + j + 1
/// with 1-based i.
struct LiftedLayout {
    std::uint32_t blocks = 0;
    std::uint32_t m = 0;
    std::uint32_t ell = 0;

    LiftedLayout() = default;
    LiftedLayout(std::uint32_t blocks_, std::uint32_t m_);

    [[nodiscard]] std::uint32_t stride() const noexcept { return ell + m; }
    [[nodiscard]] std::uint32_t vars() const noexcept { return blocks * stride(); }
    [[nodiscard]] std::uint32_t x_var(std::uint32_t block, std::uint32_t bit) const noexcept {
        return block * stride() + bit;
    }
    [[nodiscard]] std::uint32_t y_var(std::uint32_t block, std::uint32_t j) const noexcept {
        return block * stride() + ell + j;
    }
    /// 0-based variable id to coordinate (x-bit or y-coordinate).
    [[nodiscard]] f2::Coord coord(std::uint32_t var) const;
    [[nodiscard]] std::uint32_t var(const f2::Coord& c) const noexcept {
        return c.side == f2::Side::X ? x_var(c.block, c.position) : y_var(c.block, c.position);
    }
};

}  // namespace liftlab
