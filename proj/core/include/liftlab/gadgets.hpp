#pragma once

#include "liftlab/block_family.hpp"
#include "liftlab/entropy.hpp"
#include "liftlab/guard.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace liftlab {

enum class GadgetKind { Index, InnerProduct };

/// IND_m(x, y) = y_x with x in [m], y in {0,1}^m;
/// IP_b(x, y) = <x, y> mod 2 with x, y in {0,1}^b.
/// x blocks are integers (IP: bit k is x_k); y blocks are bit fields (bit j is y_j).
struct GadgetSpec {
    GadgetKind kind = GadgetKind::Index;
    std::uint32_t size = 2;    ///< m for IND, b for IP
    std::uint32_t blocks = 1;  ///< N

    static GadgetSpec index(std::uint32_t m, std::uint32_t n) { return {GadgetKind::Index, m, n}; }
    static GadgetSpec inner_product(std::uint32_t b, std::uint32_t n) { return {GadgetKind::InnerProduct, b, n}; }

    /// Size of one x block's alphabet: m (IND) or 2^b (IP).
    [[nodiscard]] std::uint64_t x_alphabet() const noexcept;
    /// Bits in one y block: m (IND) or b (IP).
    [[nodiscard]] std::uint32_t y_bits() const noexcept { return size; }

    [[nodiscard]] bool eval_block(std::uint64_t x, std::uint64_t y) const noexcept;

    void validate() const;
};

/// Componentwise gadget value; bit i of the result is block i.
std::uint64_t eval(const GadgetSpec& g, std::span<const std::uint64_t> x, std::span<const std::uint64_t> y);

/// { g^N(x, y) restricted to [N] \ drop : x in X, y in Y }, as sorted words
/// whose bit t is the t-th kept block. `x_set == nullptr` means the whole x
/// universe. Guarded on the kept width and on the pair count.
std::vector<std::uint64_t> image(const GadgetSpec& g, const PointerSet* x_set, const BlockFamily& y_set,
                                 std::span<const std::uint32_t> drop, const Guard& guard = {});

/// Explicit single-block communication matrix: rows are x values, columns y values.
struct GadgetTable {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> cells;  ///< row-major

    [[nodiscard]] bool at(std::uint32_t x, std::uint32_t y) const { return cells[std::size_t{x} * cols + y] != 0; }
};

GadgetTable table_of(const GadgetSpec& g, const Guard& guard = {});

enum class LineSide { Column, Row };

struct ConstantLine {
    LineSide side;
    std::uint32_t index;  ///< y value for a column, x value for a row
    bool value;

    friend bool operator==(const ConstantLine&, const ConstantLine&) = default;
};

/// First constant line, columns before rows, ascending index.
std::optional<ConstantLine> has_constant_line(const GadgetTable& t);
std::optional<ConstantLine> has_constant_line(const GadgetSpec& g);

/// The IND_m encoding of column y of `t`: bit x is t(x, y). Requires rows <= 64.
std::uint64_t index_encode(const GadgetTable& t, std::uint32_t y);

}  // namespace liftlab
