#pragma once

#include "liftlab/bigint.hpp"
#include "liftlab/bitvec.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace liftlab::f2 {

/// y-coordinates sort before x-bits; this order is also the pivot preference.
enum class Side : std::uint8_t { Y = 0, X = 1 };

/// A coordinate (block, position). Blocks are 0-based in memory; text formats
/// print them 1-based.
struct Coord {
    Side side = Side::Y;
    std::uint32_t block = 0;
    std::uint32_t position = 0;

    friend auto operator<=>(const Coord&, const Coord&) = default;
};

constexpr Coord ycoord(std::uint32_t block, std::uint32_t j) { return {Side::Y, block, j}; }
constexpr Coord xbit(std::uint32_t block, std::uint32_t bit) { return {Side::X, block, bit}; }

std::string to_string(const Coord& c);

/// Dense column numbering: all y-coordinates block-major, then all x-bits.
/// Column order therefore coincides with Coord order.
class CoordSpace {
public:
    CoordSpace(std::uint32_t blocks, std::uint32_t y_per_block, std::uint32_t x_bits_per_block = 0);

    [[nodiscard]] std::uint32_t blocks() const noexcept { return blocks_; }
    [[nodiscard]] std::uint32_t y_per_block() const noexcept { return m_; }
    [[nodiscard]] std::uint32_t x_bits_per_block() const noexcept { return ell_; }
    [[nodiscard]] std::size_t width() const noexcept {
        return std::size_t{blocks_} * (m_ + ell_);
    }
    [[nodiscard]] std::size_t y_width() const noexcept { return std::size_t{blocks_} * m_; }

    [[nodiscard]] bool contains(const Coord& c) const noexcept;
    [[nodiscard]] std::size_t index(const Coord& c) const;
    [[nodiscard]] Coord coord(std::size_t column) const;

    [[nodiscard]] BitVec support(std::span<const Coord> coords) const;

private:
    std::uint32_t blocks_;
    std::uint32_t m_;
    std::uint32_t ell_;
};

/// sum_{c in support} v_c = rhs over GF(2). Building the support by XOR makes
/// repeated coordinates cancel.
struct ParityEq {
    BitVec support;
    bool rhs = false;

    friend bool operator==(const ParityEq&, const ParityEq&) = default;
};

ParityEq make_eq(const CoordSpace& space, std::span<const Coord> coords, bool rhs);
ParityEq make_eq(const CoordSpace& space, std::initializer_list<Coord> coords, bool rhs);

/// A consistent, row-reduced system of affine equations: every row owns one
/// pivot column that appears in no other row.
class AffineSystem {
public:
    struct Reduced;

    AffineSystem() = default;
    explicit AffineSystem(std::size_t width) : width_(width) {}

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t codim() const noexcept { return rows_.size(); }
    [[nodiscard]] bool empty() const noexcept { return rows_.empty(); }

    [[nodiscard]] const std::vector<BitVec>& rows() const noexcept { return rows_; }
    [[nodiscard]] const std::vector<bool>& rhs() const noexcept { return rhs_; }
    /// Pivot column of each row, in row order (the dependent set).
    [[nodiscard]] const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
    [[nodiscard]] bool is_pivot(std::size_t column) const noexcept;
    [[nodiscard]] std::optional<std::size_t> row_of_pivot(std::size_t column) const noexcept;
    [[nodiscard]] ParityEq equation(std::size_t row) const { return {rows_[row], rhs_[row]}; }

    /// The forced value of the parity over `support` if it lies in the row span.
    [[nodiscard]] std::optional<bool> in_span(const BitVec& support) const;

    /// `e` with every pivot eliminated; zero support means e was in the span.
    [[nodiscard]] ParityEq residual(const ParityEq& e) const;

    /// Adds an equation independent of the system. The new pivot is the lowest
    /// column of the residual; it is then cleared from every older row.
    [[nodiscard]] Reduced row_reduce(const ParityEq& e) const;
    std::size_t insert(const ParityEq& e);

    /// True iff adding `e` keeps the system consistent (e may already be implied).
    [[nodiscard]] bool consistent_with(const ParityEq& e) const;

    /// Values of every pivot forced by the free assignment.
    [[nodiscard]] std::map<std::size_t, bool> unique_extension(const std::map<std::size_t, bool>& free) const;

    [[nodiscard]] bool satisfied_by(const BitVec& assignment) const;

    /// Identity submatrix on the pivot columns.
    [[nodiscard]] bool is_row_reduced() const;

    /// Some solution: every free column set to 0.
    [[nodiscard]] BitVec particular_solution() const;

    friend bool operator==(const AffineSystem&, const AffineSystem&) = default;

private:
    std::size_t width_ = 0;
    std::vector<BitVec> rows_;
    std::vector<bool> rhs_;
    std::vector<std::size_t> pivots_;
};

struct AffineSystem::Reduced {
    AffineSystem system;
    std::size_t pivot;
};

/// 2^(|universe| - codim); throws ShapeMismatch if a row leaves the universe.
BigInt solution_count(const AffineSystem& sys, const BitVec& universe);

std::map<Coord, bool> unique_extension(const AffineSystem& sys, const CoordSpace& space,
                                       const std::map<Coord, bool>& free);

}  // namespace liftlab::f2
