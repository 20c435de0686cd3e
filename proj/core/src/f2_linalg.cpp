#include "liftlab/f2_linalg.hpp"

#include "liftlab/error.hpp"

#include <algorithm>

namespace liftlab::f2 {

std::string to_string(const Coord& c) {
    return std::string(c.side == Side::Y ? "y" : "x") + "(" + std::to_string(c.block + 1) + "," +
           std::to_string(c.position) + ")";
}

CoordSpace::CoordSpace(std::uint32_t blocks, std::uint32_t y_per_block, std::uint32_t x_bits_per_block)
    : blocks_(blocks), m_(y_per_block), ell_(x_bits_per_block) {}

bool CoordSpace::contains(const Coord& c) const noexcept {
    if (c.block >= blocks_) return false;
    return c.side == Side::Y ? c.position < m_ : c.position < ell_;
}

std::size_t CoordSpace::index(const Coord& c) const {
    if (!contains(c)) throw Error(Errc::ShapeMismatch, "coordinate " + to_string(c) + " out of range");
    if (c.side == Side::Y) return std::size_t{c.block} * m_ + c.position;
    return y_width() + std::size_t{c.block} * ell_ + c.position;
}

Coord CoordSpace::coord(std::size_t column) const {
    if (column >= width()) throw Error(Errc::ShapeMismatch, "column out of range");
    if (column < y_width())
        return ycoord(static_cast<std::uint32_t>(column / m_), static_cast<std::uint32_t>(column % m_));
    column -= y_width();
    return xbit(static_cast<std::uint32_t>(column / ell_), static_cast<std::uint32_t>(column % ell_));
}

BitVec CoordSpace::support(std::span<const Coord> coords) const {
    BitVec s(width());
    for (const auto& c : coords) s.flip(index(c));
    return s;
}

ParityEq make_eq(const CoordSpace& space, std::span<const Coord> coords, bool rhs) {
    return {space.support(coords), rhs};
}

ParityEq make_eq(const CoordSpace& space, std::initializer_list<Coord> coords, bool rhs) {
    return make_eq(space, std::span<const Coord>(coords.begin(), coords.size()), rhs);
}

bool AffineSystem::is_pivot(std::size_t column) const noexcept {
    return std::find(pivots_.begin(), pivots_.end(), column) != pivots_.end();
}

std::optional<std::size_t> AffineSystem::row_of_pivot(std::size_t column) const noexcept {
    auto it = std::find(pivots_.begin(), pivots_.end(), column);
    if (it == pivots_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - pivots_.begin());
}

ParityEq AffineSystem::residual(const ParityEq& e) const {
    if (e.support.size() != width_) throw Error(Errc::ShapeMismatch, "equation width differs from system width");
    // Pivot columns occur only in their own row, so XOR-ing the rows whose
    // pivots appear in e clears every pivot in one pass.
    ParityEq r = e;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (e.support.test(pivots_[i])) {
            r.support ^= rows_[i];
            r.rhs = r.rhs != rhs_[i];
        }
    }
    return r;
}

std::optional<bool> AffineSystem::in_span(const BitVec& support) const {
    const ParityEq r = residual(ParityEq{support, false});
    if (r.support.any()) return std::nullopt;
    return r.rhs;
}

std::size_t AffineSystem::insert(const ParityEq& e) {
    ParityEq r = residual(e);
    if (r.support.none()) {
        if (r.rhs) throw Error(Errc::Inconsistent, "equation contradicts the system (0 = 1)");
        throw Error(Errc::SpanViolation, "equation already lies in the span of the system");
    }
    const std::size_t pivot = r.support.first();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i].test(pivot)) {
            rows_[i] ^= r.support;
            rhs_[i] = rhs_[i] != r.rhs;
        }
    }
    rows_.push_back(std::move(r.support));
    rhs_.push_back(r.rhs);
    pivots_.push_back(pivot);
    return pivot;
}

AffineSystem::Reduced AffineSystem::row_reduce(const ParityEq& e) const {
    AffineSystem next = *this;
    const std::size_t pivot = next.insert(e);
    return {std::move(next), pivot};
}

bool AffineSystem::consistent_with(const ParityEq& e) const {
    const ParityEq r = residual(e);
    return r.support.any() || !r.rhs;
}

std::map<std::size_t, bool> AffineSystem::unique_extension(const std::map<std::size_t, bool>& free) const {
    std::map<std::size_t, bool> out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        bool v = rhs_[i];
        for (auto c = rows_[i].first(); c < width_; c = rows_[i].next(c)) {
            if (c == pivots_[i]) continue;
            auto it = free.find(c);
            if (it == free.end())
                throw Error(Errc::IncompleteAssignment, "free column " + std::to_string(c) + " is unassigned");
            v = v != it->second;
        }
        out[pivots_[i]] = v;
    }
    return out;
}

bool AffineSystem::satisfied_by(const BitVec& assignment) const {
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i].dot(assignment) != rhs_[i]) return false;
    return true;
}

bool AffineSystem::is_row_reduced() const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            if (rows_[k].test(pivots_[i]) != (i == k)) return false;
        }
    }
    return true;
}

BitVec AffineSystem::particular_solution() const {
    BitVec x(width_);
    for (std::size_t i = 0; i < rows_.size(); ++i) x.set(pivots_[i], rhs_[i]);
    return x;
}

BigInt solution_count(const AffineSystem& sys, const BitVec& universe) {
    if (universe.size() != sys.width()) throw Error(Errc::ShapeMismatch, "universe width differs from system width");
    for (const auto& row : sys.rows()) {
        if ((row & universe) != row) throw Error(Errc::ShapeMismatch, "system mentions a column outside the universe");
    }
    return pow2(static_cast<unsigned>(universe.count() - sys.codim()));
}

std::map<Coord, bool> unique_extension(const AffineSystem& sys, const CoordSpace& space,
                                       const std::map<Coord, bool>& free) {
    std::map<std::size_t, bool> cols;
    for (const auto& [c, v] : free)
        if (space.contains(c)) cols[space.index(c)] = v;
    std::map<Coord, bool> out;
    for (const auto& [col, v] : sys.unique_extension(cols)) out[space.coord(col)] = v;
    return out;
}

}  // namespace liftlab::f2
