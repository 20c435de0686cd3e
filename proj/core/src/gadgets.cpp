#include "liftlab/gadgets.hpp"

#include "liftlab/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <utility>

namespace liftlab {

std::uint64_t GadgetSpec::x_alphabet() const noexcept {
    return kind == GadgetKind::Index ? std::uint64_t{size} : (std::uint64_t{1} << size);
}

bool GadgetSpec::eval_block(std::uint64_t x, std::uint64_t y) const noexcept {
    if (kind == GadgetKind::Index) return (y >> x) & 1U;
    return std::popcount(x & y) & 1;
}

void GadgetSpec::validate() const {
    if (kind == GadgetKind::Index && (size < 2 || size > 63))
        throw Error(Errc::InvalidArgument, "IND gadget needs 2 <= m <= 63");
    if (kind == GadgetKind::InnerProduct && (size < 1 || size > 31))
        throw Error(Errc::InvalidArgument, "IP gadget needs 1 <= b <= 31");
    if (blocks == 0 || blocks > 64) throw Error(Errc::InvalidArgument, "gadget needs 1 <= N <= 64");
}

std::uint64_t eval(const GadgetSpec& g, std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) {
    g.validate();
    if (x.size() != g.blocks || y.size() != g.blocks) throw Error(Errc::ShapeMismatch, "input has wrong block count");
    const std::uint64_t ymask = (std::uint64_t{1} << g.y_bits()) - 1;
    std::uint64_t out = 0;
    for (std::uint32_t i = 0; i < g.blocks; ++i) {
        if (x[i] >= g.x_alphabet()) throw Error(Errc::ShapeMismatch, "x block out of range");
        if (y[i] > ymask) throw Error(Errc::ShapeMismatch, "y block out of range");
        if (g.eval_block(x[i], y[i])) out |= std::uint64_t{1} << i;
    }
    return out;
}

namespace {

std::vector<std::uint32_t> kept_blocks(std::uint32_t n, std::span<const std::uint32_t> drop) {
    std::vector<bool> dropped(n, false);
    for (auto b : drop) {
        if (b >= n) throw Error(Errc::ShapeMismatch, "dropped block out of range");
        dropped[b] = true;
    }
    std::vector<std::uint32_t> kept;
    for (std::uint32_t i = 0; i < n; ++i)
        if (!dropped[i]) kept.push_back(i);
    return kept;
}

}  // namespace

std::vector<std::uint64_t> image(const GadgetSpec& g, const PointerSet* x_set, const BlockFamily& y_set,
                                 std::span<const std::uint32_t> drop, const Guard& guard) {
    g.validate();
    if (y_set.blocks() != g.blocks || y_set.bits_per_block() != g.y_bits())
        throw Error(Errc::ShapeMismatch, "y family shape does not match the gadget");
    const auto kept = kept_blocks(g.blocks, drop);
    guard.require("image bitmap", static_cast<double>(kept.size()), 26.0);
    std::vector<bool> hit(std::size_t{1} << kept.size(), false);

    if (x_set == nullptr) {
        // With X the full universe the image for one y is a product: each kept
        // block contributes every value y_i takes over the x alphabet.
        guard.require("image block table", static_cast<double>(g.y_bits()), 20.0);
        const std::uint64_t yvals = std::uint64_t{1} << g.y_bits();
        std::vector<std::uint8_t> reach(yvals, 0);  // bit0: 0 reachable, bit1: 1 reachable
        for (std::uint64_t v = 0; v < yvals; ++v)
            for (std::uint64_t x = 0; x < g.x_alphabet() && reach[v] != 3; ++x) reach[v] |= g.eval_block(x, v) ? 2 : 1;
        std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
        y_set.for_each(
            [&](std::uint64_t y) {
                std::uint64_t forced = 0;
                std::uint64_t free = 0;
                for (std::size_t t = 0; t < kept.size(); ++t) {
                    const auto r = reach[y_set.block(y, kept[t])];
                    if (r == 3) {
                        free |= std::uint64_t{1} << t;
                    } else if (r == 2) {
                        forced |= std::uint64_t{1} << t;
                    }
                }
                if (!seen.emplace(forced, free).second) return;
                for (std::uint64_t s = free;; s = (s - 1) & free) {
                    hit[forced | s] = true;
                    if (s == 0) break;
                }
            },
            guard);
    } else {
        if (x_set->blocks() != g.blocks || x_set->alphabet() != g.x_alphabet())
            throw Error(Errc::ShapeMismatch, "x set shape does not match the gadget");
        const double pairs = std::log2(static_cast<double>(std::max<std::size_t>(1, x_set->size()))) +
                             std::max(0.0, log2_big(std::max(BigInt(1), y_set.cardinality())));
        guard.require("image pair enumeration", pairs, 28.0);
        const auto xs = x_set->members();
        y_set.for_each(
            [&](std::uint64_t y) {
                for (const auto& x : xs) {
                    std::uint64_t out = 0;
                    for (std::size_t t = 0; t < kept.size(); ++t)
                        if (g.eval_block(x[kept[t]], y_set.block(y, kept[t]))) out |= std::uint64_t{1} << t;
                    hit[out] = true;
                }
            },
            guard);
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = 0; v < hit.size(); ++v)
        if (hit[v]) out.push_back(v);
    return out;
}

GadgetTable table_of(const GadgetSpec& g, const Guard& guard) {
    const double rows_log = std::log2(static_cast<double>(g.x_alphabet()));
    guard.require("gadget table", rows_log + g.y_bits(), 24.0);
    GadgetTable t;
    t.rows = static_cast<std::uint32_t>(g.x_alphabet());
    t.cols = std::uint32_t{1} << g.y_bits();
    t.cells.resize(std::size_t{t.rows} * t.cols);
    for (std::uint32_t x = 0; x < t.rows; ++x)
        for (std::uint32_t y = 0; y < t.cols; ++y) t.cells[std::size_t{x} * t.cols + y] = g.eval_block(x, y);
    return t;
}

std::optional<ConstantLine> has_constant_line(const GadgetTable& t) {
    if (t.rows == 0 || t.cols == 0) return std::nullopt;
    for (std::uint32_t y = 0; y < t.cols; ++y) {
        bool constant = true;
        for (std::uint32_t x = 1; x < t.rows && constant; ++x) constant = t.at(x, y) == t.at(0, y);
        if (constant) return ConstantLine{LineSide::Column, y, t.at(0, y)};
    }
    for (std::uint32_t x = 0; x < t.rows; ++x) {
        bool constant = true;
        for (std::uint32_t y = 1; y < t.cols && constant; ++y) constant = t.at(x, y) == t.at(x, 0);
        if (constant) return ConstantLine{LineSide::Row, x, t.at(x, 0)};
    }
    return std::nullopt;
}

std::optional<ConstantLine> has_constant_line(const GadgetSpec& g) { return has_constant_line(table_of(g)); }

std::uint64_t index_encode(const GadgetTable& t, std::uint32_t y) {
    if (t.rows > 64) throw Error(Errc::TooLarge, "index encoding needs at most 64 rows");
    std::uint64_t v = 0;
    for (std::uint32_t x = 0; x < t.rows; ++x)
        if (t.at(x, y)) v |= std::uint64_t{1} << x;
    return v;
}

}  // namespace liftlab
