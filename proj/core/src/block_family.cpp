#include "liftlab/block_family.hpp"

#include "liftlab/counterexample.hpp"
#include "liftlab/error.hpp"

#include <algorithm>

namespace liftlab {

BlockFamily::BlockFamily(std::uint32_t blocks, std::uint32_t bits) : blocks_(blocks), bits_(bits) {
    if (blocks == 0 || bits == 0) throw Error(Errc::InvalidArgument, "block family needs N >= 1 and m >= 1");
    if (std::uint64_t{blocks} * bits > 63) throw Error(Errc::TooLarge, "m * N must be at most 63 bits");
}

BlockFamily BlockFamily::full(std::uint32_t blocks, std::uint32_t bits_per_block) {
    return symbolic(blocks, bits_per_block, Symbolic{1, 0, 0});
}

BlockFamily BlockFamily::symbolic(std::uint32_t blocks, std::uint32_t bits_per_block, Symbolic rule) {
    BlockFamily f(blocks, bits_per_block);
    if (rule.groups == 0 || blocks % rule.groups != 0)
        throw Error(Errc::ParamViolation, "group count must divide N");
    if (rule.special > f.block_mask()) throw Error(Errc::ShapeMismatch, "special block value out of range");
    f.rule_ = rule;
    return f;
}

BlockFamily BlockFamily::explicit_set(std::uint32_t blocks, std::uint32_t bits_per_block,
                                      std::vector<std::uint64_t> members) {
    BlockFamily f(blocks, bits_per_block);
    const std::uint64_t limit = std::uint64_t{1} << f.universe_bits();
    for (auto y : members)
        if (y >= limit) throw Error(Errc::ShapeMismatch, "member outside ({0,1}^m)^N");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    f.explicit_ = true;
    f.members_ = std::move(members);
    return f;
}

bool BlockFamily::contains(std::uint64_t y) const {
    if (explicit_) return std::binary_search(members_.begin(), members_.end(), y);
    if (y >> universe_bits()) return false;
    const std::uint32_t per_group = blocks_ / rule_.groups;
    for (std::uint32_t g = 0; g < rule_.groups; ++g) {
        std::uint32_t hits = 0;
        for (std::uint32_t i = g * per_group; i < (g + 1) * per_group; ++i) hits += block(y, i) == rule_.special;
        if (hits < rule_.threshold) return false;
    }
    return true;
}

BigInt BlockFamily::cardinality() const {
    if (explicit_) return BigInt(members_.size());
    const std::uint32_t per_group = blocks_ / rule_.groups;
    return ipow(counterexample::tail_count(bits_, per_group, rule_.threshold), rule_.groups);
}

void BlockFamily::for_each(const std::function<void(std::uint64_t)>& fn, const Guard& guard) const {
    if (explicit_) {
        for (auto y : members_) fn(y);
        return;
    }
    guard.require("block family enumeration", static_cast<double>(universe_bits()), 24.0);
    const std::uint64_t total = std::uint64_t{1} << universe_bits();
    for (std::uint64_t y = 0; y < total; ++y)
        if (contains(y)) fn(y);
}

PointerSet BlockFamily::to_pointer_set(const Guard& guard) const {
    if (bits_ > 31) throw Error(Errc::TooLarge, "block alphabet too large");
    std::vector<Pointer> pts;
    for_each(
        [&](std::uint64_t y) {
            Pointer p(blocks_);
            for (std::uint32_t i = 0; i < blocks_; ++i) p[i] = static_cast<std::uint32_t>(block(y, i));
            pts.push_back(std::move(p));
        },
        guard);
    if (pts.empty()) throw Error(Errc::EmptySet, "block family is empty");
    return PointerSet(blocks_, std::uint32_t{1} << bits_, pts);
}

std::uint64_t BlockFamily::pack(std::span<const std::uint64_t> values) const {
    if (values.size() != blocks_) throw Error(Errc::ShapeMismatch, "wrong number of y blocks");
    std::uint64_t y = 0;
    for (std::uint32_t i = 0; i < blocks_; ++i) {
        if (values[i] > block_mask()) throw Error(Errc::ShapeMismatch, "y block value out of range");
        y |= values[i] << (i * bits_);
    }
    return y;
}

}  // namespace liftlab
