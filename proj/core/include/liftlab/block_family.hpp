#pragma once

#include "liftlab/bigint.hpp"
#include "liftlab/entropy.hpp"
#include "liftlab/guard.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace liftlab {

/// Bob's side: a subset of ({0,1}^m)^N.
///
/// A member is packed into one word, block i in bits [i*m, (i+1)*m) and bit j
/// of that field equal to y_{i,j}. Enumeration runs in increasing packed
/// order, so the all-zero string comes first.
class BlockFamily {
public:
    /// Every group of consecutive blocks must hold at least `threshold` blocks
    /// equal to `special`.
    struct Symbolic {
        std::uint32_t groups = 1;
        std::uint32_t threshold = 0;
        std::uint64_t special = 0;
    };

    static BlockFamily full(std::uint32_t blocks, std::uint32_t bits_per_block);
    static BlockFamily symbolic(std::uint32_t blocks, std::uint32_t bits_per_block, Symbolic rule);
    static BlockFamily explicit_set(std::uint32_t blocks, std::uint32_t bits_per_block, std::vector<std::uint64_t> members);

    [[nodiscard]] std::uint32_t blocks() const noexcept { return blocks_; }
    [[nodiscard]] std::uint32_t bits_per_block() const noexcept { return bits_; }
    [[nodiscard]] unsigned universe_bits() const noexcept { return blocks_ * bits_; }
    [[nodiscard]] bool is_symbolic() const noexcept { return !explicit_; }
    [[nodiscard]] const Symbolic& rule() const noexcept { return rule_; }

    [[nodiscard]] std::uint64_t block(std::uint64_t y, std::uint32_t i) const noexcept {
        return (y >> (i * bits_)) & block_mask();
    }
    [[nodiscard]] std::uint64_t block_mask() const noexcept {
        return bits_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits_) - 1;
    }

    [[nodiscard]] bool contains(std::uint64_t y) const;

    /// Exact |S|: closed-form binomial tail per group for symbolic families.
    [[nodiscard]] BigInt cardinality() const;

    /// Streams members in increasing order. Symbolic families are filtered
    /// from the whole universe, guarded at 2^24 strings.
    void for_each(const std::function<void(std::uint64_t)>& fn, const Guard& guard = {}) const;

    /// Members as a PointerSet over alphabet 2^m, for entropy accounting.
    [[nodiscard]] PointerSet to_pointer_set(const Guard& guard = {}) const;

    /// Packs per-block values (block 0 first) into a member word.
    [[nodiscard]] std::uint64_t pack(std::span<const std::uint64_t> blocks) const;

private:
    BlockFamily(std::uint32_t blocks, std::uint32_t bits);

    std::uint32_t blocks_;
    std::uint32_t bits_;
    bool explicit_ = false;
    Symbolic rule_;
    std::vector<std::uint64_t> members_;
};

}  // namespace liftlab
