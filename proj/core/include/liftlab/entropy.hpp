#pragma once

#include "liftlab/bigint.hpp"
#include "liftlab/guard.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace liftlab {

/// One element of [m]^N, block values 0-based.
using Pointer = std::vector<std::uint32_t>;

/// A duplicate-free subset of [m]^N kept in lexicographic order.
///
/// Members are packed into 64-bit keys with block 0 in the most significant
/// field, so numeric key order is lexicographic tuple order.
class PointerSet {
public:
    PointerSet(std::uint32_t blocks, std::uint32_t alphabet);
    PointerSet(std::uint32_t blocks, std::uint32_t alphabet, std::span<const Pointer> members);

    static PointerSet full(std::uint32_t blocks, std::uint32_t alphabet);

    [[nodiscard]] std::uint32_t blocks() const noexcept { return blocks_; }
    [[nodiscard]] std::uint32_t alphabet() const noexcept { return alphabet_; }
    [[nodiscard]] std::size_t size() const noexcept { return keys_.size(); }
    [[nodiscard]] bool empty() const noexcept { return keys_.empty(); }

    [[nodiscard]] std::uint32_t value(std::size_t member, std::uint32_t block) const noexcept {
        return static_cast<std::uint32_t>((keys_[member] >> shift(block)) & field_mask_);
    }
    [[nodiscard]] Pointer member(std::size_t i) const;
    [[nodiscard]] std::vector<Pointer> members() const;
    [[nodiscard]] bool contains(std::span<const std::uint32_t> x) const;

    [[nodiscard]] PointerSet filter(const std::function<bool(std::span<const std::uint32_t>)>& keep) const;
    [[nodiscard]] PointerSet with_value(std::uint32_t block, std::uint32_t v) const;
    [[nodiscard]] PointerSet without_value(std::uint32_t block, std::uint32_t v) const;

    [[nodiscard]] const std::vector<std::uint64_t>& keys() const noexcept { return keys_; }
    [[nodiscard]] unsigned bits_per_block() const noexcept { return bits_; }
    [[nodiscard]] unsigned shift(std::uint32_t block) const noexcept { return (blocks_ - 1 - block) * bits_; }

    /// log2 |universe| = N log2 m.
    [[nodiscard]] double universe_bits() const;

    friend bool operator==(const PointerSet&, const PointerSet&) = default;

private:
    std::uint64_t encode(std::span<const std::uint32_t> x) const;

    std::uint32_t blocks_;
    std::uint32_t alphabet_;
    unsigned bits_;
    std::uint64_t field_mask_;
    std::vector<std::uint64_t> keys_;
};

/// universe_bits - log2 |S|; throws EmptySet for |S| = 0.
double deficiency(const BigInt& set_size, double universe_bits);
double deficiency(const PointerSet& s);

/// Exact: |S| * 2^bound >= 2^universe_bits.
bool deficiency_at_most(const BigInt& set_size, unsigned universe_bits, unsigned bound);

struct EntropyReport {
    double deficiency = 0.0;
    /// Min-entropy rate over the non-excluded blocks (1 when none remain).
    double rate = 1.0;
    /// Minimizing block set, ascending, 0-based.
    std::vector<std::uint32_t> witness_set;
    /// Values of the minimizing assignment on witness_set, in the same order.
    std::vector<std::uint32_t> witness_assignment;
    /// Number of members matching the witness assignment.
    BigInt witness_count = 0;
    BigInt set_size = 0;
};

/// Min-entropy rate over blocks [N] \ excluded. Ties among minimizers go to
/// the smallest |J|, then lexicographic J, then lexicographic alpha.
/// Refuses more than 20 remaining blocks unless the guard is forced.
EntropyReport min_entropy_rate(const PointerSet& s, std::span<const std::uint32_t> excluded = {},
                               const Guard& guard = {});

struct LowRateSet {
    std::vector<std::uint32_t> blocks;  ///< ascending, 0-based
    std::vector<std::uint32_t> values;  ///< alpha on `blocks`
    BigInt count = 0;                   ///< members matching alpha

    [[nodiscard]] bool empty() const noexcept { return blocks.empty(); }
};

/// An inclusion-maximal block set I' in [N] \ excluded on which the rate is
/// below tau, with its most frequent (then lexicographically smallest)
/// assignment. Empty when the rate is already >= tau.
LowRateSet maximal_low_rate_set(const PointerSet& s, std::span<const std::uint32_t> excluded,
                                const Rational& tau, const Guard& guard = {});

/// Exact check of rate >= tau on [N] \ excluded.
bool rate_at_least(const PointerSet& s, std::span<const std::uint32_t> excluded, const Rational& tau,
                   const Guard& guard = {});

/// {x in S : x_blocks = values}.
PointerSet restrict_to(const PointerSet& s, std::span<const std::uint32_t> blocks,
                       std::span<const std::uint32_t> values);

}  // namespace liftlab
