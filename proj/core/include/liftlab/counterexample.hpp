#pragma once

#include "liftlab/bigint.hpp"
#include "liftlab/block_family.hpp"
#include "liftlab/gadgets.hpp"
#include "liftlab/guard.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace liftlab::counterexample {

struct Params {
    GadgetKind kind = GadgetKind::Index;
    std::uint32_t m = 2;  ///< m for IND, b for IP
    std::uint32_t n = 8;  ///< N
    Rational k = 1;       ///< K >= 1
    std::uint32_t delta = 1;

    /// Throws ParamViolation naming the failed inequality.
    void validate() const;
    /// k = floor(K) blocks per group.
    [[nodiscard]] std::uint32_t per_group_threshold() const;
    /// floor((K - 1) * Delta): the largest |I| the construction defeats.
    [[nodiscard]] std::uint32_t max_dropped() const;
};

/// The family of strings whose every group of N/Delta blocks has at least
/// floor(K) blocks equal to 1^m (IND) or 0^b (IP).
BlockFamily build(const Params& p);

struct Report {
    Params params;
    BigInt cardinality = 0;          ///< from the family (closed form when symbolic)
    BigInt scanned_cardinality = 0;  ///< by exhaustive scan
    double deficiency = 0.0;
    bool deficiency_ok = false;  ///< (1) deficiency <= Delta, exact

    double rate = 0.0;
    std::vector<std::uint32_t> rate_witness_blocks;
    bool rate_ok = false;        ///< (2) >= 1 - 1/m (IND) or > 1 - 1/b (IP), exact
    bool rate_at_equality = false;

    std::uint64_t sets_checked = 0;
    bool forbidden_missed = false;  ///< (3) every image misses the forbidden string
    std::optional<std::vector<std::uint32_t>> failing_drop;

    bool special_blocks_ok = false;  ///< (4) each member has > (K-1)Delta special blocks
    std::optional<std::uint64_t> special_witness;

    bool implication_ok = false;  ///< (4) implies (3)

    [[nodiscard]] bool all_passed() const {
        return cardinality == scanned_cardinality && deficiency_ok && rate_ok && forbidden_missed &&
               special_blocks_ok && implication_ok;
    }
};

struct VerifyOptions {
    Guard guard;
    unsigned threads = 1;
};

/// Exhaustive check of the four properties; failures are reported, not thrown.
/// Refuses m*N > 24 unless the guard is forced.
Report verify(const Params& p, const BlockFamily& family, const VerifyOptions& opts = {});

/// The all-0 string for IND, all-1 for IP, on `width` kept blocks.
std::uint64_t forbidden_output(GadgetKind kind, std::uint32_t width);

struct MedianCheck {
    bool holds = false;
    std::uint32_t median_low = 0;   ///< smallest t with P[X <= t] >= 1/2
    std::uint32_t median_high = 0;  ///< largest t with P[X >= t] >= 1/2
    BigInt floor_np = 0;
    BigInt ceil_np = 0;
};

/// Exact CDF of B(n, p); checks every median lies in [floor(np), ceil(np)].
MedianCheck binomial_median_check(std::uint32_t n, const Rational& p);

struct MajorityFraction {
    Rational fraction = 0;
    BigInt count = 0;
    bool at_least_half = false;
};

/// Exact fraction of ({0,1}^m)^N with more than K-1 all-1 blocks. Requires 2^m <= N/K.
MajorityFraction majority_fraction_check(std::uint32_t m, std::uint32_t n, const Rational& k);

/// sum_{t >= threshold} C(n, t) (2^m - 1)^(n - t)
BigInt tail_count(std::uint32_t m, std::uint32_t n, std::uint32_t threshold);

}  // namespace liftlab::counterexample
