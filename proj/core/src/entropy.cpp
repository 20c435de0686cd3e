#include "liftlab/entropy.hpp"

#include "liftlab/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace liftlab {

namespace {

unsigned bits_for(std::uint32_t alphabet) {
    return alphabet <= 2 ? 1U : static_cast<unsigned>(std::bit_width(alphabet - 1));
}

std::vector<std::uint32_t> free_blocks(std::uint32_t n, std::span<const std::uint32_t> excluded) {
    std::vector<bool> out(n, false);
    for (auto b : excluded) {
        if (b >= n) throw Error(Errc::ShapeMismatch, "excluded block index out of range");
        out[b] = true;
    }
    std::vector<std::uint32_t> free;
    for (std::uint32_t b = 0; b < n; ++b)
        if (!out[b]) free.push_back(b);
    return free;
}

// Most frequent assignment on one block subset; `key` packs the values with the
// first listed block most significant.
struct SubsetStat {
    std::uint64_t count = 0;
    std::uint64_t key = 0;
};

std::vector<std::uint32_t> blocks_of(std::uint64_t mask, const std::vector<std::uint32_t>& free) {
    std::vector<std::uint32_t> out;
    for (std::size_t t = 0; t < free.size(); ++t)
        if ((mask >> t) & 1U) out.push_back(free[t]);
    return out;
}

SubsetStat subset_stat(const PointerSet& s, const std::vector<std::uint32_t>& blocks, std::vector<std::uint32_t>& dense,
                       std::vector<std::uint64_t>& scratch) {
    const unsigned bits = s.bits_per_block();
    const unsigned width = bits * static_cast<unsigned>(blocks.size());
    auto compact = [&](std::size_t i) {
        std::uint64_t k = 0;
        for (auto b : blocks) k = (k << bits) | s.value(i, b);
        return k;
    };
    SubsetStat best;
    if (width <= 22) {
        dense.assign(std::size_t{1} << width, 0);
        for (std::size_t i = 0; i < s.size(); ++i) ++dense[compact(i)];
        for (std::size_t k = 0; k < dense.size(); ++k) {
            if (dense[k] > best.count) best = {dense[k], k};
        }
        return best;
    }
    scratch.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) scratch[i] = compact(i);
    std::sort(scratch.begin(), scratch.end());
    for (std::size_t i = 0; i < scratch.size();) {
        std::size_t j = i;
        while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
        if (j - i > best.count) best = {j - i, scratch[i]};
        i = j;
    }
    return best;
}

std::vector<std::uint32_t> decode(std::uint64_t key, std::size_t count, unsigned bits) {
    std::vector<std::uint32_t> v(count);
    const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
    for (std::size_t t = count; t-- > 0;) {
        v[t] = static_cast<std::uint32_t>(key & mask);
        key >>= bits;
    }
    return v;
}

// Stats for every nonempty subset of the free blocks, indexed by bitmask.
std::vector<SubsetStat> all_stats(const PointerSet& s, const std::vector<std::uint32_t>& free, const Guard& guard) {
    guard.require("min-entropy rate subset enumeration", static_cast<double>(free.size()), 20.0);
    if (free.size() >= 40) throw Error(Errc::TooLarge, "too many blocks for subset enumeration");
    const std::uint64_t total = std::uint64_t{1} << free.size();
    std::vector<SubsetStat> stats(total);
    std::vector<std::uint32_t> dense;
    std::vector<std::uint64_t> scratch;
    for (std::uint64_t mask = 1; mask < total; ++mask) stats[mask] = subset_stat(s, blocks_of(mask, free), dense, scratch);
    return stats;
}

// count/|S| > m^(-tau |J|)  <=>  count^q * m^(p |J|) > |S|^q  for tau = p/q.
bool violates(std::uint64_t count, std::size_t j, std::size_t set_size, std::uint32_t m, const Rational& tau) {
    const auto p = static_cast<unsigned>(boost::multiprecision::numerator(tau));
    const auto q = static_cast<unsigned>(boost::multiprecision::denominator(tau));
    return ipow(BigInt(count), q) * ipow(BigInt(m), p * static_cast<unsigned>(j)) > ipow(BigInt(set_size), q);
}

// rate(c1, j1) < rate(c2, j2)  <=>  S^j2 * c2^j1 < S^j1 * c1^j2.
bool strictly_lower_rate(std::uint64_t c1, std::size_t j1, std::uint64_t c2, std::size_t j2, std::size_t set_size) {
    const BigInt s(set_size);
    const auto u1 = static_cast<unsigned>(j1);
    const auto u2 = static_cast<unsigned>(j2);
    return ipow(s, u2) * ipow(BigInt(c2), u1) < ipow(s, u1) * ipow(BigInt(c1), u2);
}

void check_tau(const Rational& tau) {
    if (tau < 0) throw Error(Errc::InvalidArgument, "tau must be non-negative");
}

}  // namespace

PointerSet::PointerSet(std::uint32_t blocks, std::uint32_t alphabet)
    : blocks_(blocks), alphabet_(alphabet), bits_(bits_for(alphabet)), field_mask_((std::uint64_t{1} << bits_) - 1) {
    if (alphabet < 2) throw Error(Errc::InvalidArgument, "alphabet size must be at least 2");
    if (blocks == 0) throw Error(Errc::InvalidArgument, "block count must be positive");
    if (std::uint64_t{blocks} * bits_ > 64) throw Error(Errc::TooLarge, "N * log2(m) exceeds 64 bits");
}

PointerSet::PointerSet(std::uint32_t blocks, std::uint32_t alphabet, std::span<const Pointer> members)
    : PointerSet(blocks, alphabet) {
    keys_.reserve(members.size());
    for (const auto& x : members) keys_.push_back(encode(x));
    std::sort(keys_.begin(), keys_.end());
    keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
}

PointerSet PointerSet::full(std::uint32_t blocks, std::uint32_t alphabet) {
    PointerSet s(blocks, alphabet);
    const double log_size = blocks * std::log2(static_cast<double>(alphabet));
    if (log_size > 26) throw Error(Errc::TooLarge, "full pointer universe too large to materialize");
    Pointer x(blocks, 0);
    while (true) {
        s.keys_.push_back(s.encode(x));
        std::uint32_t b = blocks;
        while (b > 0 && ++x[b - 1] == alphabet) x[--b] = 0;
        if (b == 0) break;
    }
    return s;
}

std::uint64_t PointerSet::encode(std::span<const std::uint32_t> x) const {
    if (x.size() != blocks_) throw Error(Errc::ShapeMismatch, "pointer has wrong number of blocks");
    std::uint64_t k = 0;
    for (std::uint32_t b = 0; b < blocks_; ++b) {
        if (x[b] >= alphabet_) throw Error(Errc::ShapeMismatch, "pointer value out of range");
        k |= std::uint64_t{x[b]} << shift(b);
    }
    return k;
}

Pointer PointerSet::member(std::size_t i) const {
    Pointer x(blocks_);
    for (std::uint32_t b = 0; b < blocks_; ++b) x[b] = value(i, b);
    return x;
}

std::vector<Pointer> PointerSet::members() const {
    std::vector<Pointer> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(member(i));
    return out;
}

bool PointerSet::contains(std::span<const std::uint32_t> x) const {
    return std::binary_search(keys_.begin(), keys_.end(), encode(x));
}

PointerSet PointerSet::filter(const std::function<bool(std::span<const std::uint32_t>)>& keep) const {
    PointerSet out(blocks_, alphabet_);
    Pointer x;
    for (std::size_t i = 0; i < size(); ++i) {
        x = member(i);
        if (keep(x)) out.keys_.push_back(keys_[i]);
    }
    return out;
}

PointerSet PointerSet::with_value(std::uint32_t block, std::uint32_t v) const {
    PointerSet out(blocks_, alphabet_);
    for (std::size_t i = 0; i < size(); ++i)
        if (value(i, block) == v) out.keys_.push_back(keys_[i]);
    return out;
}

PointerSet PointerSet::without_value(std::uint32_t block, std::uint32_t v) const {
    PointerSet out(blocks_, alphabet_);
    for (std::size_t i = 0; i < size(); ++i)
        if (value(i, block) != v) out.keys_.push_back(keys_[i]);
    return out;
}

double PointerSet::universe_bits() const { return blocks_ * std::log2(static_cast<double>(alphabet_)); }

double deficiency(const BigInt& set_size, double universe_bits) {
    if (set_size <= 0) throw Error(Errc::EmptySet, "deficiency of an empty set");
    return universe_bits - log2_big(set_size);
}

double deficiency(const PointerSet& s) { return deficiency(BigInt(s.size()), s.universe_bits()); }

bool deficiency_at_most(const BigInt& set_size, unsigned universe_bits, unsigned bound) {
    if (set_size <= 0) throw Error(Errc::EmptySet, "deficiency of an empty set");
    return (set_size << bound) >= pow2(universe_bits);
}

EntropyReport min_entropy_rate(const PointerSet& s, std::span<const std::uint32_t> excluded, const Guard& guard) {
    if (s.empty()) throw Error(Errc::EmptySet, "min-entropy rate of an empty set");
    const auto free = free_blocks(s.blocks(), excluded);
    EntropyReport report;
    report.set_size = s.size();
    report.deficiency = deficiency(s);
    if (free.empty()) return report;

    const auto stats = all_stats(s, free, guard);
    // Subsets of the free blocks listed by (size, lexicographic block list).
    std::vector<std::uint64_t> order(stats.size() - 1);
    std::iota(order.begin(), order.end(), std::uint64_t{1});
    std::sort(order.begin(), order.end(), [](std::uint64_t a, std::uint64_t b) {
        const int pa = std::popcount(a);
        const int pb = std::popcount(b);
        if (pa != pb) return pa < pb;
        // Lower bit = smaller block; lexicographic order of the sorted block
        // lists means the set containing the lowest differing block comes first.
        const std::uint64_t d = a ^ b;
        const std::uint64_t low = d & (~d + 1);
        return (a & low) != 0;
    });

    std::uint64_t best = order.front();
    for (auto mask : order) {
        if (strictly_lower_rate(stats[mask].count, std::popcount(mask), stats[best].count, std::popcount(best), s.size()))
            best = mask;
    }
    const auto j = static_cast<std::size_t>(std::popcount(best));
    report.witness_set = blocks_of(best, free);
    report.witness_assignment = decode(stats[best].key, j, s.bits_per_block());
    report.witness_count = stats[best].count;
    const double num = std::log2(static_cast<double>(s.size())) - std::log2(static_cast<double>(stats[best].count));
    report.rate = num / (static_cast<double>(j) * std::log2(static_cast<double>(s.alphabet())));
    return report;
}

bool rate_at_least(const PointerSet& s, std::span<const std::uint32_t> excluded, const Rational& tau,
                   const Guard& guard) {
    if (s.empty()) throw Error(Errc::EmptySet, "min-entropy rate of an empty set");
    check_tau(tau);
    const auto free = free_blocks(s.blocks(), excluded);
    if (free.empty()) return true;
    const auto stats = all_stats(s, free, guard);
    for (std::uint64_t mask = 1; mask < stats.size(); ++mask)
        if (violates(stats[mask].count, std::popcount(mask), s.size(), s.alphabet(), tau)) return false;
    return true;
}

LowRateSet maximal_low_rate_set(const PointerSet& s, std::span<const std::uint32_t> excluded, const Rational& tau,
                                const Guard& guard) {
    if (s.empty()) throw Error(Errc::EmptySet, "min-entropy rate of an empty set");
    check_tau(tau);
    const auto free = free_blocks(s.blocks(), excluded);
    if (free.empty()) return {};
    const auto stats = all_stats(s, free, guard);
    const std::uint64_t total = stats.size();

    std::vector<bool> violating(total, false);
    bool any = false;
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        violating[mask] = violates(stats[mask].count, std::popcount(mask), s.size(), s.alphabet(), tau);
        any = any || violating[mask];
    }
    if (!any) return {};

    // extends[M]: some violating superset of M exists.
    std::vector<bool> extends(total, false);
    for (std::uint64_t mask = total; mask-- > 1;) {
        bool e = violating[mask];
        for (std::size_t t = 0; t < free.size() && !e; ++t) {
            const std::uint64_t bit = std::uint64_t{1} << t;
            if (!(mask & bit)) e = extends[mask | bit];
        }
        extends[mask] = e;
    }

    // Seed with the rate-minimizing witness (it violates because rate < tau),
    // then add blocks in ascending order while a violating superset remains.
    const auto report = min_entropy_rate(s, excluded, guard);
    std::uint64_t cur = 0;
    for (auto b : report.witness_set) {
        const auto t = static_cast<std::size_t>(std::find(free.begin(), free.end(), b) - free.begin());
        cur |= std::uint64_t{1} << t;
    }
    for (std::size_t t = 0; t < free.size(); ++t) {
        const std::uint64_t bit = std::uint64_t{1} << t;
        if (!(cur & bit) && extends[cur | bit]) cur |= bit;
    }
    if (!violating[cur]) throw Error(Errc::EmptyState, "maximal low-rate set search did not end on a violating set");

    LowRateSet out;
    out.blocks = blocks_of(cur, free);
    out.values = decode(stats[cur].key, out.blocks.size(), s.bits_per_block());
    out.count = stats[cur].count;
    return out;
}

PointerSet restrict_to(const PointerSet& s, std::span<const std::uint32_t> blocks, std::span<const std::uint32_t> values) {
    if (blocks.size() != values.size()) throw Error(Errc::ShapeMismatch, "blocks and values differ in length");
    return s.filter([&](std::span<const std::uint32_t> x) {
        for (std::size_t t = 0; t < blocks.size(); ++t)
            if (x[blocks[t]] != values[t]) return false;
        return true;
    });
}

}  // namespace liftlab
