#include "liftlab/counterexample.hpp"

#include "liftlab/entropy.hpp"
#include "liftlab/error.hpp"
#include "liftlab/parallel.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace liftlab::counterexample {

void Params::validate() const {
    if (kind == GadgetKind::Index && m < 2) throw Error(Errc::ParamViolation, "IND gadget needs m >= 2");
    if (kind == GadgetKind::InnerProduct && m < 1) throw Error(Errc::ParamViolation, "IP gadget needs b >= 1");
    if (m > 31) throw Error(Errc::ParamViolation, "gadget size must be at most 31");
    if (n == 0) throw Error(Errc::ParamViolation, "N must be positive");
    if (k < 1) throw Error(Errc::ParamViolation, "K >= 1 fails (K = " + to_string(k) + ")");
    if (delta == 0) throw Error(Errc::ParamViolation, "Delta >= 1 fails");
    if (n % delta != 0) {
        std::ostringstream msg;
        msg << "Delta divides N fails (N = " << n << ", Delta = " << delta << "); pad to N = "
            << (n + delta - 1) / delta * delta;
        throw Error(Errc::ParamViolation, msg.str());
    }
    if (Rational(pow2(m)) * k * delta > n) {
        std::ostringstream msg;
        msg << "2^m <= N/(K*Delta) fails (2^" << m << " > " << n << "/(" << to_string(k) << "*" << delta << "))";
        throw Error(Errc::ParamViolation, msg.str());
    }
}

std::uint32_t Params::per_group_threshold() const { return floor_of(k).convert_to<std::uint32_t>(); }

std::uint32_t Params::max_dropped() const { return floor_of((k - 1) * delta).convert_to<std::uint32_t>(); }

BigInt tail_count(std::uint32_t m, std::uint32_t n, std::uint32_t threshold) {
    const BigInt other = pow2(m) - 1;
    BigInt total = 0;
    for (std::uint32_t t = threshold; t <= n; ++t) total += binomial(n, t) * ipow(other, n - t);
    return total;
}

namespace {

std::uint64_t special_block(GadgetKind kind, std::uint32_t size) {
    return kind == GadgetKind::Index ? (std::uint64_t{1} << size) - 1 : 0;
}

/// All subsets of [n] with at most `k` elements, by size then lexicographically.
std::vector<std::vector<std::uint32_t>> small_subsets(std::uint32_t n, std::uint32_t k) {
    std::vector<std::vector<std::uint32_t>> out{{}};
    std::vector<std::uint32_t> cur;
    for (std::uint32_t size = 1; size <= std::min(n, k); ++size) {
        cur.resize(size);
        for (std::uint32_t i = 0; i < size; ++i) cur[i] = i;
        while (true) {
            out.push_back(cur);
            std::int64_t i = size - 1;
            while (i >= 0 && cur[i] == n - size + i) --i;
            if (i < 0) break;
            ++cur[i];
            for (auto j = static_cast<std::size_t>(i) + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
        }
    }
    return out;
}

}  // namespace

BlockFamily build(const Params& p) {
    p.validate();
    return BlockFamily::symbolic(p.n, p.m,
                                 BlockFamily::Symbolic{p.delta, p.per_group_threshold(), special_block(p.kind, p.m)});
}

std::uint64_t forbidden_output(GadgetKind kind, std::uint32_t width) {
    if (kind == GadgetKind::Index) return 0;
    return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

Report verify(const Params& p, const BlockFamily& family, const VerifyOptions& opts) {
    p.validate();
    if (family.blocks() != p.n || family.bits_per_block() != p.m)
        throw Error(Errc::ShapeMismatch, "family shape does not match the parameters");
    opts.guard.require("counterexample verification", static_cast<double>(p.m) * p.n, 24.0);

    Report r;
    r.params = p;
    r.cardinality = family.cardinality();

    const std::uint64_t special = special_block(p.kind, p.m);
    const std::uint32_t needed = p.max_dropped() + 1;

    struct Scan {
        std::uint64_t count = 0;
        std::optional<std::uint64_t> witness;
    };
    auto scan_member = [&](Scan& s, std::uint64_t y) {
        ++s.count;
        std::uint32_t hits = 0;
        for (std::uint32_t i = 0; i < p.n; ++i) hits += family.block(y, i) == special;
        if (hits < needed && !s.witness) s.witness = y;
    };
    Scan scan;
    if (family.is_symbolic()) {
        const std::uint64_t total = std::uint64_t{1} << family.universe_bits();
        scan = parallel_reduce(
            static_cast<std::size_t>(total), std::max(1U, opts.threads), Scan{},
            [&](std::size_t lo, std::size_t hi) {
                Scan s;
                for (std::uint64_t y = lo; y < hi; ++y)
                    if (family.contains(y)) scan_member(s, y);
                return s;
            },
            [](Scan a, Scan b) {
                a.count += b.count;
                if (!a.witness) a.witness = b.witness;
                return a;
            });
    } else {
        family.for_each([&](std::uint64_t y) { scan_member(scan, y); }, opts.guard);
    }
    r.scanned_cardinality = scan.count;
    r.special_blocks_ok = !scan.witness.has_value();
    r.special_witness = scan.witness;

    if (scan.count == 0) {
        r.deficiency = INFINITY;
        r.rate = 0.0;
    } else {
        const unsigned bits = p.m * p.n;
        r.deficiency = deficiency(BigInt(scan.count), static_cast<double>(bits));
        r.deficiency_ok = deficiency_at_most(BigInt(scan.count), bits, p.delta);

        const auto rep = min_entropy_rate(family.to_pointer_set(opts.guard), {}, opts.guard);
        r.rate = rep.rate;
        r.rate_witness_blocks = rep.witness_set;
        // rate >= 1 - 1/m  <=>  count * 2^((m-1)|J|) <= |S|
        const BigInt lhs = rep.witness_count * pow2((p.m - 1) * static_cast<unsigned>(rep.witness_set.size()));
        const bool at_equality = !rep.witness_set.empty() && lhs == rep.set_size;
        r.rate_at_equality = at_equality;
        r.rate_ok = p.kind == GadgetKind::Index ? lhs <= rep.set_size
                                                : (rep.witness_set.empty() || lhs < rep.set_size);
    }

    const GadgetSpec g{p.kind, p.m, p.n};
    r.forbidden_missed = true;
    for (const auto& drop : small_subsets(p.n, p.max_dropped())) {
        ++r.sets_checked;
        if (scan.count == 0) continue;
        const auto img = image(g, nullptr, family, drop, opts.guard);
        const auto forbidden = forbidden_output(p.kind, p.n - static_cast<std::uint32_t>(drop.size()));
        if (std::binary_search(img.begin(), img.end(), forbidden)) {
            r.forbidden_missed = false;
            r.failing_drop = drop;
            break;
        }
    }
    r.implication_ok = !r.special_blocks_ok || r.forbidden_missed;
    return r;
}

MedianCheck binomial_median_check(std::uint32_t n, const Rational& p) {
    if (n > 64) throw Error(Errc::TooLarge, "binomial median check needs n <= 64");
    if (p < 0 || p > 1) throw Error(Errc::InvalidArgument, "probability must lie in [0, 1]");
    std::vector<Rational> pmf(n + 1);
    const Rational q = 1 - p;
    for (std::uint32_t t = 0; t <= n; ++t) {
        Rational term = Rational(binomial(n, t));
        for (std::uint32_t i = 0; i < t; ++i) term *= p;
        for (std::uint32_t i = t; i < n; ++i) term *= q;
        pmf[t] = term;
    }
    const Rational half(1, 2);
    MedianCheck out;
    Rational cdf = 0;
    for (std::uint32_t t = 0; t <= n; ++t) {
        cdf += pmf[t];
        if (cdf >= half) {
            out.median_low = t;
            break;
        }
    }
    Rational upper = 0;
    for (std::int64_t t = n; t >= 0; --t) {
        upper += pmf[t];
        if (upper >= half) {
            out.median_high = static_cast<std::uint32_t>(t);
            break;
        }
    }
    const Rational np = p * n;
    out.floor_np = floor_of(np);
    out.ceil_np = ceil_of(np);
    out.holds = out.median_low >= out.floor_np && out.median_high <= out.ceil_np &&
                out.median_low <= out.median_high;
    return out;
}

MajorityFraction majority_fraction_check(std::uint32_t m, std::uint32_t n, const Rational& k) {
    if (m == 0 || m > 31 || n == 0) throw Error(Errc::ParamViolation, "need m in [1, 31] and N >= 1");
    if (k < 1) throw Error(Errc::ParamViolation, "K >= 1 fails");
    if (Rational(pow2(m)) * k > n)
        throw Error(Errc::ParamViolation, "2^m <= N/K fails (2^" + std::to_string(m) + " > " + std::to_string(n) +
                                              "/" + to_string(k) + ")");
    MajorityFraction out;
    // more than K-1 all-1 blocks  <=>  at least floor(K) of them
    out.count = tail_count(m, n, floor_of(k).convert_to<std::uint32_t>());
    out.fraction = Rational(out.count, pow2(m * n));
    out.at_least_half = 2 * out.fraction >= 1;
    return out;
}

}  // namespace liftlab::counterexample
