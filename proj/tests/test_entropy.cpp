#include "liftlab/block_family.hpp"
#include "liftlab/entropy.hpp"
#include "liftlab/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace liftlab;
using liftlab::support::points_of;

namespace {

PointerSet first_block_is(std::uint32_t v) {
    return PointerSet::full(2, 4).filter([v](std::span<const std::uint32_t> x) { return x[0] == v; });
}

PointerSet random_set(std::mt19937_64& rng, std::uint32_t blocks, std::uint32_t m) {
    const auto full = PointerSet::full(blocks, m);
    const unsigned keep = 1 + static_cast<unsigned>(rng() % 4);  // density keep/4
    auto s = full.filter([&](std::span<const std::uint32_t>) { return rng() % 4 < keep; });
    if (s.empty()) s = full.filter([](std::span<const std::uint32_t> x) { return x[0] == 0; });
    return s;
}

}  // namespace

TEST(Deficiency, FullSetIsZero) { EXPECT_DOUBLE_EQ(deficiency(PointerSet::full(2, 4)), 0.0); }

TEST(Deficiency, FixedBlockCostsTwoBits) {
    const auto s = first_block_is(2);
    EXPECT_EQ(s.size(), 4u);
    EXPECT_DOUBLE_EQ(deficiency(s), 2.0);
    EXPECT_DOUBLE_EQ(deficiency(s), oracle::deficiency(points_of(s), 4, 2));
}

TEST(Deficiency, CounterexampleFamilyWithinOneBit) {
    const auto fam = BlockFamily::symbolic(8, 2, {1, 2, 3});
    // closed form against the binomial tail of B(8, 1/4): sum_{t>=2} C(8,t) 3^(8-t)
    BigInt tail = 0;
    for (unsigned t = 2; t <= 8; ++t) tail += binomial(8, t) * ipow(BigInt(3), 8 - t);
    EXPECT_EQ(fam.cardinality(), tail);
    EXPECT_EQ(fam.cardinality(), oracle::count_family(2, 8, 1, 2, 3));
    EXPECT_LE(deficiency(fam.cardinality(), 16.0), 1.0);
    EXPECT_TRUE(deficiency_at_most(fam.cardinality(), 16, 1));
    EXPECT_NEAR(deficiency(fam.cardinality(), 16.0), 16.0 - std::log2(41479.0), 1e-12);
}

TEST(Deficiency, EmptySetThrows) {
    try {
        (void)deficiency(PointerSet(2, 4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptySet);
    }
}

TEST(MinEntropyRate, FullSetHasRateOne) {
    const auto r = min_entropy_rate(PointerSet::full(2, 4));
    EXPECT_DOUBLE_EQ(r.rate, 1.0);
}

TEST(MinEntropyRate, FixedBlockHasRateZero) {
    const auto r = min_entropy_rate(first_block_is(2));
    EXPECT_DOUBLE_EQ(r.rate, 0.0);
    EXPECT_EQ(r.witness_set, std::vector<std::uint32_t>{0});
    EXPECT_EQ(r.witness_assignment, std::vector<std::uint32_t>{2});
    const auto o = oracle::min_entropy_rate(points_of(first_block_is(2)), 4, 2, {});
    EXPECT_EQ(o.blocks, r.witness_set);
    EXPECT_EQ(o.values, r.witness_assignment);
}

TEST(MinEntropyRate, ExcludingTheFixedBlockRestoresRateOne) {
    const std::vector<std::uint32_t> excluded{0};
    const auto r = min_entropy_rate(first_block_is(2), excluded);
    EXPECT_DOUBLE_EQ(r.rate, 1.0);
}

TEST(MinEntropyRate, EmptySetThrows) { EXPECT_THROW((void)min_entropy_rate(PointerSet(2, 4)), Error); }

TEST(MinEntropyRate, GuardRefusesManyBlocks) {
    const PointerSet s(21, 2, std::vector<Pointer>{Pointer(21, 0)});
    try {
        (void)min_entropy_rate(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::GuardExceeded);
    }
}

TEST(MaximalLowRateSet, FullSetNeedsNothing) {
    EXPECT_TRUE(maximal_low_rate_set(PointerSet::full(2, 4), {}, Rational(1, 2)).empty());
}

TEST(MaximalLowRateSet, SingleFixedBlock) {
    const auto s = first_block_is(2);
    const auto low = maximal_low_rate_set(s, {}, Rational(1, 2));
    EXPECT_EQ(low.blocks, std::vector<std::uint32_t>{0});
    EXPECT_EQ(low.values, std::vector<std::uint32_t>{2});
    EXPECT_TRUE(oracle::maximal_low_rate(points_of(s), 4, 2, {}, low.blocks, 1, 2));
    EXPECT_FALSE(oracle::low_rate(points_of(s), 4, {0, 1}, 1, 2));
}

TEST(MaximalLowRateSet, SingletonTakesEverything) {
    const PointerSet s(2, 4, std::vector<Pointer>{{0, 0}});
    const auto low = maximal_low_rate_set(s, {}, Rational(1, 2));
    EXPECT_EQ(low.blocks, (std::vector<std::uint32_t>{0, 1}));
    EXPECT_EQ(low.values, (std::vector<std::uint32_t>{0, 0}));
}

TEST(Property, RateReportsMatchOracle) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t blocks = 1 + static_cast<std::uint32_t>(rng() % 3);
        const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng() % 3);
        const auto s = random_set(rng, blocks, m);
        std::vector<std::uint32_t> excluded;
        for (std::uint32_t i = 0; i < blocks; ++i)
            if (rng() % 4 == 0) excluded.push_back(i);
        const auto r = min_entropy_rate(s, excluded);
        const auto o = oracle::min_entropy_rate(points_of(s), m, blocks, excluded);
        EXPECT_EQ(r.witness_set, o.blocks);
        EXPECT_EQ(r.witness_assignment, o.values);
        EXPECT_NEAR(r.rate, o.rate, 1e-12);
        if (!o.blocks.empty()) {
            EXPECT_EQ(r.witness_count.str(), o.count.str());
        }
        EXPECT_NEAR(deficiency(s), oracle::deficiency(points_of(s), m, blocks), 1e-12);
    }
}

TEST(Property, RestorationLeavesHighRate) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t blocks = 1 + static_cast<std::uint32_t>(rng() % 3);
        const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng() % 3);
        const auto s = random_set(rng, blocks, m);
        const auto low = maximal_low_rate_set(s, {}, Rational(1, 2));
        const auto pts = points_of(s);
        ASSERT_TRUE(oracle::maximal_low_rate(pts, m, blocks, {}, low.blocks, 1, 2));
        if (low.empty()) {
            EXPECT_TRUE(rate_at_least(s, {}, Rational(1, 2)));
            continue;
        }
        const auto [alpha, count] = oracle::most_frequent(pts, low.blocks);
        EXPECT_EQ(low.values, alpha);
        EXPECT_EQ(low.count.str(), count.str());
        const auto shrunk = restrict_to(s, low.blocks, low.values);
        EXPECT_TRUE(rate_at_least(shrunk, low.blocks, Rational(1, 2)));
    }
}

TEST(Property, DeficiencyIsMonotone) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_set(rng, 3, 3);
        const auto sub = s.filter([&](std::span<const std::uint32_t>) { return rng() % 2 == 0; });
        if (sub.empty()) continue;
        EXPECT_GE(deficiency(sub), deficiency(s));
    }
}

TEST(Property, ConditioningBound) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_set(rng, 3, 3);
        const auto e = s.filter([&](std::span<const std::uint32_t>) { return rng() % 3 != 0; });
        if (e.empty()) continue;
        const double log_inv_p = std::log2(double(s.size()) / double(e.size()));
        // every marginal S_J: H(S_J | E) >= H(S_J) - log2(1/p)
        for (std::uint32_t keep = 1; keep < 8; ++keep) {
            std::vector<std::uint32_t> dropped;
            for (std::uint32_t i = 0; i < 3; ++i)
                if (!((keep >> i) & 1U)) dropped.push_back(i);
            const auto [cs, ns] = oracle::marginal_fibre(points_of(s), dropped);
            const auto [ce, ne] = oracle::marginal_fibre(points_of(e), dropped);
            const double hs = std::log2(ns.convert_to<double>() / cs.convert_to<double>());
            const double he = std::log2(ne.convert_to<double>() / ce.convert_to<double>());
            EXPECT_GE(he + 1e-9, hs - log_inv_p);
        }
    }
}
