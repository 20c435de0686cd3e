#include "liftlab/error.hpp"
#include "liftlab/gadgets.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace liftlab;

namespace {

std::uint64_t eval1(const GadgetSpec& g, std::vector<std::uint64_t> x, std::vector<std::uint64_t> y) {
    return eval(g, x, y);
}

int ind_block(std::uint64_t x, std::uint64_t y) { return static_cast<int>((y >> x) & 1U); }

std::vector<std::uint64_t> oracle_words(const std::set<std::vector<int>>& img) {
    std::vector<std::uint64_t> out;
    for (const auto& z : img) {
        std::uint64_t w = 0;
        for (std::size_t t = 0; t < z.size(); ++t) w |= std::uint64_t(z[t]) << t;
        out.push_back(w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<std::uint64_t>> all_tuples(std::uint32_t blocks, std::uint64_t alphabet) {
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<std::uint64_t> cur(blocks, 0);
    while (true) {
        out.push_back(cur);
        std::size_t pos = blocks;
        while (pos > 0 && ++cur[pos - 1] == alphabet) cur[--pos] = 0;
        if (pos == 0) break;
    }
    return out;
}

}  // namespace

TEST(Eval, IndexReadsPointedBit) { EXPECT_EQ(eval1(GadgetSpec::index(4, 1), {2}, {0b0010}), 0u); }

TEST(Eval, InnerProductParity) { EXPECT_EQ(eval1(GadgetSpec::inner_product(2, 1), {0b11}, {0b11}), 0u); }

TEST(Eval, IndexTwoBlocks) { EXPECT_EQ(eval1(GadgetSpec::index(2, 2), {0, 1}, {0b01, 0b10}), 0b11u); }

TEST(Eval, ShapeMismatchThrows) {
    try {
        (void)eval1(GadgetSpec::index(2, 2), {0}, {0b01, 0b10});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ShapeMismatch);
    }
    EXPECT_THROW((void)eval1(GadgetSpec::index(2, 1), {2}, {0}), Error);
}

TEST(Image, ZeroBlockGivesZero) {
    const auto y = BlockFamily::explicit_set(1, 2, {0b00});
    EXPECT_EQ(image(GadgetSpec::index(2, 1), nullptr, y, {}), std::vector<std::uint64_t>{0});
}

TEST(Image, MixedBlockGivesBoth) {
    const auto y = BlockFamily::explicit_set(1, 2, {0b10});
    EXPECT_EQ(image(GadgetSpec::index(2, 1), nullptr, y, {}), (std::vector<std::uint64_t>{0, 1}));
}

TEST(Image, AllOnesAfterDrop) {
    const auto y = BlockFamily::explicit_set(2, 2, {0b1111});
    const std::vector<std::uint32_t> drop{0};
    EXPECT_EQ(image(GadgetSpec::index(2, 2), nullptr, y, drop), std::vector<std::uint64_t>{1});
}

TEST(Image, GuardRefusesWideOutputs) {
    const auto y = BlockFamily::full(30, 2);
    try {
        (void)image(GadgetSpec::index(2, 30), nullptr, y, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::GuardExceeded);
    }
}

TEST(ConstantLine, InnerProductZeroColumn) {
    const auto c = has_constant_line(GadgetSpec::inner_product(2, 1));
    ASSERT_TRUE(c);
    EXPECT_EQ(*c, (ConstantLine{LineSide::Column, 0, false}));
}

TEST(ConstantLine, IndexFirstConstantColumn) {
    const auto c = has_constant_line(GadgetSpec::index(2, 1));
    ASSERT_TRUE(c);
    EXPECT_EQ(*c, (ConstantLine{LineSide::Column, 0, false}));
    const auto t = table_of(GadgetSpec::index(2, 1));
    for (std::uint32_t x = 0; x < 2; ++x) EXPECT_TRUE(t.at(x, 3));
}

TEST(ConstantLine, XorHasNone) {
    const GadgetTable xor1{2, 2, {0, 1, 1, 0}};
    EXPECT_FALSE(has_constant_line(xor1));
}

TEST(Property, IndexIsUniversal) {
    std::mt19937_64 rng(17);
    for (std::uint32_t m = 2; m <= 4; ++m) {
        for (int trial = 0; trial < 20; ++trial) {
            GadgetTable t{m, m, {}};
            for (std::uint32_t c = 0; c < m * m; ++c) t.cells.push_back(static_cast<std::uint8_t>(rng() & 1U));
            const auto g = GadgetSpec::index(m, 1);
            for (std::uint32_t x = 0; x < m; ++x)
                for (std::uint32_t y = 0; y < m; ++y)
                    EXPECT_EQ(g.eval_block(x, index_encode(t, y)), t.at(x, y));
        }
    }
}

TEST(Property, ImageMatchesOracle) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        const std::uint32_t blocks = 1 + static_cast<std::uint32_t>(rng() % 3);
        const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng() % 2);
        std::vector<std::uint64_t> ys;
        std::vector<std::vector<std::uint64_t>> ys_blocks;
        for (const auto& y : all_tuples(blocks, std::uint64_t{1} << m)) {
            if (rng() % 5 != 0) continue;
            std::uint64_t w = 0;
            for (std::uint32_t i = 0; i < blocks; ++i) w |= y[i] << (i * m);
            ys.push_back(w);
            ys_blocks.push_back(y);
        }
        if (ys.empty()) continue;
        std::vector<Pointer> xs;
        std::vector<std::vector<std::uint64_t>> xs_blocks;
        for (const auto& x : all_tuples(blocks, m)) {
            if (rng() % 2 != 0) continue;
            xs.emplace_back(x.begin(), x.end());
            xs_blocks.push_back(x);
        }
        if (xs.empty()) continue;
        const PointerSet xset(blocks, m, xs);
        const auto fam = BlockFamily::explicit_set(blocks, m, ys);
        std::vector<std::uint32_t> drop;
        for (std::uint32_t i = 0; i < blocks; ++i)
            if (rng() % 3 == 0) drop.push_back(i);
        const auto g = GadgetSpec::index(m, blocks);
        EXPECT_EQ(image(g, &xset, fam, drop), oracle_words(oracle::image(ind_block, xs_blocks, ys_blocks, drop)));
        EXPECT_EQ(image(g, nullptr, fam, drop),
                  oracle_words(oracle::image(ind_block, all_tuples(blocks, m), ys_blocks, drop)));
    }
}

TEST(Property, ProjectionOfImage) {
    // image on [N]\I projected to J equals the image on J directly
    const std::uint32_t blocks = 3;
    const auto fam = BlockFamily::symbolic(blocks, 2, {1, 1, 3});
    const auto g = GadgetSpec::index(2, blocks);
    const auto full = image(g, nullptr, fam, {});
    for (std::uint32_t keep = 1; keep < 8; ++keep) {
        std::vector<std::uint32_t> drop;
        std::vector<std::uint32_t> kept;
        for (std::uint32_t i = 0; i < blocks; ++i) ((keep >> i) & 1U ? kept : drop).push_back(i);
        std::set<std::uint64_t> projected;
        for (auto w : full) {
            std::uint64_t p = 0;
            for (std::size_t t = 0; t < kept.size(); ++t) p |= ((w >> kept[t]) & 1U) << t;
            projected.insert(p);
        }
        EXPECT_EQ(image(g, nullptr, fam, drop), std::vector<std::uint64_t>(projected.begin(), projected.end()));
    }
}
