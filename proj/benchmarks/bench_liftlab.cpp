#include "liftlab/counterexample.hpp"
#include "liftlab/f2_linalg.hpp"
#include "liftlab/proofcnf.hpp"
#include "liftlab/protocol.hpp"
#include "liftlab/simulation.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace liftlab;

namespace {

BitVec random_bits(std::mt19937_64& rng, std::size_t width) {
    BitVec v(width);
    for (std::size_t i = 0; i < width; ++i) v.set(i, (rng() & 1U) != 0);
    return v;
}

DecisionTree xor_tree(std::uint32_t n, std::uint32_t var, bool acc) {
    if (var == n) return DecisionTree::leaf(DecisionTree::Kind::Plain, n, acc ? "1" : "0");
    return DecisionTree::branch({var}, xor_tree(n, var + 1, acc), xor_tree(n, var + 1, !acc));
}

LiftedProblem xor_problem(std::uint32_t n, std::uint32_t m) {
    std::vector<bool> table;
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) table.push_back(std::popcount(z) % 2 == 1);
    return LiftedProblem::boolean(n, m, table);
}

}  // namespace

static void BM_RowReduce(benchmark::State& state) {
    const auto width = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::vector<f2::ParityEq> eqs;
    f2::AffineSystem probe(width);
    while (probe.codim() < width / 2) {
        f2::ParityEq e{random_bits(rng, width), (rng() & 1U) != 0};
        if (probe.in_span(e.support)) continue;
        probe.insert(e);
        eqs.push_back(e);
    }
    for (auto _ : state) {
        f2::AffineSystem s(width);
        for (const auto& e : eqs) s.insert(e);
        benchmark::DoNotOptimize(s.codim());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(eqs.size()));
}
BENCHMARK(BM_RowReduce)->Arg(16)->Arg(64)->Arg(256);

static void BM_CounterexampleVerify(benchmark::State& state) {
    counterexample::Params p;
    p.kind = state.range(1) == 0 ? GadgetKind::Index : GadgetKind::InnerProduct;
    p.m = 2;
    p.n = 8;
    p.k = 2;
    p.delta = 1;
    const auto family = counterexample::build(p);
    for (auto _ : state) {
        const auto r = counterexample::verify(p, family, {Guard{}, static_cast<unsigned>(state.range(0))});
        benchmark::DoNotOptimize(r.sets_checked);
    }
}
BENCHMARK(BM_CounterexampleVerify)->Args({1, 0})->Args({4, 0})->Args({1, 1})->Unit(benchmark::kMillisecond);

static void BM_ExtractDecisionTree(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    const auto kind = state.range(1) == 0 ? ProtocolKind::ParityParity : ProtocolKind::StarParity;
    const auto p = canonical_protocol(xor_problem(n, 4), xor_tree(n, 0, false), kind);
    sim::Options o;
    o.mode = kind == ProtocolKind::ParityParity ? sim::Mode::ParityParity : sim::Mode::StarParity;
    for (auto _ : state) benchmark::DoNotOptimize(sim::extract_decision_tree(p, o).size());
}
BENCHMARK(BM_ExtractDecisionTree)->Args({2, 0})->Args({3, 0})->Args({3, 1})->Unit(benchmark::kMillisecond);

static void BM_Containment(benchmark::State& state) {
    const auto width = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    auto random_subspace = [&](std::size_t codim) {
        Subspace s(width);
        for (std::size_t k = 0; k < codim; ++k) s.add({random_bits(rng, width), (rng() & 1U) != 0});
        return s;
    };
    std::vector<std::array<Subspace, 3>> triples;
    for (int k = 0; k < 64; ++k) triples.push_back({random_subspace(width / 4), random_subspace(2), random_subspace(2)});
    for (auto _ : state)
        for (const auto& [c, a, b] : triples) benchmark::DoNotOptimize(containment_CsubAuB(c, a, b));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(triples.size()));
}
BENCHMARK(BM_Containment)->Arg(16)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
