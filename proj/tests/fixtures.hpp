#pragma once

#include "liftlab/decision_tree.hpp"
#include "liftlab/protocol.hpp"

#include <functional>
#include <string>
#include <vector>

namespace liftlab::fixtures {

struct BaseFunction {
    std::string name;
    std::uint32_t n;
    std::function<bool(std::uint64_t)> f;  ///< bit i of z is z_{i+1}
    DecisionTree dt;                       ///< an optimal-height tree

    [[nodiscard]] std::vector<bool> table() const {
        std::vector<bool> t;
        for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) t.push_back(f(z));
        return t;
    }
    [[nodiscard]] std::vector<int> int_table() const {
        std::vector<int> t;
        for (bool b : table()) t.push_back(b ? 1 : 0);
        return t;
    }
};

inline DecisionTree leaf(std::uint32_t n, const std::string& label) {
    return DecisionTree::leaf(DecisionTree::Kind::Plain, n, label);
}

inline DecisionTree query(std::uint32_t var, DecisionTree zero, DecisionTree one) {
    return DecisionTree::branch({var}, std::move(zero), std::move(one));
}

/// Queries z_{var+1}, ..., z_n in order and labels each leaf by the parity
/// of the answers (plus `acc`).
inline DecisionTree parity_tree(std::uint32_t n, std::uint32_t var, bool acc) {
    if (var == n) return leaf(n, acc ? "1" : "0");
    return query(var, parity_tree(n, var + 1, acc), parity_tree(n, var + 1, !acc));
}

inline const std::vector<BaseFunction>& base_functions() {
    static const std::vector<BaseFunction> all{
        {"z1", 1, [](std::uint64_t z) { return (z & 1U) != 0; }, query(0, leaf(1, "0"), leaf(1, "1"))},
        {"AND2", 2, [](std::uint64_t z) { return z == 3; },
         query(0, leaf(2, "0"), query(1, leaf(2, "0"), leaf(2, "1")))},
        {"OR2", 2, [](std::uint64_t z) { return z != 0; },
         query(0, query(1, leaf(2, "0"), leaf(2, "1")), leaf(2, "1"))},
        {"XOR2", 2, [](std::uint64_t z) { return std::popcount(z) % 2 == 1; }, parity_tree(2, 0, false)},
        {"XOR3", 3, [](std::uint64_t z) { return std::popcount(z) % 2 == 1; }, parity_tree(3, 0, false)},
    };
    return all;
}

inline LiftedProblem problem_of(const BaseFunction& b, std::uint32_t m) {
    return LiftedProblem::boolean(b.n, m, b.table());
}

}  // namespace liftlab::fixtures

#include <random>

namespace liftlab::fixtures {

/// f = z_1 on N = 2 and AND(z_1, z_2) on N = 3: the canonical protocol leaves
/// room under the N(log2 m + 1) depth cap for three extra random nodes.
inline const std::vector<BaseFunction>& padded_functions() {
    static const std::vector<BaseFunction> all{
        {"z1_of_2", 2, [](std::uint64_t z) { return (z & 1U) != 0; }, query(0, leaf(2, "0"), leaf(2, "1"))},
        {"AND2_of_3", 3, [](std::uint64_t z) { return (z & 3U) == 3; },
         query(0, leaf(3, "0"), query(1, leaf(3, "0"), leaf(3, "1")))},
    };
    return all;
}

/// Random Alice and Bob nodes on top of the canonical protocol, which stays
/// correct whatever happened before it, so the result is always correct.
inline ProtocolTree random_prefix_protocol(std::mt19937_64& rng, const LiftedProblem& prob, const DecisionTree& dt,
                                           ProtocolKind kind, int depth) {
    if (depth == 0 || rng() % 4 == 0) return canonical_protocol(prob, dt, kind);
    auto zero = random_prefix_protocol(rng, prob, dt, kind, depth - 1);
    auto one = random_prefix_protocol(rng, prob, dt, kind, depth - 1);
    const std::uint32_t n = prob.blocks;
    const std::uint32_t m = prob.m;
    const std::uint32_t ell = static_cast<std::uint32_t>(std::countr_zero(m));
    if (rng() % 2 == 0) {
        std::vector<f2::Coord> ys;
        while (ys.empty())
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = 0; j < m; ++j)
                    if (rng() % (n * m) < 2) ys.push_back(f2::ycoord(i, j));
        return ProtocolTree::bob_parity(ys, std::move(zero), std::move(one));
    }
    if (kind == ProtocolKind::StarParity) {
        auto part = PointerSet::full(n, m).filter([&](std::span<const std::uint32_t>) { return rng() % 2 == 0; });
        return ProtocolTree::alice_split(std::move(part), std::move(zero), std::move(one));
    }
    std::vector<f2::Coord> xs;
    while (xs.empty())
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t k = 0; k < ell; ++k)
                if (rng() % 2 == 0) xs.push_back(f2::xbit(i, k));
    return ProtocolTree::alice_parity(xs, std::move(zero), std::move(one));
}

}  // namespace liftlab::fixtures

#include "liftlab/layout.hpp"
#include "liftlab/proofcnf.hpp"

namespace liftlab::fixtures {

/// The parity tree that runs a base decision tree on IND_m-lifted inputs:
/// each query of z_i becomes the ell x-bit queries of block i (most
/// significant first) followed by the pointed y-coordinate. `label` names
/// each leaf from the base leaf and the pointer values read so far.
inline ParityDecisionTree lifted_pdt(
    const DecisionTree& dt, std::uint32_t m,
    const std::function<std::string(std::uint32_t, const std::vector<std::uint32_t>&)>& label) {
    const LiftedLayout L(dt.vars(), m);
    std::vector<std::uint32_t> pointers(dt.vars(), 0);
    std::function<ParityDecisionTree(std::uint32_t)> walk = [&](std::uint32_t v) {
        const auto& nd = dt.node(v);
        if (nd.leaf) return ParityDecisionTree::leaf(ParityDecisionTree::Kind::Parity, L.vars(), label(v, pointers));
        const std::uint32_t i = nd.query[0];
        std::function<ParityDecisionTree(std::uint32_t, std::uint32_t)> bits = [&](std::uint32_t k, std::uint32_t value) {
            if (k == 0) {
                pointers[i] = value;
                auto zero = walk(nd.child[0]);
                auto one = walk(nd.child[1]);
                return ParityDecisionTree::branch({L.y_var(i, value)}, std::move(zero), std::move(one));
            }
            const std::uint32_t bit = k - 1;
            return ParityDecisionTree::branch({L.x_var(i, bit)}, bits(k - 1, value), bits(k - 1, value | (1U << bit)));
        };
        return bits(L.ell, 0);
    };
    return walk(0);
}

inline ParityDecisionTree lifted_pdt(const DecisionTree& dt, std::uint32_t m) {
    return lifted_pdt(dt, m, [&](std::uint32_t v, const std::vector<std::uint32_t>&) { return dt.node(v).label; });
}

/// Lifted search tree: a base leaf naming clause C becomes the lifted clause
/// of C whose tuple is the pointers read on the path.
inline ParityDecisionTree lifted_search_pdt(const LiftedCnf& lifted, const DecisionTree& dt) {
    return lifted_pdt(dt, lifted.layout.m, [&](std::uint32_t v, const std::vector<std::uint32_t>& pointers) {
        const auto k = *lifted.base.find(dt.node(v).label);
        const auto& clause = lifted.base.clauses[k];
        for (std::size_t c = 0; c < lifted.cnf.clauses.size(); ++c) {
            if (lifted.clause_map[c] != k) continue;
            bool match = true;
            for (std::size_t t = 0; t < clause.size() && match; ++t)
                match = lifted.tuples[c][t] == pointers[static_cast<std::size_t>(std::abs(clause[t]) - 1)];
            if (match) return lifted.cnf.names[c];
        }
        throw std::logic_error("no lifted clause for leaf");
    });
}

struct SearchFixture {
    std::string name;
    Cnf cnf;
    DecisionTree dt;  ///< solves Search(cnf)
};

/// (z1) & (~z1), and a 3-variable unsatisfiable 2-CNF.
inline const std::vector<SearchFixture>& search_fixtures() {
    static const std::vector<SearchFixture> all{
        {"contradiction", Cnf::make(1, {{1}, {-1}}), query(0, leaf(1, "1"), leaf(1, "2"))},
        {"chain3", Cnf::make(3, {{1, 2}, {-1, 3}, {-2, 3}, {-3, 1}, {-3, -1}}),
         query(2, query(0, query(1, leaf(3, "1"), leaf(3, "3")), leaf(3, "2")), query(0, leaf(3, "4"), leaf(3, "5")))},
    };
    return all;
}

}  // namespace liftlab::fixtures
