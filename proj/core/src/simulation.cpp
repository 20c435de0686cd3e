#include "liftlab/simulation.hpp"

#include "liftlab/error.hpp"
#include "liftlab/layout.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace liftlab::sim {

namespace {

/// Thrown by the scripted oracle of the tree extractors when a run needs an
/// answer beyond its prefix.
struct NeedQuery {
    std::uint32_t block;
};

std::uint64_t projected_max(const PointerSet& x, const std::vector<bool>& fixed) {
    const std::uint64_t field = (std::uint64_t{1} << x.bits_per_block()) - 1;
    std::uint64_t mask = 0;
    for (std::uint32_t i = 0; i < x.blocks(); ++i)
        if (!fixed[i]) mask |= field << x.shift(i);
    std::vector<std::uint64_t> keys;
    keys.reserve(x.size());
    for (auto k : x.keys()) keys.push_back(k & mask);
    std::sort(keys.begin(), keys.end());
    std::uint64_t best = 0;
    for (std::size_t a = 0; a < keys.size();) {
        std::size_t b = a;
        while (b < keys.size() && keys[b] == keys[a]) ++b;
        best = std::max<std::uint64_t>(best, b - a);
        a = b;
    }
    return best;
}

void fail(const std::string& what) { throw Error(Errc::EmptyState, what); }

bool x_bit_constant(const PointerSet& x, std::uint32_t block, std::uint32_t bit, bool& value) {
    const bool first = (x.value(0, block) >> bit) & 1U;
    for (std::size_t k = 1; k < x.size(); ++k)
        if (((x.value(k, block) >> bit) & 1U) != first) return false;
    value = first;
    return true;
}

/// Makes every x in X avoid pointing at (block, j) by fixing one unconstrained
/// bit of x_block to disagree with j. Returns the bit fixed, or -1 if X
/// already avoided j.
int constrain_away(SimState& s, std::uint32_t block, std::uint32_t j, std::uint32_t bits) {
    for (std::uint32_t k = 0; k < bits; ++k) {
        bool v = false;
        if (x_bit_constant(s.x, block, k, v) && v != (((j >> k) & 1U) != 0)) return -1;
    }
    for (std::uint32_t k = 0; k < bits; ++k) {
        bool v = false;
        if (x_bit_constant(s.x, block, k, v)) continue;
        const bool want = ((j >> k) & 1U) == 0;
        s.x = s.x.filter([&](std::span<const std::uint32_t> x) { return (((x[block] >> k) & 1U) != 0) == want; });
        return static_cast<int>(k);
    }
    fail("X points only at the new dependent coordinate " + f2::to_string(f2::ycoord(block, j)));
    return -1;
}

std::uint32_t ceil_log2(std::uint32_t m) {
    std::uint32_t b = 0;
    while ((std::uint32_t{1} << b) < m) ++b;
    return b;
}

void record(Result& r, const SimState& s, std::uint32_t node, int bit, Rule rule,
            std::vector<std::uint32_t> queried = {}) {
    TraceStep t;
    t.node = node;
    t.bit = bit;
    t.rule = rule;
    t.queried = std::move(queried);
    t.potential = potential(s);
    t.alice = s.alice;
    t.bob = s.bob;
    t.fixed = s.fixed_count();
    t.path_bits = s.path_bits;
    r.trace.steps.push_back(std::move(t));
}

void check_state(const SimState& s) {
    const auto bad = invariant_violations(s);
    if (!bad.empty()) {
        std::string names;
        for (const auto& b : bad) names += (names.empty() ? "" : ",") + b;
        fail("simulation invariant violated: " + names);
    }
    if (!potential_bound_holds(s)) fail("potential bound violated");
}

/// z agreeing with rho on I and 0 elsewhere.
std::uint64_t rho_word(const SimState& s) {
    std::uint64_t z = 0;
    for (std::uint32_t i = 0; i < s.blocks(); ++i)
        if (s.rho[i] == 1) z |= std::uint64_t{1} << i;
    return z;
}

template <class Run>
DecisionTree explore(std::uint32_t blocks, const Run& run, std::vector<bool>& prefix) {
    std::size_t used = 0;
    Oracle oracle = [&](std::uint32_t block) -> bool {
        if (used < prefix.size()) return prefix[used++];
        throw NeedQuery{block};
    };
    try {
        auto r = run(oracle);
        return DecisionTree::leaf(QueryTree::Kind::Plain, blocks, r.label);
    } catch (const NeedQuery& q) {
        prefix.push_back(false);
        auto zero = explore(blocks, run, prefix);
        prefix.back() = true;
        auto one = explore(blocks, run, prefix);
        prefix.pop_back();
        return DecisionTree::branch({q.block}, std::move(zero), std::move(one));
    }
}

}  // namespace

std::string_view to_string(Mode mode) noexcept {
    return mode == Mode::StarParity ? "star-parity" : "parity-parity";
}

Mode parse_mode(std::string_view text) {
    if (text == "star-parity") return Mode::StarParity;
    if (text == "parity-parity") return Mode::ParityParity;
    throw Error(Errc::ParseError, "mode must be star-parity or parity-parity, got '" + std::string(text) + "'");
}

std::string_view to_string(Rule rule) noexcept {
    switch (rule) {
        case Rule::SpanForced: return "span-forced";
        case Rule::BobEquation: return "bob-new-equation";
        case Rule::AliceSplit: return "alice-split";
        case Rule::AliceIrrelevant: return "alice-irrelevant";
        case Rule::Restore: return "restore";
        case Rule::Leaf: return "leaf";
    }
    return "unknown";
}

void SimTrace::write_tsv(std::ostream& out) const {
    out << "step\tnode\tbit\trule\tqueried\tpotential\tA\tB\tfixed\tpath_bits\n";
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto& t = steps[k];
        out << k << '\t' << t.node << '\t';
        if (t.bit < 0) {
            out << '-';
        } else {
            out << t.bit;
        }
        out << '\t' << to_string(t.rule) << '\t';
        if (t.queried.empty()) out << '-';
        for (std::size_t q = 0; q < t.queried.size(); ++q) out << (q ? "," : "") << t.queried[q] + 1;
        out << '\t' << std::fixed << std::setprecision(6) << t.potential << std::defaultfloat << '\t' << t.alice
            << '\t' << t.bob << '\t' << t.fixed << '\t' << t.path_bits << '\n';
    }
}

SimState::SimState(std::uint32_t blocks, std::uint32_t m, std::uint32_t x_bits)
    : x(PointerSet::full(blocks, m)),
      space(blocks, m, x_bits),
      e(space.width()),
      fixed(blocks, false),
      rho(blocks, -1),
      alpha(blocks, 0) {}

std::vector<std::uint32_t> SimState::fixed_blocks() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < fixed.size(); ++i)
        if (fixed[i]) out.push_back(i);
    return out;
}

std::size_t SimState::fixed_count() const {
    return static_cast<std::size_t>(std::count(fixed.begin(), fixed.end(), true));
}

double potential(const SimState& s) {
    if (s.x.empty()) fail("X is empty");
    const double free = static_cast<double>(s.blocks() - s.fixed_count());
    const auto c = projected_max(s.x, s.fixed);
    return free * std::log2(static_cast<double>(s.m())) - std::log2(static_cast<double>(s.x.size())) +
           std::log2(static_cast<double>(c));
}

bool potential_bound_holds(const SimState& s) {
    if (s.x.empty()) return false;
    // c^2 m^(2N - |I|) <= 4^(A+B) |X|^2 with c the largest fibre of the projection.
    const BigInt c = projected_max(s.x, s.fixed);
    const auto fixed = static_cast<unsigned>(s.fixed_count());
    const BigInt lhs = c * c * ipow(BigInt(s.m()), 2 * s.blocks() - fixed);
    const BigInt size = s.x.size();
    const BigInt rhs = pow2(2 * (s.alice + s.bob)) * size * size;
    return lhs <= rhs;
}

bool query_bound_holds(std::size_t queried, unsigned bits, std::uint32_t m) {
    // (1/2)|I| log2 m <= A + B  <=>  m^|I| <= 4^(A+B)
    return ipow(BigInt(m), static_cast<unsigned>(queried)) <= pow2(2 * bits);
}

std::vector<std::string> invariant_violations(const SimState& s) {
    std::vector<std::string> bad;
    if (s.x.empty()) {
        bad.emplace_back("nonempty");
        return bad;
    }
    const std::uint32_t n = s.blocks();

    bool a = true;
    for (std::uint32_t i = 0; i < n; ++i) {
        if ((s.rho[i] >= 0) != static_cast<bool>(s.fixed[i])) a = false;
        if (s.fixed[i])
            for (std::size_t k = 0; k < s.x.size() && a; ++k) a = s.x.value(k, i) == s.alpha[i];
    }
    if (!a) bad.emplace_back("a");

    bool b = s.e.is_row_reduced() && s.e.width() == s.space.width();
    const std::uint32_t ell = s.space.x_bits_per_block();
    if (b && ell > 0) {
        // X must be exactly the solution set of the x-only rows.
        std::size_t x_rows = 0;
        for (std::size_t r = 0; r < s.e.codim(); ++r) {
            if (s.space.coord(s.e.pivots()[r]).side != f2::Side::X) continue;
            ++x_rows;
            const auto& row = s.e.rows()[r];
            for (std::size_t k = 0; k < s.x.size() && b; ++k) {
                bool v = false;
                for (auto c = row.first(); c < row.size(); c = row.next(c)) {
                    const auto coord = s.space.coord(c);
                    if (coord.side == f2::Side::Y) {
                        b = false;
                        break;
                    }
                    v ^= (s.x.value(k, coord.block) >> coord.position) & 1U;
                }
                if (v != s.e.rhs()[r]) b = false;
            }
        }
        if (b) b = BigInt(s.x.size()) == pow2(static_cast<unsigned>(ell * n - x_rows));
    }
    if (!b) bad.emplace_back("b");

    bool c = true;
    for (std::size_t k = 0; k < s.x.size() && c; ++k)
        for (std::uint32_t i = 0; i < n && c; ++i)
            if (!s.fixed[i]) c = !s.e.is_pivot(s.space.index(f2::ycoord(i, s.x.value(k, i))));
    if (!c) bad.emplace_back("c");

    bool d = s.e.satisfied_by(s.e.particular_solution());
    if (d) {
        std::map<std::size_t, bool> ones;
        for (std::size_t col = 0; col < s.space.width(); ++col)
            if (!s.e.is_pivot(col)) ones[col] = true;
        BitVec full(s.space.width());
        for (const auto& [col, v] : ones) full.set(col, v);
        for (const auto& [col, v] : s.e.unique_extension(ones)) full.set(col, v);
        d = s.e.satisfied_by(full);
    }
    if (!d) bad.emplace_back("d");

    if (!rate_at_least(s.x, s.fixed_blocks(), s.tau)) bad.emplace_back("e");
    return bad;
}

std::pair<AliceInput, BobInput> leaf_witness(const SimState& s, std::uint64_t z) {
    if (s.x.empty()) fail("X is empty");
    const std::uint32_t n = s.blocks();
    for (std::uint32_t i = 0; i < n; ++i)
        if (s.fixed[i] && static_cast<int>((z >> i) & 1U) != s.rho[i])
            throw Error(Errc::InvalidArgument, "z disagrees with the queried answers");
    AliceInput x = s.x.member(0);
    std::map<std::size_t, bool> free;
    for (std::size_t col = 0; col < s.space.width(); ++col) {
        if (s.e.is_pivot(col)) continue;
        const auto c = s.space.coord(col);
        if (c.side == f2::Side::X) {
            free[col] = (x[c.block] >> c.position) & 1U;
        } else {
            free[col] = !s.fixed[c.block] && x[c.block] == c.position && ((z >> c.block) & 1U);
        }
    }
    BitVec full(s.space.width());
    for (const auto& [col, v] : free) full.set(col, v);
    for (const auto& [col, v] : s.e.unique_extension(free)) full.set(col, v);
    BobInput y(n, 0);
    for (std::size_t col = 0; col < s.space.y_width(); ++col) {
        const auto c = s.space.coord(col);
        if (full.test(col)) y[c.block] |= std::uint64_t{1} << c.position;
    }
    for (std::size_t col = s.space.y_width(); col < s.space.width(); ++col) {
        const auto c = s.space.coord(col);
        if (full.test(col) != (((x[c.block] >> c.position) & 1U) != 0)) fail("x-bit pivots disagree with X");
    }
    if (index_outputs(x, y) != z) fail("leaf witness does not produce z");
    return {x, y};
}

std::vector<std::uint32_t> restore(SimState& s, const Oracle& z, const Guard& guard) {
    const auto low = maximal_low_rate_set(s.x, s.fixed_blocks(), s.tau, guard);
    if (low.empty()) return {};
    std::vector<bool> answers;
    answers.reserve(low.blocks.size());
    for (auto i : low.blocks) answers.push_back(z(i));
    s.x = restrict_to(s.x, low.blocks, low.values);
    if (s.x.empty()) fail("restoration emptied X");
    const std::uint32_t ell = s.space.x_bits_per_block();
    for (std::size_t t = 0; t < low.blocks.size(); ++t) {
        const std::uint32_t i = low.blocks[t];
        const std::uint32_t a = low.values[t];
        for (std::uint32_t k = 0; k < ell; ++k) {
            const bool bit = (a >> k) & 1U;
            const auto eq = f2::make_eq(s.space, {f2::xbit(i, k)}, bit);
            const auto forced = s.e.in_span(eq.support);
            if (forced) {
                if (*forced != bit) fail("restored pointer contradicts the x-constraints");
                continue;
            }
            s.e.insert(eq);
        }
        const std::size_t col = s.space.index(f2::ycoord(i, a));
        const auto pivot = s.e.insert(f2::make_eq(s.space, {f2::ycoord(i, a)}, answers[t]));
        if (pivot != col) fail("restored coordinate " + f2::to_string(f2::ycoord(i, a)) + " was not free");
        s.rho[i] = answers[t] ? 1 : 0;
        s.fixed[i] = true;
        s.alpha[i] = a;
    }
    return low.blocks;
}

Result simulate(const ProtocolTree& p, const Oracle& z, const Options& opts) {
    p.validate();
    const std::uint32_t n = p.blocks();
    const std::uint32_t m = p.m();
    if (m < 4) throw Error(Errc::InvalidArgument, "the simulation needs m >= 4, got m = " + std::to_string(m));
    if (opts.mode == Mode::ParityParity) {
        if (!std::has_single_bit(m)) throw Error(Errc::NotPowerOfTwo, "parity-parity mode needs m a power of two");
        for (const auto& nd : p.nodes())
            if (nd.type == ProtocolNode::Type::AliceSplit)
                throw Error(Errc::ShapeMismatch, "parity-parity mode cannot simulate Alice partitions");
    }
    const std::size_t cap = std::size_t{n} * (ceil_log2(m) + 1);
    if (p.depth() > cap && !opts.guard.force)
        throw Error(Errc::GuardExceeded, "protocol depth " + std::to_string(p.depth()) + " exceeds N(ceil(log2 m) + 1) = " +
                                             std::to_string(cap));
    const auto lc = p.leaf_counts();
    const std::uint32_t bits = ceil_log2(m);

    SimState s(n, m);
    Result r;
    while (true) {
        if (opts.on_loop_head) opts.on_loop_head(s);
        if (opts.check_invariants) check_state(s);
        const auto& nd = p.node(s.node);
        if (nd.leaf()) {
            if (opts.check_invariants) {
                const auto [x, y] = leaf_witness(s, rho_word(s));
                if (p.evaluate(x, y).leaf != s.node) fail("leaf witness reaches a different leaf");
            }
            record(r, s, nd.id, -1, Rule::Leaf);
            r.label = nd.label;
            r.leaf = s.node;
            break;
        }
        int b = 0;
        Rule rule = Rule::SpanForced;
        const std::uint32_t smaller = lc[nd.child[1]] < lc[nd.child[0]] ? 1 : 0;
        if (nd.type == ProtocolNode::Type::BobParity) {
            const auto support = s.space.support(nd.support);
            if (const auto forced = s.e.in_span(support)) {
                b = *forced ? 1 : 0;
            } else {
                b = static_cast<int>(smaller);
                const auto pivot = s.e.insert({support, b == 1});
                const auto c = s.space.coord(pivot);
                ++s.bob;
                rule = Rule::BobEquation;
                if (s.fixed[c.block]) {
                    if (s.alpha[c.block] == c.position) fail("new dependent coordinate is a fixed pointer");
                } else if (opts.mode == Mode::StarParity) {
                    s.x = s.x.without_value(c.block, c.position);
                } else {
                    constrain_away(s, c.block, c.position, bits);
                }
                if (s.x.empty()) fail("X became empty after Bob's step");
            }
        } else {
            const auto zero = s.x.filter(
                [&](std::span<const std::uint32_t> x) { return !p.message(s.node, x, std::span<const std::uint64_t>{}); });
            const std::size_t n0 = zero.size();
            const std::size_t n1 = s.x.size() - n0;
            if (n0 == 0 || n1 == 0) {
                b = n0 == 0 ? 1 : 0;
                rule = Rule::AliceIrrelevant;
            } else {
                if (opts.mode == Mode::StarParity) {
                    b = n0 >= n1 ? 0 : 1;
                } else {
                    if (n0 != n1) fail("Alice's parity splits an affine X unevenly");
                    b = static_cast<int>(smaller);
                }
                s.x = b == 0 ? zero : s.x.filter([&](std::span<const std::uint32_t> x) {
                    return p.message(s.node, x, std::span<const std::uint64_t>{});
                });
                ++s.alice;
                rule = Rule::AliceSplit;
            }
        }
        ++s.path_bits;
        const std::uint32_t at = nd.id;
        s.node = nd.child[b];
        record(r, s, at, b, rule);
        auto queried = restore(s, z, opts.guard);
        if (!queried.empty()) {
            r.queried.insert(r.queried.end(), queried.begin(), queried.end());
            record(r, s, p.node(s.node).id, -1, Rule::Restore, std::move(queried));
        }
    }
    r.alice = s.alice;
    r.bob = s.bob;
    r.path_bits = s.path_bits;
    return r;
}

Result simulate(const ProtocolTree& p, std::uint64_t z, const Options& opts) {
    return simulate(p, [z](std::uint32_t i) { return ((z >> i) & 1U) != 0; }, opts);
}

DecisionTree extract_decision_tree(const ProtocolTree& p, const Options& opts) {
    std::vector<bool> prefix;
    return explore(p.blocks(), [&](const Oracle& z) { return simulate(p, z, opts); }, prefix);
}

Result pdt_run(const ParityDecisionTree& t, std::uint32_t m, std::uint32_t blocks, const Oracle& z,
               const PdtOptions& opts) {
    t.validate();
    const LiftedLayout layout(blocks, m);
    if (m < 4) throw Error(Errc::InvalidArgument, "parity tree simulation needs m >= 4, got m = " + std::to_string(m));
    if (t.vars() != layout.vars())
        throw Error(Errc::ShapeMismatch, "tree has " + std::to_string(t.vars()) + " variables, the lifted layout " +
                                             std::to_string(layout.vars()));
    const auto lc = t.leaf_counts();
    SimState s(blocks, m, layout.ell);
    Result r;
    while (true) {
        if (opts.on_loop_head) opts.on_loop_head(s);
        if (opts.check_invariants) check_state(s);
        const auto& nd = t.node(s.node);
        if (nd.leaf) {
            if (opts.check_invariants) {
                const auto [x, y] = leaf_witness(s, rho_word(s));
                BitVec assignment(layout.vars());
                for (std::uint32_t i = 0; i < blocks; ++i) {
                    for (std::uint32_t k = 0; k < layout.ell; ++k) assignment.set(layout.x_var(i, k), (x[i] >> k) & 1U);
                    for (std::uint32_t j = 0; j < m; ++j) assignment.set(layout.y_var(i, j), (y[i] >> j) & 1U);
                }
                if (t.walk(assignment) != s.node) fail("leaf witness reaches a different leaf");
            }
            record(r, s, s.node, -1, Rule::Leaf);
            r.label = opts.relabel ? opts.relabel(nd.label) : nd.label;
            r.leaf = s.node;
            break;
        }
        BitVec support(s.space.width());
        for (auto v : nd.query) support.flip(s.space.index(layout.coord(v)));
        int b = 0;
        Rule rule = Rule::SpanForced;
        if (const auto forced = s.e.in_span(support)) {
            b = *forced ? 1 : 0;
        } else {
            b = lc[nd.child[1]] < lc[nd.child[0]] ? 1 : 0;
            const auto pivot = s.e.insert({support, b == 1});
            const auto c = s.space.coord(pivot);
            if (c.side == f2::Side::Y) {
                ++s.bob;
                rule = Rule::BobEquation;
                if (s.fixed[c.block]) {
                    if (s.alpha[c.block] == c.position) fail("new dependent coordinate is a fixed pointer");
                } else {
                    const int k = constrain_away(s, c.block, c.position, layout.ell);
                    if (k >= 0)
                        s.e.insert(f2::make_eq(s.space, {f2::xbit(c.block, static_cast<std::uint32_t>(k))},
                                               ((c.position >> k) & 1U) == 0));
                }
            } else {
                ++s.alice;
                rule = Rule::AliceSplit;
                const auto row = *s.e.row_of_pivot(pivot);
                const auto& eq = s.e.rows()[row];
                const bool rhs = s.e.rhs()[row];
                std::vector<f2::Coord> bits;
                for (auto col = eq.first(); col < eq.size(); col = eq.next(col)) bits.push_back(s.space.coord(col));
                s.x = s.x.filter([&](std::span<const std::uint32_t> x) {
                    bool v = false;
                    for (const auto& cb : bits) v ^= (x[cb.block] >> cb.position) & 1U;
                    return v == rhs;
                });
            }
            if (s.x.empty()) fail("X became empty");
        }
        ++s.path_bits;
        const std::uint32_t at = s.node;
        s.node = nd.child[b];
        record(r, s, at, b, rule);
        auto queried = restore(s, z, opts.guard);
        if (!queried.empty()) {
            r.queried.insert(r.queried.end(), queried.begin(), queried.end());
            record(r, s, s.node, -1, Rule::Restore, std::move(queried));
        }
    }
    r.alice = s.alice;
    r.bob = s.bob;
    r.path_bits = s.path_bits;
    return r;
}

DecisionTree pdt_simulate(const ParityDecisionTree& t, std::uint32_t m, std::uint32_t blocks, const PdtOptions& opts) {
    std::vector<bool> prefix;
    return explore(blocks, [&](const Oracle& z) { return pdt_run(t, m, blocks, z, opts); }, prefix);
}

}  // namespace liftlab::sim
