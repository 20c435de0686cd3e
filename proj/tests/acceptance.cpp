// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "liftlab/counterexample.hpp"
#include "liftlab/entropy.hpp"
#include "liftlab/error.hpp"
#include "liftlab/f2_linalg.hpp"
#include "liftlab/proofcnf.hpp"
#include "liftlab/simulation.hpp"
#include "fixtures.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace liftlab;
using namespace liftlab::fixtures;
using liftlab::support::points_of;
using liftlab::support::to_oracle;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
    std::ostringstream s;
    s.precision(digits);
    s << std::fixed << v;
    return s.str();
}

// 1 and 4: exhaustive verification of the desk-scale counterexample.
Outcome counterexample_run(GadgetKind kind) {
    const auto t0 = Clock::now();
    counterexample::Params p;
    p.kind = kind;
    p.m = 2;
    p.n = 8;
    p.k = 2;
    p.delta = 1;
    const auto family = counterexample::build(p);
    const auto r = counterexample::verify(p, family, {Guard{}, 1});
    const double secs = seconds_since(t0);
    // sum_{t >= 2} C(8, t) 3^(8 - t), written out independently.
    const std::uint64_t closed = oracle::count_family(2, 8, 1, 2, kind == GadgetKind::Index ? 0b11 : 0b00);
    const bool pass = r.all_passed() && r.cardinality == 41479 && r.scanned_cardinality == 41479 && closed == 41479 &&
                      r.deficiency_ok && r.rate_ok && r.sets_checked == 9 && r.forbidden_missed && secs < 10.0;
    return {pass, "|S|=" + r.scanned_cardinality.str() + " deficiency=" + fmt(r.deficiency, 6) +
                      " rate=" + fmt(r.rate, 6) + " I-sets=" + std::to_string(r.sets_checked) +
                      " forbidden-missed=" + (r.forbidden_missed ? "yes" : "no") + " time=" + fmt(secs) + "s"};
}

// 2: fraction of strings with more than K-1 all-1 blocks.
Outcome all_one_tail() {
    std::size_t points = 0;
    std::size_t scanned = 0;
    for (std::uint32_t m = 1; m <= 3; ++m)
        for (std::uint32_t n = 1; n <= 16; ++n)
            for (std::uint32_t k = 1; (std::uint32_t{1} << m) * k <= n; ++k) {
                ++points;
                const auto r = counterexample::majority_fraction_check(m, n, k);
                if (!r.at_least_half || r.fraction < Rational(1, 2)) return {false, "below 1/2 at m=" + std::to_string(m)};
                // 1 - P[B(n, 2^-m) <= k - 1] from the oracle's exact CDF.
                const auto cdf = oracle::binomial_cdf_numerators(n, 1, 1U << m);
                const oracle::Int den = boost::multiprecision::pow(oracle::Int(1) << m, n);
                const oracle::Int tail = den - cdf[k - 1];
                if (r.count.str() != tail.str())
                    return {false, "CDF count mismatch at m=" + std::to_string(m) + " N=" + std::to_string(n)};
                if (n * m <= 20) {
                    ++scanned;
                    const std::uint64_t all = (std::uint64_t{1} << m) - 1;
                    std::uint64_t count = 0;
                    for (std::uint64_t y = 0; y < (std::uint64_t{1} << (n * m)); ++y) {
                        std::uint32_t ones = 0;
                        for (std::uint32_t i = 0; i < n; ++i) ones += ((y >> (i * m)) & all) == all;
                        count += ones > k - 1;
                    }
                    if (r.count != count)
                        return {false, "scan mismatch at m=" + std::to_string(m) + " N=" + std::to_string(n)};
                }
            }
    return {true, std::to_string(points) + " grid points, " + std::to_string(scanned) + " scanned"};
}

// 3: medians of B(n, p).
Outcome binomial_medians() {
    std::size_t checked = 0;
    for (std::uint32_t n = 1; n <= 20; ++n)
        for (const Rational& p : {Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
            const auto r = counterexample::binomial_median_check(n, p);
            // Recompute the medians from the oracle CDF.
            const auto q = static_cast<unsigned>(boost::multiprecision::denominator(p));
            const auto num = static_cast<unsigned>(boost::multiprecision::numerator(p));
            const auto cdf = oracle::binomial_cdf_numerators(n, num, q);
            const oracle::Int total = cdf.back();
            std::uint32_t low = 0;
            while (2 * cdf[low] < total) ++low;
            std::uint32_t high = n;
            while (2 * (total - (high == 0 ? oracle::Int(0) : cdf[high - 1])) < total) --high;
            const BigInt np_floor = floor_of(p * n);
            const BigInt np_ceil = ceil_of(p * n);
            const bool inside = np_floor <= low && high <= np_ceil;
            if (!r.holds || !inside || r.median_low != low || r.median_high != high)
                return {false, "n=" + std::to_string(n) + " p=" + to_string(p)};
            ++checked;
        }
    return {true, std::to_string(checked) + " (n, p) pairs"};
}

sim::Mode mode_of(ProtocolKind k) {
    return k == ProtocolKind::StarParity ? sim::Mode::StarParity : sim::Mode::ParityParity;
}

struct ProtocolFixture {
    std::string name;
    BaseFunction f;
    ProtocolTree p;
};

std::vector<ProtocolFixture> protocol_fixtures() {
    std::vector<ProtocolFixture> out;
    for (const auto& f : base_functions())
        for (auto kind : {ProtocolKind::ParityParity, ProtocolKind::StarParity})
            out.push_back({f.name, f, canonical_protocol(problem_of(f, 4), f.dt, kind)});
    std::mt19937_64 rng(29);
    for (const auto& f : padded_functions())
        for (auto kind : {ProtocolKind::ParityParity, ProtocolKind::StarParity})
            for (int k = 0; k < 6; ++k)
                out.push_back({f.name, f, random_prefix_protocol(rng, problem_of(f, 4), f.dt, kind, 3)});
    return out;
}

bool computes(const DecisionTree& t, const BaseFunction& f) {
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << f.n); ++z)
        if (t.evaluate(z) != (f.f(z) ? "1" : "0")) return false;
    return true;
}

// 5: canonical (+,+) protocols are correct and simulate to f.
Outcome simulation_correctness() {
    for (const auto& f : base_functions()) {
        const auto p = canonical_protocol(problem_of(f, 4), f.dt, ProtocolKind::ParityParity);
        if (check_correct(p, problem_of(f, 4))) return {false, f.name + ": protocol incorrect"};
        sim::Options o;
        o.mode = sim::Mode::ParityParity;
        o.check_invariants = true;
        if (!computes(sim::extract_decision_tree(p, o), f)) return {false, f.name + ": extracted tree disagrees"};
    }
    return {true, std::to_string(base_functions().size()) + " functions at m=4"};
}

// 6 and 7: per-run query bound and the potential invariant at every loop head.
Outcome query_bound(const std::vector<ProtocolFixture>& fixtures) {
    std::size_t runs = 0;
    for (const auto& fx : fixtures)
        for (std::uint64_t z = 0; z < (std::uint64_t{1} << fx.f.n); ++z) {
            sim::Options o;
            o.mode = mode_of(fx.p.kind());
            const auto r = sim::simulate(fx.p, z, o);
            if (!sim::query_bound_holds(r.queried.size(), r.span_bits(), 4) || r.queried.size() > r.span_bits())
                return {false, fx.name + " z=" + std::to_string(z)};
            ++runs;
        }
    return {true, std::to_string(fixtures.size()) + " fixtures, " + std::to_string(runs) + " runs"};
}

Outcome potential_invariant(const std::vector<ProtocolFixture>& fixtures) {
    std::size_t heads = 0;
    for (const auto& fx : fixtures)
        for (std::uint64_t z = 0; z < (std::uint64_t{1} << fx.f.n); ++z) {
            bool ok = true;
            sim::Options o;
            o.mode = mode_of(fx.p.kind());
            o.on_loop_head = [&](const sim::SimState& s) {
                ++heads;
                ok = ok && oracle::potential_holds(points_of(s.x), 4, fx.f.n, s.fixed_blocks(), s.alice + s.bob);
            };
            (void)sim::simulate(fx.p, z, o);
            if (!ok) return {false, fx.name + " z=" + std::to_string(z)};
        }
    return {true, std::to_string(heads) + " loop heads"};
}

// 8: leaf counts never grow.
Outcome size_lifting(const std::vector<ProtocolFixture>& fixtures) {
    std::size_t protocols = 0;
    std::size_t trees = 0;
    for (const auto& fx : fixtures) {
        if (fx.p.kind() != ProtocolKind::ParityParity) continue;
        sim::Options o;
        o.mode = sim::Mode::ParityParity;
        const auto t = sim::extract_decision_tree(fx.p, o);
        if (t.leaves() > fx.p.leaves()) return {false, fx.name + ": extracted tree has more leaves"};
        ++protocols;
    }
    sim::PdtOptions opts;
    opts.check_invariants = true;
    for (const auto& f : base_functions()) {
        const auto pdt = lifted_pdt(f.dt, 4);
        const auto t = sim::pdt_simulate(pdt, 4, f.n, opts);
        if (t.leaves() > pdt.leaves() || !computes(t, f)) return {false, f.name + ": parity tree simulation"};
        ++trees;
    }
    for (const auto& fx : search_fixtures()) {
        const auto lifted = lift_cnf(fx.cnf, 4);
        const auto pdt = lifted_search_pdt(lifted, fx.dt);
        auto o = opts;
        o.relabel = [&](const std::string& name) { return lifted.base_label(name); };
        const auto t = sim::pdt_simulate(pdt, 4, fx.cnf.vars, o);
        if (t.leaves() > pdt.leaves() || !pdt_solves_search(t, fx.cnf).accepted)
            return {false, fx.name + ": parity tree simulation"};
        ++trees;
    }
    return {true, std::to_string(protocols) + " protocols, " + std::to_string(trees) + " parity trees"};
}

// 9: lifted refutation -> tree -> simulation -> tree resolution.
Outcome resplus_pipeline() {
    const auto t0 = Clock::now();
    std::string detail;
    for (const auto& fx : search_fixtures()) {
        const auto lifted = lift_cnf(fx.cnf, 4);
        const auto proof = pdt_to_resplus(lifted_search_pdt(lifted, fx.dt), lifted.cnf);
        if (!check_resplus(lifted.cnf, proof, true).accepted) return {false, fx.name + ": lifted proof rejected"};
        sim::PdtOptions o;
        o.relabel = [&](const std::string& name) { return lifted.base_label(name); };
        const auto dt = sim::pdt_simulate(resplus_to_pdt(proof, lifted.cnf), 4, fx.cnf.vars, o);
        const auto base = pdt_to_resplus(dt, fx.cnf);
        if (!base.is_tree_resolution() || !check_resplus(fx.cnf, base, true).accepted)
            return {false, fx.name + ": base refutation rejected"};
        if (base.lines.size() > proof.lines.size()) return {false, fx.name + ": base refutation is longer"};
        detail += fx.name + " " + std::to_string(proof.lines.size()) + "->" + std::to_string(base.lines.size()) + " ";
    }
    const double secs = seconds_since(t0);
    return {secs < 5.0, detail + "time=" + fmt(secs) + "s"};
}

// 10: row reduction keeps the solution set and the identity on pivots.
Outcome f2_equivalence() {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto width = static_cast<unsigned>(1 + rng() % 16);
        const auto target = static_cast<std::size_t>(1 + rng() % std::min(12U, width));
        f2::AffineSystem s(width);
        std::vector<oracle::Eq> raw;
        while (s.codim() < target) {
            BitVec v(width);
            for (unsigned i = 0; i < width; ++i) v.set(i, (rng() & 1U) != 0);
            if (s.in_span(v)) continue;
            const f2::ParityEq e{v, (rng() & 1U) != 0};
            s.insert(e);
            raw.push_back(to_oracle(e));
            if (!s.is_row_reduced()) return {false, "identity lost in trial " + std::to_string(trial)};
            for (std::size_t r = 0; r < s.codim(); ++r)
                for (std::size_t q = 0; q < s.codim(); ++q)
                    if (s.rows()[q].test(s.pivots()[r]) != (q == r))
                        return {false, "identity lost in trial " + std::to_string(trial)};
        }
        if (oracle::solutions(raw, width) != oracle::solutions(to_oracle(s), width))
            return {false, "solution sets differ in trial " + std::to_string(trial)};
    }
    return {true, "10000 sequences"};
}

// 11: entropy quantities against the direct definitions.
Outcome entropy_agreement() {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = static_cast<std::uint32_t>(1 + rng() % 4);
        const auto m = static_cast<std::uint32_t>(2 + rng() % 3);
        const auto full = PointerSet::full(n, m);
        PointerSet s(n, m);
        while (s.empty()) s = full.filter([&](std::span<const std::uint32_t>) { return rng() % 3 == 0; });
        std::vector<std::uint32_t> excluded;
        for (std::uint32_t i = 0; i < n; ++i)
            if (rng() % 4 == 0) excluded.push_back(i);
        const auto pts = points_of(s);
        const auto r = min_entropy_rate(s, excluded);
        const auto o = oracle::min_entropy_rate(pts, m, n, excluded);
        // The minimizer (J, alpha, count, |S|) fixes the rate exactly.
        const bool rate_ok = r.witness_set == o.blocks && r.witness_assignment == o.values &&
                             r.set_size.str() == o.size.str() &&
                             (o.blocks.empty() || r.witness_count.str() == o.count.str());
        const bool def_ok = s.size() == pts.size() && std::abs(deficiency(s) - oracle::deficiency(pts, m, n)) < 1e-12;
        const auto low = maximal_low_rate_set(s, excluded, Rational(1, 2));
        bool max_ok = oracle::maximal_low_rate(pts, m, n, excluded, low.blocks, 1, 2);
        if (!low.empty()) {
            const auto [alpha, count] = oracle::most_frequent(pts, low.blocks);
            max_ok = max_ok && alpha == low.values && count.str() == low.count.str();
        }
        if (!rate_ok || !def_ok || !max_ok) return {false, "trial " + std::to_string(trial)};
    }
    return {true, "1000 sets"};
}

// 12: brute-force optima, also certifying the fixture trees of criterion 5.
Outcome oracle_sanity() {
    const auto& fs = base_functions();
    auto allowed = [](const BaseFunction& f) { return oracle::from_function(f.int_table()); };
    const auto& and2 = fs[1];
    const auto& xor3 = fs[4];
    const int dt_xor3 = oracle::optimal_dt_height(allowed(xor3), 3);
    const int pdt_xor3 = oracle::optimal_pdt_height(allowed(xor3), 3);
    const int dt_and2 = oracle::optimal_dt_height(allowed(and2), 2);
    bool pass = dt_xor3 == 3 && pdt_xor3 == 1 && dt_and2 == 2;
    for (const auto& f : fs)
        pass = pass && static_cast<int>(f.dt.height()) == oracle::optimal_dt_height(allowed(f), f.n);
    return {pass, "dt(XOR3)=" + std::to_string(dt_xor3) + " pdt(XOR3)=" + std::to_string(pdt_xor3) +
                      " dt(AND2)=" + std::to_string(dt_and2) + " fixture trees optimal=" + (pass ? "yes" : "no")};
}

}  // namespace

int main() {
    const auto fixtures = protocol_fixtures();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"counterexample-ind", [] { return counterexample_run(GadgetKind::Index); }},
        {"all-one-tail", all_one_tail},
        {"binomial-median", binomial_medians},
        {"counterexample-ip", [] { return counterexample_run(GadgetKind::InnerProduct); }},
        {"simulation-correctness", simulation_correctness},
        {"query-bound", [&] { return query_bound(fixtures); }},
        {"potential-invariant", [&] { return potential_invariant(fixtures); }},
        {"size-lifting", [&] { return size_lifting(fixtures); }},
        {"resplus-pipeline", resplus_pipeline},
        {"f2-equivalence", f2_equivalence},
        {"entropy-agreement", entropy_agreement},
        {"oracle-sanity", oracle_sanity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        failed += out.pass ? 0 : 1;
        std::printf("%s %2zu %-24s %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    out.detail.c_str());
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
