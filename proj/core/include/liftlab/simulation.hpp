#pragma once

#include "liftlab/bigint.hpp"
#include "liftlab/decision_tree.hpp"
#include "liftlab/entropy.hpp"
#include "liftlab/f2_linalg.hpp"
#include "liftlab/guard.hpp"
#include "liftlab/protocol.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace liftlab::sim {

/// StarParity: Alice keeps the larger half of X and Bob's new dependent
/// coordinate (i*, j*) removes x_{i*} = j* from X.
/// ParityParity: Alice's balanced parities follow the smaller protocol subtree
/// and Bob's step instead fixes one unconstrained bit of x_{i*} to differ from
/// j*, so X stays an affine subspace.
enum class Mode { StarParity, ParityParity };

std::string_view to_string(Mode mode) noexcept;
Mode parse_mode(std::string_view text);

enum class Rule { SpanForced, BobEquation, AliceSplit, AliceIrrelevant, Restore, Leaf };

std::string_view to_string(Rule rule) noexcept;

struct TraceStep {
    std::uint32_t node = 0;              ///< protocol / tree node id where the step happened
    int bit = -1;                        ///< branch taken, -1 for restore and leaf records
    Rule rule = Rule::Leaf;
    std::vector<std::uint32_t> queried;  ///< blocks queried by a restore, 0-based
    double potential = 0.0;              ///< D_inf(X_{[N] \ I}) after the step
    unsigned alice = 0;                  ///< A after the step
    unsigned bob = 0;                    ///< B after the step
    std::size_t fixed = 0;               ///< |I| after the step
    unsigned path_bits = 0;              ///< every bit sent so far, including forced ones
};

struct SimTrace {
    std::vector<TraceStep> steps;

    /// Tab-separated, one header line then one record per step; blocks 1-based.
    void write_tsv(std::ostream& out) const;
};

/// The simulator's state at a loop head.
struct SimState {
    PointerSet x;
    f2::CoordSpace space;
    f2::AffineSystem e;
    std::vector<bool> fixed;            ///< I as a membership vector
    std::vector<int> rho;               ///< -1 = unset, else the queried bit
    std::vector<std::uint32_t> alpha;   ///< pointer value on fixed blocks
    std::uint32_t node = 0;
    unsigned alice = 0;
    unsigned bob = 0;
    unsigned path_bits = 0;
    Rational tau{1, 2};

    SimState(std::uint32_t blocks, std::uint32_t m, std::uint32_t x_bits = 0);

    [[nodiscard]] std::uint32_t blocks() const noexcept { return x.blocks(); }
    [[nodiscard]] std::uint32_t m() const noexcept { return x.alphabet(); }
    [[nodiscard]] std::vector<std::uint32_t> fixed_blocks() const;
    [[nodiscard]] std::size_t fixed_count() const;
};

/// D_inf(X_{[N] \ I}) of the uniform distribution on X.
double potential(const SimState& s);

/// Exact D_inf(X_{[N] \ I}) <= A + B - (1 - tau)|I| log2 m for tau = 1/2.
bool potential_bound_holds(const SimState& s);

/// Exact (1 - tau)|I| log2 m <= A + B for tau = 1/2.
bool query_bound_holds(std::size_t queried, unsigned bits, std::uint32_t m);

/// Names of violated invariants among "a".."e" plus "nonempty"; empty when all hold.
std::vector<std::string> invariant_violations(const SimState& s);

/// An (x, y) in X x Y with IND_m^N(x, y) = z, for any z agreeing with rho on I.
/// For states over x-bits and y-coordinates, y is built from the combined system.
std::pair<AliceInput, BobInput> leaf_witness(const SimState& s, std::uint64_t z);

using Oracle = std::function<bool(std::uint32_t block)>;

struct Options {
    Mode mode = Mode::StarParity;
    /// Check every invariant, the potential bound and the leaf witness at each
    /// loop head; any failure throws EmptyState.
    bool check_invariants = false;
    Guard guard;
    std::function<void(const SimState&)> on_loop_head;
};

struct Result {
    std::string label;
    std::uint32_t leaf = 0;
    std::vector<std::uint32_t> queried;  ///< in query order, 0-based
    unsigned alice = 0;
    unsigned bob = 0;
    unsigned path_bits = 0;
    SimTrace trace;

    [[nodiscard]] unsigned span_bits() const noexcept { return alice + bob; }
};

/// Fixes the maximal low-rate block set I' to its most likely value, queries
/// z on I' (ascending) and adds y_{i, alpha_i} = z_i for each. Returns I'.
std::vector<std::uint32_t> restore(SimState& s, const Oracle& z, const Guard& guard = {});

/// Runs the simulation of P against the query oracle z.
Result simulate(const ProtocolTree& p, const Oracle& z, const Options& opts = {});
Result simulate(const ProtocolTree& p, std::uint64_t z, const Options& opts = {});

/// Decision tree whose paths are the simulation's query sequences; answers
/// are explored 0 before 1 and nodes are numbered in pre-order.
DecisionTree extract_decision_tree(const ProtocolTree& p, const Options& opts = {});

struct PdtOptions {
    bool check_invariants = false;
    Guard guard;
    /// Maps each leaf label of the parity tree to the output label, e.g. a
    /// lifted clause name to its base clause. Identity when empty.
    std::function<std::string(const std::string&)> relabel;
    std::function<void(const SimState&)> on_loop_head;
};

/// Simulation of a parity decision tree over the lifted layout of (N, m)
/// against the oracle z; the state keeps one system over x-bits and y-coordinates.
Result pdt_run(const ParityDecisionTree& t, std::uint32_t m, std::uint32_t blocks, const Oracle& z,
               const PdtOptions& opts = {});

/// Ordinary decision tree over z extracted from pdt_run by exploring both answers.
DecisionTree pdt_simulate(const ParityDecisionTree& t, std::uint32_t m, std::uint32_t blocks,
                          const PdtOptions& opts = {});

}  // namespace liftlab::sim
