#pragma once

#include "liftlab/bitvec.hpp"
#include "liftlab/decision_tree.hpp"
#include "liftlab/f2_linalg.hpp"
#include "liftlab/guard.hpp"
#include "liftlab/layout.hpp"
#include "liftlab/protocol.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace liftlab {

/// A CNF over variables 1..vars in DIMACS literal convention. Clause k is
/// named by `names[k]`, by default its 1-based position.
struct Cnf {
    std::uint32_t vars = 0;
    std::vector<std::vector<int>> clauses;
    std::vector<std::string> names;

    /// Removes repeated literals (first occurrence kept), fills default names
    /// and checks ranges. Throws InvalidArgument for a formula without clauses.
    static Cnf make(std::uint32_t vars, std::vector<std::vector<int>> clauses, std::vector<std::string> names = {});

    static Cnf parse_dimacs(std::istream& in);
    static Cnf parse_dimacs(const std::string& text);
    void write_dimacs(std::ostream& out) const;
    [[nodiscard]] std::string to_dimacs() const;

    /// Bit v-1 of the assignment is variable v.
    [[nodiscard]] bool falsifies(const BitVec& assignment, std::size_t clause) const;
    [[nodiscard]] std::vector<std::size_t> falsified(const BitVec& assignment) const;
    [[nodiscard]] std::optional<std::size_t> find(const std::string& name) const;
};

/// Exhaustive satisfiability test; guarded at 2^24 assignments.
bool satisfiable(const Cnf& cnf, const Guard& guard = {});

/// The search problem of `cnf` lifted with IND_m: the allowed outputs at z are
/// the names of the clauses z falsifies.
LiftedProblem search_problem(const Cnf& cnf, std::uint32_t m);

/// phi composed with IND_m^N, m = 2^ell. Base clause k of width w yields m^w
/// clauses, one per tuple (j_1, ..., j_w) in lexicographic order; the clause
/// for a tuple lists, for each base literal in order, the ell x-bit literals
/// that are false exactly when x encodes j_t, and then the y literals.
struct LiftedCnf {
    Cnf base;
    LiftedLayout layout;
    Cnf cnf;
    std::vector<std::size_t> clause_map;             ///< lifted clause -> base clause
    std::vector<std::vector<std::uint32_t>> tuples;  ///< pointer values per lifted clause

    /// "x i j' -> v" and "y i j -> v" lines, i and v 1-based.
    void write_map(std::ostream& out) const;
    /// Base clause name for a lifted clause name.
    [[nodiscard]] std::string base_label(const std::string& lifted_name) const;
};

LiftedCnf lift_cnf(const Cnf& phi, std::uint32_t m, std::uint64_t max_clauses = 10'000'000);

/// An affine subspace of F_2^vars given by equations; empty when they are inconsistent.
class Subspace {
public:
    explicit Subspace(std::size_t width = 0) : sys_(width) {}

    /// Adds an equation; returns false if the subspace became (or was) empty.
    bool add(const f2::ParityEq& e);

    [[nodiscard]] std::size_t width() const noexcept { return sys_.width(); }
    [[nodiscard]] bool empty() const noexcept { return empty_; }
    [[nodiscard]] bool full() const noexcept { return !empty_ && sys_.empty(); }
    [[nodiscard]] const f2::AffineSystem& system() const noexcept { return sys_; }

    [[nodiscard]] bool contains(const BitVec& point) const;
    /// Every point of *this lies in `other`.
    [[nodiscard]] bool subset_of(const Subspace& other) const;
    friend bool operator==(const Subspace& a, const Subspace& b) { return a.subset_of(b) && b.subset_of(a); }

private:
    f2::AffineSystem sys_;
    bool empty_ = false;
};

/// One equation of a line's falsifying subspace: parity of `vars` equals `rhs`.
struct ParityLiteral {
    std::vector<std::uint32_t> vars;  ///< 0-based, sorted, distinct
    bool rhs = false;

    friend bool operator==(const ParityLiteral&, const ParityLiteral&) = default;
};

struct ProofLine {
    enum class Kind { Axiom, Infer };

    std::uint32_t id = 0;
    Kind kind = Kind::Axiom;
    std::size_t clause = 0;           ///< Axiom: 0-based clause index
    std::size_t parent[2] = {0, 0};   ///< Infer: 0-based positions of earlier lines
    std::vector<ParityLiteral> eqs;   ///< defining equations of the falsifying subspace

    friend bool operator==(const ProofLine& a, const ProofLine& b) {
        return a.id == b.id && a.kind == b.kind && a.clause == b.clause && a.parent[0] == b.parent[0] &&
               a.parent[1] == b.parent[1] && a.eqs == b.eqs;
    }
};

/// A Res(+) refutation: the last line must be the whole space.
struct ResPlusProof {
    std::uint32_t vars = 0;
    std::vector<ProofLine> lines;

    /// Each line is a parent at most once.
    [[nodiscard]] bool tree_like() const;
    /// Tree-like and every equation mentions a single variable.
    [[nodiscard]] bool is_tree_resolution() const;

    /// "L <id> AXIOM <clause> ; [v.. = b]..." / "L <id> INFER <id1> <id2> ; ...".
    void write(std::ostream& out, const Cnf& cnf) const;
    [[nodiscard]] std::string to_string(const Cnf& cnf) const;
    static ResPlusProof parse(std::istream& in, const Cnf& cnf);
    static ResPlusProof parse(const std::string& text, const Cnf& cnf);

    friend bool operator==(const ResPlusProof&, const ResPlusProof&) = default;
};

Subspace subspace_of(std::size_t width, const std::vector<ParityLiteral>& eqs);
/// Assignments falsifying clause k: each literal set false.
Subspace clause_cube(const Cnf& cnf, std::size_t clause);

struct Verdict {
    bool accepted = false;
    std::optional<std::size_t> failing_line;  ///< 0-based position (proofs) or leaf node (trees)
    std::string reason;
    std::optional<BitVec> witness;            ///< bit v-1 is variable v
};

/// Whether C is contained in A u B, decided algebraically inside C.
bool containment_CsubAuB(const Subspace& c, const Subspace& a, const Subspace& b);

/// Lexicographically first point (variable 1 most significant) of C outside
/// A u B, or none; guarded at 2^24 points.
std::optional<BitVec> uncovered_point(const Subspace& c, const Subspace& a, const Subspace& b, const Guard& guard = {});

/// Checks a Res(+) refutation of `cnf` semantically. Throws MalformedProof for
/// dangling references or out-of-range variables.
Verdict check_resplus(const Cnf& cnf, const ResPlusProof& proof, bool require_tree = false, const Guard& guard = {});

/// Every assignment reaches a leaf naming a clause it falsifies (exhaustive, guarded at 2^24).
Verdict pdt_solves_search(const ParityDecisionTree& t, const Cnf& cnf, const Guard& guard = {});

/// Path subspace of every node: lines are emitted children first, so the proof
/// has one line per tree node. For a query forced on its path the reachable
/// child is listed as the first parent. With `validate`, throws SourceInvalid
/// unless each leaf's path lies inside its clause's cube.
ResPlusProof pdt_to_resplus(const ParityDecisionTree& t, const Cnf& cnf, bool validate = true);

/// The tree whose node for line C queries the parity separating its parents
/// inside C (a constant query when one parent already covers C). Throws
/// SourceInvalid for proofs that are rejected or not tree-like.
ParityDecisionTree resplus_to_pdt(const ResPlusProof& proof, const Cnf& cnf);

/// Reduces every query modulo its path subspace in reduced echelon form,
/// orienting children by the reduced parity; forced queries become empty with
/// the reachable child first. Trees equal under this map reach the same
/// leaves on every assignment by the same paths.
ParityDecisionTree canonical_pdt(const ParityDecisionTree& t);

}  // namespace liftlab
