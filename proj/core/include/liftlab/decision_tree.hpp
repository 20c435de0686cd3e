#pragma once

#include "liftlab/bitvec.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace liftlab {

/// A decision tree (single-variable queries) or parity decision tree over
/// variables 0..vars-1. Nodes are stored in pre-order, child 0 subtree first,
/// so node 0 is the root.
class QueryTree {
public:
    enum class Kind { Plain, Parity };

    struct Node {
        bool leaf = true;
        std::vector<std::uint32_t> query;  ///< sorted variable ids; the node reads their parity
        std::string label;                 ///< leaves only
        std::uint32_t child[2] = {0, 0};
    };

    QueryTree() = default;
    QueryTree(Kind kind, std::uint32_t vars) : kind_(kind), vars_(vars) {}

    static QueryTree leaf(Kind kind, std::uint32_t vars, std::string label);
    /// Query node on top of two subtrees (both over the same variables).
    static QueryTree branch(std::vector<std::uint32_t> query, QueryTree zero, QueryTree one);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::uint32_t vars() const noexcept { return vars_; }
    [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const Node& node(std::uint32_t id) const { return nodes_.at(id); }
    [[nodiscard]] bool empty() const noexcept { return nodes_.empty(); }

    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t leaves() const;
    [[nodiscard]] std::size_t height() const;
    /// Leaves below each node, indexed by node id.
    [[nodiscard]] std::vector<std::size_t> leaf_counts() const;

    /// Leaf id reached by the assignment (bit v = variable v).
    [[nodiscard]] std::uint32_t walk(const BitVec& assignment) const;
    [[nodiscard]] const std::string& evaluate(const BitVec& assignment) const;
    /// Same, with variable v read from bit v of a word (vars <= 64).
    [[nodiscard]] const std::string& evaluate(std::uint64_t assignment) const;

    /// Replaces every leaf label through `relabel`.
    template <class F>
    [[nodiscard]] QueryTree map_labels(F relabel) const {
        QueryTree t = *this;
        for (auto& n : t.nodes_)
            if (n.leaf) n.label = relabel(n.label);
        return t;
    }

    void validate() const;

    /// Text form: header "DT <vars>" or "PDT <vars>", then one line per node
    /// in pre-order: "Q <v>" / "QP <v>..." with 1-based variables, or "LEAF <label>".
    void write(std::ostream& out) const;
    [[nodiscard]] std::string to_string() const;
    static QueryTree parse(std::istream& in);
    static QueryTree parse(const std::string& text);

    friend bool operator==(const QueryTree& a, const QueryTree& b);

private:
    void append(const QueryTree& sub);

    Kind kind_ = Kind::Plain;
    std::uint32_t vars_ = 0;
    std::vector<Node> nodes_;
};

inline bool operator==(const QueryTree::Node& a, const QueryTree::Node& b) {
    return a.leaf == b.leaf && a.query == b.query && a.label == b.label && a.child[0] == b.child[0] &&
           a.child[1] == b.child[1];
}

inline bool operator==(const QueryTree& a, const QueryTree& b) {
    return a.kind_ == b.kind_ && a.vars_ == b.vars_ && a.nodes_ == b.nodes_;
}

using DecisionTree = QueryTree;
using ParityDecisionTree = QueryTree;

}  // namespace liftlab
