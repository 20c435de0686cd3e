#include "liftlab/decision_tree.hpp"

#include "liftlab/error.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace liftlab {

namespace {

std::vector<std::string> content_lines(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(first, last - first + 1));
    }
    return out;
}

std::uint32_t parse_index(const std::string& tok, std::uint32_t limit, const std::string& what) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size() || v < 1 || v > limit)
        throw Error(Errc::ParseError, what + " '" + tok + "' is not in 1.." + std::to_string(limit));
    return static_cast<std::uint32_t>(v - 1);
}

}  // namespace

QueryTree QueryTree::leaf(Kind kind, std::uint32_t vars, std::string label) {
    QueryTree t(kind, vars);
    Node n;
    n.label = std::move(label);
    t.nodes_.push_back(std::move(n));
    return t;
}

QueryTree QueryTree::branch(std::vector<std::uint32_t> query, QueryTree zero, QueryTree one) {
    if (zero.kind_ != one.kind_ || zero.vars_ != one.vars_)
        throw Error(Errc::ShapeMismatch, "subtrees disagree on kind or variable count");
    std::sort(query.begin(), query.end());
    QueryTree t(zero.kind_, zero.vars_);
    Node root;
    root.leaf = false;
    root.query = std::move(query);
    t.nodes_.push_back(root);
    t.nodes_[0].child[0] = 1;
    t.append(zero);
    t.nodes_[0].child[1] = static_cast<std::uint32_t>(t.nodes_.size());
    t.append(one);
    return t;
}

void QueryTree::append(const QueryTree& sub) {
    const auto offset = static_cast<std::uint32_t>(nodes_.size());
    for (auto n : sub.nodes_) {
        if (!n.leaf) {
            n.child[0] += offset;
            n.child[1] += offset;
        }
        nodes_.push_back(std::move(n));
    }
}

std::size_t QueryTree::leaves() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; }));
}

std::size_t QueryTree::height() const {
    if (nodes_.empty()) return 0;
    std::vector<std::size_t> h(nodes_.size(), 0);
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        const auto& n = nodes_[i];
        if (!n.leaf) h[i] = 1 + std::max(h[n.child[0]], h[n.child[1]]);
    }
    return h[0];
}

std::vector<std::size_t> QueryTree::leaf_counts() const {
    std::vector<std::size_t> c(nodes_.size(), 1);
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        const auto& n = nodes_[i];
        if (!n.leaf) c[i] = c[n.child[0]] + c[n.child[1]];
    }
    return c;
}

std::uint32_t QueryTree::walk(const BitVec& assignment) const {
    if (nodes_.empty()) throw Error(Errc::ShapeMismatch, "empty tree");
    if (assignment.size() != vars_) throw Error(Errc::ShapeMismatch, "assignment has wrong length");
    std::uint32_t v = 0;
    while (!nodes_[v].leaf) {
        bool bit = false;
        for (auto q : nodes_[v].query) bit ^= assignment.test(q);
        v = nodes_[v].child[bit ? 1 : 0];
    }
    return v;
}

const std::string& QueryTree::evaluate(const BitVec& assignment) const { return nodes_[walk(assignment)].label; }

const std::string& QueryTree::evaluate(std::uint64_t assignment) const {
    if (vars_ > 64) throw Error(Errc::ShapeMismatch, "word evaluation needs at most 64 variables");
    std::uint32_t v = 0;
    while (!nodes_[v].leaf) {
        bool bit = false;
        for (auto q : nodes_[v].query) bit ^= (assignment >> q) & 1U;
        v = nodes_[v].child[bit ? 1 : 0];
    }
    return nodes_[v].label;
}

void QueryTree::validate() const {
    if (nodes_.empty()) throw Error(Errc::ShapeMismatch, "empty tree");
    // Pre-order layout: child 0 directly follows its parent and child 1 follows child 0's subtree.
    std::function<std::uint32_t(std::uint32_t)> end_of = [&](std::uint32_t v) -> std::uint32_t {
        const auto& n = nodes_.at(v);
        if (n.leaf) {
            if (n.label.empty() || n.label.find_first_of(" \t\r\n") != std::string::npos)
                throw Error(Errc::ShapeMismatch, "leaf labels must be non-empty words");
            return v + 1;
        }
        if (kind_ == Kind::Plain && n.query.size() != 1)
            throw Error(Errc::ShapeMismatch, "plain decision tree nodes query exactly one variable");
        for (std::size_t k = 0; k < n.query.size(); ++k) {
            if (n.query[k] >= vars_) throw Error(Errc::ShapeMismatch, "query variable out of range");
            if (k > 0 && n.query[k] <= n.query[k - 1])
                throw Error(Errc::ShapeMismatch, "query variables must be sorted and distinct");
        }
        if (n.child[0] != v + 1) throw Error(Errc::ShapeMismatch, "nodes are not in pre-order");
        const auto mid = end_of(n.child[0]);
        if (n.child[1] != mid) throw Error(Errc::ShapeMismatch, "nodes are not in pre-order");
        return end_of(n.child[1]);
    };
    if (end_of(0) != nodes_.size()) throw Error(Errc::ShapeMismatch, "unreachable nodes in tree");
}

void QueryTree::write(std::ostream& out) const {
    out << (kind_ == Kind::Plain ? "DT " : "PDT ") << vars_ << '\n';
    for (const auto& n : nodes_) {
        if (n.leaf) {
            out << "LEAF " << n.label << '\n';
        } else if (kind_ == Kind::Plain) {
            out << "Q " << n.query[0] + 1 << '\n';
        } else {
            out << "QP";
            for (auto q : n.query) out << ' ' << q + 1;
            out << '\n';
        }
    }
}

std::string QueryTree::to_string() const {
    std::ostringstream s;
    write(s);
    return s.str();
}

QueryTree QueryTree::parse(std::istream& in) {
    const auto lines = content_lines(in);
    if (lines.empty()) throw Error(Errc::ParseError, "missing tree header");
    std::istringstream head(lines[0]);
    std::string tag;
    std::string count;
    std::string extra;
    head >> tag >> count;
    if ((tag != "DT" && tag != "PDT") || count.empty() || (head >> extra))
        throw Error(Errc::ParseError, "expected header 'DT <vars>' or 'PDT <vars>'");
    const auto vars = parse_index(count, 1u << 30, "variable count") + 1;
    QueryTree t(tag == "DT" ? Kind::Plain : Kind::Parity, vars);

    std::size_t pos = 1;
    std::function<void()> read = [&]() {
        if (pos >= lines.size()) throw Error(Errc::ParseError, "tree ends before every subtree is complete");
        std::istringstream ls(lines[pos]);
        const std::size_t line_no = pos++;
        std::string op;
        ls >> op;
        const auto id = static_cast<std::uint32_t>(t.nodes_.size());
        Node n;
        if (op == "LEAF") {
            if (!(ls >> n.label) || (ls >> extra))
                throw Error(Errc::ParseError, "line " + std::to_string(line_no + 1) + ": expected 'LEAF <label>'");
            t.nodes_.push_back(std::move(n));
            return;
        }
        if (op == "Q" && t.kind_ == Kind::Plain) {
            std::string v;
            if (!(ls >> v) || (ls >> extra))
                throw Error(Errc::ParseError, "line " + std::to_string(line_no + 1) + ": expected 'Q <var>'");
            n.query.push_back(parse_index(v, vars, "variable"));
        } else if (op == "QP" && t.kind_ == Kind::Parity) {
            std::string v;
            while (ls >> v) n.query.push_back(parse_index(v, vars, "variable"));
            std::sort(n.query.begin(), n.query.end());
            // Repeated variables cancel in a parity.
            std::vector<std::uint32_t> odd;
            for (std::size_t k = 0; k < n.query.size();) {
                std::size_t e = k;
                while (e < n.query.size() && n.query[e] == n.query[k]) ++e;
                if ((e - k) % 2 == 1) odd.push_back(n.query[k]);
                k = e;
            }
            n.query = std::move(odd);
        } else {
            throw Error(Errc::ParseError, "line " + std::to_string(line_no + 1) + ": unexpected '" + op + "'");
        }
        n.leaf = false;
        t.nodes_.push_back(std::move(n));
        t.nodes_[id].child[0] = static_cast<std::uint32_t>(t.nodes_.size());
        read();
        t.nodes_[id].child[1] = static_cast<std::uint32_t>(t.nodes_.size());
        read();
    };
    read();
    if (pos != lines.size()) throw Error(Errc::ParseError, "trailing lines after the tree");
    return t;
}

QueryTree QueryTree::parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

}  // namespace liftlab
