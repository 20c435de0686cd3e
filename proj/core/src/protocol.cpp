#include "liftlab/protocol.hpp"

#include "liftlab/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace liftlab {

namespace {

std::vector<std::string> content_lines(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(line);
    }
    return out;
}

std::uint64_t parse_uint(const std::string& tok, const std::string& what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (tok.empty() || used != tok.size() || tok[0] == '-' || tok[0] == '+')
        throw Error(Errc::ParseError, "bad " + what + " '" + tok + "'");
    return v;
}

/// "i:j" with 1-based block i.
f2::Coord parse_coord(const std::string& tok, f2::Side side) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw Error(Errc::ParseError, "expected 'block:position', got '" + tok + "'");
    const auto block = parse_uint(tok.substr(0, colon), "block");
    const auto pos = parse_uint(tok.substr(colon + 1), "position");
    if (block == 0) throw Error(Errc::ParseError, "blocks are numbered from 1 in '" + tok + "'");
    return {side, static_cast<std::uint32_t>(block - 1), static_cast<std::uint32_t>(pos)};
}

std::vector<f2::Coord> canonical_support(std::vector<f2::Coord> s) {
    std::sort(s.begin(), s.end());
    std::vector<f2::Coord> out;
    for (std::size_t k = 0; k < s.size();) {
        std::size_t e = k;
        while (e < s.size() && s[e] == s[k]) ++e;
        if ((e - k) % 2 == 1) out.push_back(s[k]);
        k = e;
    }
    return out;
}

std::string line_tag(std::size_t line_no) { return "line " + std::to_string(line_no + 1) + ": "; }

}  // namespace

std::string_view to_string(ProtocolKind kind) noexcept {
    return kind == ProtocolKind::StarParity ? "star-parity" : "parity-parity";
}

ProtocolKind parse_protocol_kind(std::string_view text) {
    if (text == "star-parity") return ProtocolKind::StarParity;
    if (text == "parity-parity") return ProtocolKind::ParityParity;
    throw Error(Errc::ParseError, "protocol kind must be star-parity or parity-parity, got '" + std::string(text) + "'");
}

ProtocolTree::ProtocolTree(std::uint32_t blocks, std::uint32_t m, ProtocolKind kind)
    : blocks_(blocks), m_(m), kind_(kind) {
    if (blocks == 0 || blocks > 64) throw Error(Errc::InvalidArgument, "protocol needs 1 <= N <= 64");
    if (m < 2 || m > 63) throw Error(Errc::InvalidArgument, "protocol needs 2 <= m <= 63");
    if (kind == ProtocolKind::ParityParity && !std::has_single_bit(m))
        throw Error(Errc::NotPowerOfTwo, "parity-parity protocols need m a power of two, got m = " + std::to_string(m));
}

std::uint32_t ProtocolTree::x_bits() const noexcept {
    return std::has_single_bit(m_) ? static_cast<std::uint32_t>(std::countr_zero(m_)) : 0;
}

ProtocolTree ProtocolTree::leaf(std::uint32_t blocks, std::uint32_t m, ProtocolKind kind, std::string label) {
    ProtocolTree t(blocks, m, kind);
    ProtocolNode n;
    n.label = std::move(label);
    t.nodes_.push_back(std::move(n));
    return t;
}

void ProtocolTree::append(const ProtocolTree& sub) {
    const auto offset = static_cast<std::uint32_t>(nodes_.size());
    for (auto n : sub.nodes_) {
        if (!n.leaf()) {
            n.child[0] += offset;
            n.child[1] += offset;
        }
        nodes_.push_back(std::move(n));
    }
}

ProtocolTree ProtocolTree::join(ProtocolNode root, ProtocolTree zero, ProtocolTree one) {
    if (zero.blocks_ != one.blocks_ || zero.m_ != one.m_ || zero.kind_ != one.kind_)
        throw Error(Errc::ShapeMismatch, "subprotocols disagree on N, m or kind");
    ProtocolTree t(zero.blocks_, zero.m_, zero.kind_);
    t.nodes_.push_back(std::move(root));
    t.nodes_[0].child[0] = 1;
    t.append(zero);
    t.nodes_[0].child[1] = static_cast<std::uint32_t>(t.nodes_.size());
    t.append(one);
    t.renumber();
    return t;
}

ProtocolTree ProtocolTree::alice_split(PointerSet zero_part, ProtocolTree zero, ProtocolTree one) {
    ProtocolNode n;
    n.type = ProtocolNode::Type::AliceSplit;
    n.zero_part = std::move(zero_part);
    auto t = join(std::move(n), std::move(zero), std::move(one));
    t.validate();
    return t;
}

ProtocolTree ProtocolTree::alice_parity(std::vector<f2::Coord> x_bits, ProtocolTree zero, ProtocolTree one) {
    ProtocolNode n;
    n.type = ProtocolNode::Type::AliceParity;
    for (auto& c : x_bits) c.side = f2::Side::X;
    n.support = canonical_support(std::move(x_bits));
    auto t = join(std::move(n), std::move(zero), std::move(one));
    t.validate();
    return t;
}

ProtocolTree ProtocolTree::bob_parity(std::vector<f2::Coord> y_coords, ProtocolTree zero, ProtocolTree one) {
    ProtocolNode n;
    n.type = ProtocolNode::Type::BobParity;
    for (auto& c : y_coords) c.side = f2::Side::Y;
    n.support = canonical_support(std::move(y_coords));
    auto t = join(std::move(n), std::move(zero), std::move(one));
    t.validate();
    return t;
}

std::size_t ProtocolTree::leaves() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const ProtocolNode& n) { return n.leaf(); }));
}

std::size_t ProtocolTree::depth() const {
    std::vector<std::size_t> h(nodes_.size(), 0);
    for (std::size_t i = nodes_.size(); i-- > 0;)
        if (!nodes_[i].leaf()) h[i] = 1 + std::max(h[nodes_[i].child[0]], h[nodes_[i].child[1]]);
    return nodes_.empty() ? 0 : h[0];
}

std::vector<std::size_t> ProtocolTree::leaf_counts() const {
    std::vector<std::size_t> c(nodes_.size(), 1);
    for (std::size_t i = nodes_.size(); i-- > 0;)
        if (!nodes_[i].leaf()) c[i] = c[nodes_[i].child[0]] + c[nodes_[i].child[1]];
    return c;
}

bool ProtocolTree::message(std::uint32_t v, std::span<const std::uint32_t> x, std::span<const std::uint64_t> y) const {
    const auto& n = nodes_.at(v);
    switch (n.type) {
        case ProtocolNode::Type::AliceSplit: return !n.zero_part->contains(x);
        case ProtocolNode::Type::AliceParity: {
            bool bit = false;
            for (const auto& c : n.support) bit ^= (x[c.block] >> c.position) & 1U;
            return bit;
        }
        case ProtocolNode::Type::BobParity: {
            bool bit = false;
            for (const auto& c : n.support) bit ^= (y[c.block] >> c.position) & 1U;
            return bit;
        }
        case ProtocolNode::Type::Leaf: break;
    }
    throw Error(Errc::InvalidArgument, "leaves send no message");
}

ProtocolTree::Outcome ProtocolTree::evaluate(std::span<const std::uint32_t> x, std::span<const std::uint64_t> y) const {
    if (x.size() != blocks_ || y.size() != blocks_) throw Error(Errc::ShapeMismatch, "input has wrong block count");
    const std::uint64_t ymask = (std::uint64_t{1} << m_) - 1;
    for (std::uint32_t i = 0; i < blocks_; ++i) {
        if (x[i] >= m_) throw Error(Errc::ShapeMismatch, "x block out of range");
        if (y[i] & ~ymask) throw Error(Errc::ShapeMismatch, "y block out of range");
    }
    Outcome out;
    std::uint32_t v = 0;
    while (!nodes_[v].leaf()) {
        const bool b = message(v, x, y);
        out.transcript.push_back(b ? '1' : '0');
        v = nodes_[v].child[b ? 1 : 0];
    }
    out.label = nodes_[v].label;
    out.leaf = v;
    return out;
}

void ProtocolTree::renumber() {
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) nodes_[i].id = i;
}

void ProtocolTree::validate() const {
    if (nodes_.empty()) throw Error(Errc::ShapeMismatch, "empty protocol");
    std::set<std::uint32_t> ids;
    for (const auto& n : nodes_) {
        if (!ids.insert(n.id).second) throw Error(Errc::ShapeMismatch, "duplicate node id " + std::to_string(n.id));
        switch (n.type) {
            case ProtocolNode::Type::Leaf:
                if (n.label.empty() || n.label.find_first_of(" \t\r\n") != std::string::npos)
                    throw Error(Errc::ShapeMismatch, "leaf labels must be non-empty words");
                break;
            case ProtocolNode::Type::AliceSplit:
                if (kind_ == ProtocolKind::ParityParity)
                    throw Error(Errc::ShapeMismatch, "parity-parity protocols cannot contain Alice partitions");
                if (!n.zero_part || n.zero_part->blocks() != blocks_ || n.zero_part->alphabet() != m_)
                    throw Error(Errc::ShapeMismatch, "Alice partition has the wrong shape");
                break;
            case ProtocolNode::Type::AliceParity:
                if (x_bits() == 0) throw Error(Errc::NotPowerOfTwo, "Alice parities need m a power of two");
                for (const auto& c : n.support)
                    if (c.side != f2::Side::X || c.block >= blocks_ || c.position >= x_bits())
                        throw Error(Errc::ShapeMismatch, "Alice parity bit out of range");
                break;
            case ProtocolNode::Type::BobParity:
                for (const auto& c : n.support)
                    if (c.side != f2::Side::Y || c.block >= blocks_ || c.position >= m_)
                        throw Error(Errc::ShapeMismatch, "Bob parity coordinate out of range");
                break;
        }
    }
    std::function<std::uint32_t(std::uint32_t)> end_of = [&](std::uint32_t v) -> std::uint32_t {
        const auto& n = nodes_.at(v);
        if (n.leaf()) return v + 1;
        if (n.child[0] != v + 1) throw Error(Errc::ShapeMismatch, "nodes are not in pre-order");
        const auto mid = end_of(n.child[0]);
        if (n.child[1] != mid) throw Error(Errc::ShapeMismatch, "nodes are not in pre-order");
        return end_of(n.child[1]);
    };
    if (end_of(0) != nodes_.size()) throw Error(Errc::ShapeMismatch, "unreachable protocol nodes");
}

void ProtocolTree::write(std::ostream& out) const {
    out << "PROTO " << blocks_ << ' ' << m_ << ' ' << liftlab::to_string(kind_) << '\n';
    for (const auto& n : nodes_) {
        switch (n.type) {
            case ProtocolNode::Type::Leaf: out << "LEAF " << n.id << ' ' << n.label; break;
            case ProtocolNode::Type::AliceSplit:
                out << "A0 " << n.id;
                for (std::size_t k = 0; k < n.zero_part->size(); ++k) {
                    out << ' ';
                    for (std::uint32_t i = 0; i < blocks_; ++i) out << (i ? "," : "") << n.zero_part->value(k, i);
                }
                break;
            case ProtocolNode::Type::AliceParity:
            case ProtocolNode::Type::BobParity:
                out << (n.type == ProtocolNode::Type::AliceParity ? "AP " : "BP ") << n.id;
                for (const auto& c : n.support) out << ' ' << c.block + 1 << ':' << c.position;
                break;
        }
        out << '\n';
    }
}

std::string ProtocolTree::to_string() const {
    std::ostringstream s;
    write(s);
    return s.str();
}

ProtocolTree ProtocolTree::parse(std::istream& in) {
    const auto lines = content_lines(in);
    if (lines.empty()) throw Error(Errc::ParseError, "missing 'PROTO N m kind' header");
    std::istringstream head(lines[0]);
    std::string tag, n_tok, m_tok, kind_tok, extra;
    head >> tag >> n_tok >> m_tok >> kind_tok;
    if (tag != "PROTO" || kind_tok.empty() || (head >> extra))
        throw Error(Errc::ParseError, "expected header 'PROTO N m kind'");
    const auto blocks = static_cast<std::uint32_t>(parse_uint(n_tok, "N"));
    const auto m = static_cast<std::uint32_t>(parse_uint(m_tok, "m"));
    ProtocolTree t(blocks, m, parse_protocol_kind(kind_tok));

    std::size_t pos = 1;
    std::function<void()> read = [&]() {
        if (pos >= lines.size()) throw Error(Errc::ParseError, "protocol ends before every subtree is complete");
        const std::size_t line_no = pos++;
        std::istringstream ls(lines[line_no]);
        std::string op, id_tok;
        ls >> op >> id_tok;
        if (id_tok.empty()) throw Error(Errc::ParseError, line_tag(line_no) + "missing node id");
        ProtocolNode n;
        n.id = static_cast<std::uint32_t>(parse_uint(id_tok, "node id"));
        std::string tok;
        if (op == "LEAF") {
            if (!(ls >> n.label) || (ls >> extra))
                throw Error(Errc::ParseError, line_tag(line_no) + "expected 'LEAF <id> <label>'");
            t.nodes_.push_back(std::move(n));
            return;
        }
        if (op == "A0") {
            n.type = ProtocolNode::Type::AliceSplit;
            std::vector<Pointer> members;
            while (ls >> tok) {
                Pointer p;
                std::stringstream parts(tok);
                std::string v;
                while (std::getline(parts, v, ',')) {
                    const auto value = parse_uint(v, "x value");
                    if (value >= m) throw Error(Errc::ParseError, line_tag(line_no) + "x value out of range in '" + tok + "'");
                    p.push_back(static_cast<std::uint32_t>(value));
                }
                if (p.size() != blocks)
                    throw Error(Errc::ParseError, line_tag(line_no) + "member '" + tok + "' needs N values");
                members.push_back(std::move(p));
            }
            n.zero_part = PointerSet(blocks, m, members);
        } else if (op == "AP" || op == "BP") {
            n.type = op == "AP" ? ProtocolNode::Type::AliceParity : ProtocolNode::Type::BobParity;
            std::vector<f2::Coord> support;
            while (ls >> tok) support.push_back(parse_coord(tok, op == "AP" ? f2::Side::X : f2::Side::Y));
            n.support = canonical_support(std::move(support));
        } else {
            throw Error(Errc::ParseError, line_tag(line_no) + "unknown node type '" + op + "'");
        }
        const auto id = static_cast<std::uint32_t>(t.nodes_.size());
        t.nodes_.push_back(std::move(n));
        t.nodes_[id].child[0] = static_cast<std::uint32_t>(t.nodes_.size());
        read();
        t.nodes_[id].child[1] = static_cast<std::uint32_t>(t.nodes_.size());
        read();
    };
    read();
    if (pos != lines.size()) throw Error(Errc::ParseError, "trailing lines after the protocol tree");
    try {
        t.validate();
    } catch (const Error& e) {
        throw Error(Errc::ParseError, e.what());
    }
    return t;
}

ProtocolTree ProtocolTree::parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

LiftedProblem LiftedProblem::function(std::uint32_t blocks, std::uint32_t m, const std::vector<std::string>& table) {
    std::vector<std::vector<std::string>> allowed;
    allowed.reserve(table.size());
    for (const auto& v : table) allowed.push_back({v});
    return relation(blocks, m, std::move(allowed));
}

LiftedProblem LiftedProblem::boolean(std::uint32_t blocks, std::uint32_t m, const std::vector<bool>& table) {
    std::vector<std::string> t;
    t.reserve(table.size());
    for (bool b : table) t.emplace_back(b ? "1" : "0");
    return function(blocks, m, t);
}

LiftedProblem LiftedProblem::relation(std::uint32_t blocks, std::uint32_t m,
                                      std::vector<std::vector<std::string>> allowed) {
    if (blocks == 0 || blocks > 24) throw Error(Errc::InvalidArgument, "base problems need 1 <= N <= 24");
    if (allowed.size() != (std::size_t{1} << blocks))
        throw Error(Errc::ShapeMismatch, "table needs 2^N entries");
    for (auto& a : allowed) std::sort(a.begin(), a.end());
    return LiftedProblem{blocks, m, std::move(allowed)};
}

bool LiftedProblem::accepts(std::uint64_t z, const std::string& label) const {
    const auto& a = allowed.at(z);
    if (a.empty()) return label == kBottom;
    return std::binary_search(a.begin(), a.end(), label);
}

std::uint64_t index_outputs(std::span<const std::uint32_t> x, std::span<const std::uint64_t> y) {
    if (x.size() != y.size()) throw Error(Errc::ShapeMismatch, "x and y differ in block count");
    std::uint64_t z = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if ((y[i] >> x[i]) & 1U) z |= std::uint64_t{1} << i;
    return z;
}

std::optional<CounterexamplePair> check_correct(const ProtocolTree& p, const LiftedProblem& prob, const Guard& guard) {
    if (p.blocks() != prob.blocks || p.m() != prob.m)
        throw Error(Errc::ShapeMismatch, "protocol and problem disagree on N or m");
    const std::uint32_t n = p.blocks();
    const std::uint32_t m = p.m();
    guard.require("protocol correctness check", n * (std::log2(static_cast<double>(m)) + m), 24.0);
    const auto xs = PointerSet::full(n, m);
    const std::uint64_t ycount = std::uint64_t{1} << (n * m);
    const std::uint64_t field = (std::uint64_t{1} << m) - 1;
    BobInput y(n);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const auto x = xs.member(k);
        for (std::uint64_t packed = 0; packed < ycount; ++packed) {
            for (std::uint32_t i = 0; i < n; ++i) y[i] = (packed >> (i * m)) & field;
            auto out = p.evaluate(x, y);
            const auto z = index_outputs(x, y);
            if (!prob.accepts(z, out.label))
                return CounterexamplePair{x, y, z, std::move(out.label), std::move(out.transcript)};
        }
    }
    return std::nullopt;
}

ProtocolTree canonical_protocol(const LiftedProblem& prob, const DecisionTree& dt, ProtocolKind kind) {
    dt.validate();
    if (dt.kind() != QueryTree::Kind::Plain) throw Error(Errc::InvalidArgument, "canonical protocols need a plain decision tree");
    if (dt.vars() != prob.blocks) throw Error(Errc::ShapeMismatch, "decision tree arity differs from N");
    const std::uint32_t n = prob.blocks;
    const std::uint32_t m = prob.m;
    if (kind == ProtocolKind::ParityParity && !std::has_single_bit(m))
        throw Error(Errc::NotPowerOfTwo, "parity-parity canonical protocol needs m a power of two, got m = " +
                                             std::to_string(m));
    std::uint32_t bits = 0;
    while ((std::uint32_t{1} << bits) < m) ++bits;

    std::function<ProtocolTree(std::uint32_t)> convert = [&](std::uint32_t v) -> ProtocolTree {
        const auto& node = dt.node(v);
        if (node.leaf) return ProtocolTree::leaf(n, m, kind, node.label);
        const std::uint32_t i = node.query[0];
        // Alice sends bits of x_i from the most significant; `prefix` holds those sent so far.
        std::function<ProtocolTree(std::uint32_t, std::uint32_t)> announce = [&](std::uint32_t sent,
                                                                                   std::uint32_t prefix) {
            if (sent == bits) {
                if (prefix >= m) return ProtocolTree::leaf(n, m, kind, std::string(kBottom));
                return ProtocolTree::bob_parity({f2::ycoord(i, prefix)}, convert(node.child[0]), convert(node.child[1]));
            }
            const std::uint32_t bit = bits - 1 - sent;
            auto zero = announce(sent + 1, prefix);
            auto one = announce(sent + 1, prefix | (std::uint32_t{1} << bit));
            if (kind == ProtocolKind::ParityParity) return ProtocolTree::alice_parity({f2::xbit(i, bit)}, zero, one);
            const auto part = PointerSet::full(n, m).filter(
                [&](std::span<const std::uint32_t> x) { return ((x[i] >> bit) & 1U) == 0; });
            return ProtocolTree::alice_split(part, zero, one);
        };
        return announce(0, 0);
    };
    auto p = convert(0);
    p.renumber();
    return p;
}

}  // namespace liftlab
