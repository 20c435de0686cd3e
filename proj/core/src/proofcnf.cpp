#include "liftlab/proofcnf.hpp"

#include "liftlab/error.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace liftlab {

namespace {

/// Reduced row echelon form with the lowest column of each row as its lead.
/// Reducing a vector modulo it gives a representative that depends only on
/// the subspace, not on the order equations arrived in.
class Rref {
public:
    explicit Rref(std::size_t width) : width_(width) {}

    std::pair<BitVec, bool> reduce(BitVec v, bool c) const {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            if (v.test(lead_[k])) {
                v ^= rows_[k];
                c = c != rhs_[k];
            }
        }
        return {std::move(v), c};
    }

    void add(const BitVec& v, bool c) {
        auto [r, rc] = reduce(v, c);
        if (r.none()) {
            if (rc) inconsistent_ = true;
            return;
        }
        const std::size_t lead = r.first();
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            if (rows_[k].test(lead)) {
                rows_[k] ^= r;
                rhs_[k] = rhs_[k] != rc;
            }
        }
        const auto pos = static_cast<std::size_t>(std::lower_bound(lead_.begin(), lead_.end(), lead) - lead_.begin());
        rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), r);
        rhs_.insert(rhs_.begin() + static_cast<std::ptrdiff_t>(pos), rc);
        lead_.insert(lead_.begin() + static_cast<std::ptrdiff_t>(pos), lead);
    }

    [[nodiscard]] bool inconsistent() const noexcept { return inconsistent_; }
    [[nodiscard]] std::size_t rank() const noexcept { return rows_.size(); }
    [[nodiscard]] const BitVec& row(std::size_t k) const { return rows_[k]; }
    [[nodiscard]] bool rhs(std::size_t k) const { return rhs_[k]; }
    [[nodiscard]] std::size_t width() const noexcept { return width_; }

private:
    std::size_t width_;
    std::vector<BitVec> rows_;
    std::vector<bool> rhs_;
    std::vector<std::size_t> lead_;
    bool inconsistent_ = false;
};

Rref rref_of(const Subspace& s) {
    Rref r(s.width());
    if (s.empty()) {
        r.add(BitVec(s.width()), true);
        return r;
    }
    for (std::size_t k = 0; k < s.system().codim(); ++k) r.add(s.system().rows()[k], s.system().rhs()[k]);
    return r;
}

/// The intersection of `a` with the subspace described by `c`, expressed by
/// equations reduced modulo c.
Rref restricted(const Rref& c, const Subspace& a) {
    Rref out(c.width());
    if (a.empty()) {
        out.add(BitVec(c.width()), true);
        return out;
    }
    for (std::size_t k = 0; k < a.system().codim(); ++k) {
        auto [r, rc] = c.reduce(a.system().rows()[k], a.system().rhs()[k]);
        out.add(r, rc);
    }
    return out;
}

BitVec support_of(std::size_t width, const std::vector<std::uint32_t>& vars) {
    BitVec v(width);
    for (auto x : vars) v.flip(x);
    return v;
}

std::vector<std::uint32_t> vars_of(const BitVec& v) {
    std::vector<std::uint32_t> out;
    for (auto i = v.first(); i < v.size(); i = v.next(i)) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

/// Lexicographically smallest point of s satisfying pred.
std::optional<BitVec> first_point(const Subspace& s, const std::function<bool(const BitVec&)>& pred, const Guard& guard) {
    if (s.empty()) return std::nullopt;
    const auto& sys = s.system();
    std::vector<std::size_t> free;
    for (std::size_t col = 0; col < s.width(); ++col)
        if (!sys.is_pivot(col)) free.push_back(col);
    guard.require("point enumeration", static_cast<double>(free.size()), 24.0);
    std::vector<BitVec> basis;
    for (auto f : free) {
        BitVec b(s.width());
        b.set(f);
        for (std::size_t r = 0; r < sys.codim(); ++r)
            if (sys.rows()[r].test(f)) b.set(sys.pivots()[r]);
        basis.push_back(std::move(b));
    }
    BitVec point = sys.particular_solution();
    std::optional<BitVec> best;
    const std::uint64_t total = std::uint64_t{1} << free.size();
    for (std::uint64_t t = 0; t < total; ++t) {
        if (t > 0) point ^= basis[static_cast<std::size_t>(std::countr_zero(t))];  // Gray code step
        if (pred(point) && (!best || point < *best)) best = point;
    }
    return best;
}

std::string bits_of(const BitVec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s.push_back(v.test(i) ? '1' : '0');
    return s;
}

std::map<std::string, std::size_t> name_index(const Cnf& cnf) {
    std::map<std::string, std::size_t> out;
    for (std::size_t k = 0; k < cnf.names.size(); ++k) out.emplace(cnf.names[k], k);
    return out;
}

std::vector<ParityLiteral> cube_eqs(const Cnf& cnf, std::size_t clause) {
    std::vector<ParityLiteral> out;
    for (int lit : cnf.clauses.at(clause))
        out.push_back({{static_cast<std::uint32_t>(std::abs(lit) - 1)}, lit < 0});
    return out;
}

}  // namespace

// ---------------------------------------------------------------- Cnf

Cnf Cnf::make(std::uint32_t vars, std::vector<std::vector<int>> clauses, std::vector<std::string> names) {
    if (clauses.empty()) throw Error(Errc::InvalidArgument, "CNF has no clauses");
    Cnf c;
    c.vars = vars;
    for (auto& clause : clauses) {
        std::vector<int> dedup;
        for (int lit : clause) {
            if (lit == 0 || static_cast<std::uint32_t>(std::abs(lit)) > vars)
                throw Error(Errc::InvalidArgument, "literal " + std::to_string(lit) + " out of range");
            if (std::find(dedup.begin(), dedup.end(), lit) == dedup.end()) dedup.push_back(lit);
        }
        c.clauses.push_back(std::move(dedup));
    }
    if (names.empty()) {
        for (std::size_t k = 0; k < c.clauses.size(); ++k) names.push_back(std::to_string(k + 1));
    }
    if (names.size() != c.clauses.size()) throw Error(Errc::ShapeMismatch, "one name per clause required");
    c.names = std::move(names);
    if (name_index(c).size() != c.names.size()) throw Error(Errc::InvalidArgument, "clause names must be distinct");
    return c;
}

Cnf Cnf::parse_dimacs(std::istream& in) {
    std::string line;
    long long vars = -1;
    long long count = -1;
    std::vector<std::vector<int>> clauses;
    std::vector<int> cur;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c" || tok[0] == 'c') continue;
        if (tok == "%") break;
        if (tok == "p") {
            std::string fmt;
            if (vars >= 0 || !(ls >> fmt >> vars >> count) || fmt != "cnf" || vars < 0 || count < 0)
                throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 'p cnf <vars> <clauses>'");
            continue;
        }
        if (vars < 0) throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": clause before 'p cnf' header");
        do {
            std::size_t used = 0;
            long long lit = 0;
            try {
                lit = std::stoll(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size())
                throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": bad literal '" + tok + "'");
            if (lit == 0) {
                clauses.push_back(std::move(cur));
                cur.clear();
            } else {
                if (std::llabs(lit) > vars)
                    throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": literal " + tok + " out of range");
                cur.push_back(static_cast<int>(lit));
            }
        } while (ls >> tok);
    }
    if (vars < 0) throw Error(Errc::ParseError, "missing 'p cnf' header");
    if (!cur.empty()) throw Error(Errc::ParseError, "last clause is not terminated by 0");
    if (static_cast<long long>(clauses.size()) != count)
        throw Error(Errc::ParseError, "header announces " + std::to_string(count) + " clauses, found " +
                                          std::to_string(clauses.size()));
    return make(static_cast<std::uint32_t>(vars), std::move(clauses));
}

Cnf Cnf::parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

void Cnf::write_dimacs(std::ostream& out) const {
    out << "p cnf " << vars << ' ' << clauses.size() << '\n';
    for (const auto& c : clauses) {
        for (int lit : c) out << lit << ' ';
        out << "0\n";
    }
}

std::string Cnf::to_dimacs() const {
    std::ostringstream s;
    write_dimacs(s);
    return s.str();
}

bool Cnf::falsifies(const BitVec& assignment, std::size_t clause) const {
    for (int lit : clauses.at(clause)) {
        const bool v = assignment.test(static_cast<std::size_t>(std::abs(lit) - 1));
        if (v == (lit > 0)) return false;
    }
    return true;
}

std::vector<std::size_t> Cnf::falsified(const BitVec& assignment) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < clauses.size(); ++k)
        if (falsifies(assignment, k)) out.push_back(k);
    return out;
}

std::optional<std::size_t> Cnf::find(const std::string& name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == name) return k;
    return std::nullopt;
}

bool satisfiable(const Cnf& cnf, const Guard& guard) {
    guard.require("satisfiability scan", cnf.vars, 24.0);
    BitVec a(cnf.vars);
    const std::uint64_t total = std::uint64_t{1} << cnf.vars;
    for (std::uint64_t t = 0; t < total; ++t) {
        for (std::uint32_t v = 0; v < cnf.vars; ++v) a.set(v, (t >> v) & 1U);
        if (cnf.falsified(a).empty()) return true;
    }
    return false;
}

LiftedProblem search_problem(const Cnf& cnf, std::uint32_t m) {
    if (cnf.vars == 0 || cnf.vars > 24) throw Error(Errc::TooLarge, "search problems need 1..24 variables");
    std::vector<std::vector<std::string>> allowed(std::size_t{1} << cnf.vars);
    BitVec a(cnf.vars);
    for (std::uint64_t z = 0; z < allowed.size(); ++z) {
        for (std::uint32_t v = 0; v < cnf.vars; ++v) a.set(v, (z >> v) & 1U);
        for (auto k : cnf.falsified(a)) allowed[z].push_back(cnf.names[k]);
    }
    return LiftedProblem::relation(cnf.vars, m, std::move(allowed));
}

// ---------------------------------------------------------------- lifting

LiftedCnf lift_cnf(const Cnf& phi, std::uint32_t m, std::uint64_t max_clauses) {
    if (phi.clauses.empty()) throw Error(Errc::InvalidArgument, "CNF has no clauses");
    LiftedCnf out;
    out.base = phi;
    out.layout = LiftedLayout(phi.vars, m);
    const auto& L = out.layout;

    std::uint64_t total = 0;
    for (const auto& c : phi.clauses) {
        std::uint64_t n = 1;
        for (std::size_t t = 0; t < c.size(); ++t) {
            if (n > max_clauses / m + 1) {
                n = max_clauses + 1;
                break;
            }
            n *= m;
        }
        total += n;
        if (total > max_clauses)
            throw Error(Errc::WidthOverflow, "lifting would produce more than " + std::to_string(max_clauses) + " clauses");
    }

    std::vector<std::vector<int>> clauses;
    clauses.reserve(total);
    for (std::size_t k = 0; k < phi.clauses.size(); ++k) {
        const auto& c = phi.clauses[k];
        std::vector<std::uint32_t> tuple(c.size(), 0);
        while (true) {
            std::vector<int> lifted;
            for (std::size_t t = 0; t < c.size(); ++t) {
                const std::uint32_t i = static_cast<std::uint32_t>(std::abs(c[t]) - 1);
                for (std::uint32_t bit = 0; bit < L.ell; ++bit) {
                    const int var = static_cast<int>(L.x_var(i, bit)) + 1;
                    lifted.push_back(((tuple[t] >> bit) & 1U) ? -var : var);
                }
            }
            for (std::size_t t = 0; t < c.size(); ++t) {
                const std::uint32_t i = static_cast<std::uint32_t>(std::abs(c[t]) - 1);
                const int var = static_cast<int>(L.y_var(i, tuple[t])) + 1;
                lifted.push_back(c[t] > 0 ? var : -var);
            }
            clauses.push_back(std::move(lifted));
            out.clause_map.push_back(k);
            out.tuples.push_back(tuple);
            std::size_t pos = c.size();
            while (pos > 0 && ++tuple[pos - 1] == m) tuple[--pos] = 0;
            if (pos == 0) break;
        }
    }
    out.cnf = Cnf::make(L.vars(), std::move(clauses));
    return out;
}

void LiftedCnf::write_map(std::ostream& out) const {
    for (std::uint32_t i = 0; i < layout.blocks; ++i) {
        for (std::uint32_t b = 0; b < layout.ell; ++b)
            out << "x " << i + 1 << ' ' << b << " -> " << layout.x_var(i, b) + 1 << '\n';
        for (std::uint32_t j = 0; j < layout.m; ++j)
            out << "y " << i + 1 << ' ' << j << " -> " << layout.y_var(i, j) + 1 << '\n';
    }
}

std::string LiftedCnf::base_label(const std::string& lifted_name) const {
    const auto k = cnf.find(lifted_name);
    if (!k) throw Error(Errc::SourceInvalid, "'" + lifted_name + "' names no clause of the lifted formula");
    return base.names[clause_map[*k]];
}

// ---------------------------------------------------------------- subspaces

bool Subspace::add(const f2::ParityEq& e) {
    if (empty_) return false;
    if (e.support.size() != sys_.width()) throw Error(Errc::ShapeMismatch, "equation width differs from the space");
    const auto r = sys_.residual(e);
    if (r.support.none()) {
        if (r.rhs) empty_ = true;
        return !empty_;
    }
    sys_.insert(e);
    return true;
}

bool Subspace::contains(const BitVec& point) const { return !empty_ && sys_.satisfied_by(point); }

bool Subspace::subset_of(const Subspace& other) const {
    if (empty_) return true;
    if (other.empty_) return false;
    for (std::size_t k = 0; k < other.sys_.codim(); ++k) {
        const auto forced = sys_.in_span(other.sys_.rows()[k]);
        if (!forced || *forced != other.sys_.rhs()[k]) return false;
    }
    return true;
}

Subspace subspace_of(std::size_t width, const std::vector<ParityLiteral>& eqs) {
    Subspace s(width);
    for (const auto& e : eqs) {
        for (auto v : e.vars)
            if (v >= width) throw Error(Errc::MalformedProof, "variable v" + std::to_string(v + 1) + " out of range");
        s.add({support_of(width, e.vars), e.rhs});
    }
    return s;
}

Subspace clause_cube(const Cnf& cnf, std::size_t clause) { return subspace_of(cnf.vars, cube_eqs(cnf, clause)); }

bool containment_CsubAuB(const Subspace& c, const Subspace& a, const Subspace& b) {
    if (c.empty() || c.subset_of(a) || c.subset_of(b)) return true;
    auto meet = [&](const Subspace& x) {
        Subspace out = c;
        if (x.empty()) {
            out.add({BitVec(c.width()), true});
            return out;
        }
        for (std::size_t k = 0; k < x.system().codim(); ++k) out.add({x.system().rows()[k], x.system().rhs()[k]});
        return out;
    };
    const Subspace ac = meet(a);
    const Subspace bc = meet(b);
    const std::size_t hyper = c.system().codim() + 1;
    if (ac.empty() || bc.empty() || ac.system().codim() != hyper || bc.system().codim() != hyper) return false;
    Subspace both = ac;
    for (std::size_t k = 0; k < bc.system().codim(); ++k) both.add({bc.system().rows()[k], bc.system().rhs()[k]});
    return both.empty();
}

std::optional<BitVec> uncovered_point(const Subspace& c, const Subspace& a, const Subspace& b, const Guard& guard) {
    return first_point(c, [&](const BitVec& p) { return !a.contains(p) && !b.contains(p); }, guard);
}

// ---------------------------------------------------------------- proofs

bool ResPlusProof::tree_like() const {
    std::vector<int> uses(lines.size(), 0);
    for (const auto& l : lines) {
        if (l.kind != ProofLine::Kind::Infer) continue;
        if (++uses.at(l.parent[0]) > 1) return false;
        if (++uses.at(l.parent[1]) > 1) return false;
    }
    return true;
}

bool ResPlusProof::is_tree_resolution() const {
    if (!tree_like()) return false;
    for (const auto& l : lines)
        for (const auto& e : l.eqs)
            if (e.vars.size() > 1) return false;
    return true;
}

void ResPlusProof::write(std::ostream& out, const Cnf& cnf) const {
    for (const auto& l : lines) {
        out << "L " << l.id;
        if (l.kind == ProofLine::Kind::Axiom) {
            out << " AXIOM " << cnf.names.at(l.clause);
        } else {
            out << " INFER " << lines.at(l.parent[0]).id << ' ' << lines.at(l.parent[1]).id;
        }
        out << " ;";
        for (const auto& e : l.eqs) {
            out << " [";
            for (auto v : e.vars) out << 'v' << v + 1 << ' ';
            out << "= " << (e.rhs ? 1 : 0) << ']';
        }
        out << '\n';
    }
}

std::string ResPlusProof::to_string(const Cnf& cnf) const {
    std::ostringstream s;
    write(s, cnf);
    return s.str();
}

ResPlusProof ResPlusProof::parse(std::istream& in, const Cnf& cnf) {
    ResPlusProof proof;
    proof.vars = cnf.vars;
    const auto names = name_index(cnf);
    std::map<std::uint32_t, std::size_t> position;
    std::string line;
    std::size_t line_no = 0;
    auto syntax = [&](const std::string& what) {
        throw Error(Errc::ParseError, "proof line " + std::to_string(line_no) + ": " + what);
    };
    auto parse_id = [&](const std::string& tok) -> std::uint32_t {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (tok.empty() || used != tok.size() || tok[0] == '-') syntax("bad line id '" + tok + "'");
        return static_cast<std::uint32_t>(v);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto semi = line.find(';');
        if (semi == std::string::npos) syntax("missing ';' before the equations");
        std::istringstream head(line.substr(0, semi));
        std::string tag, id_tok, kind, extra;
        head >> tag >> id_tok >> kind;
        if (tag != "L" || id_tok.empty()) syntax("expected 'L <id> AXIOM|INFER ...'");
        ProofLine l;
        l.id = parse_id(id_tok);
        if (position.count(l.id)) throw Error(Errc::MalformedProof, "duplicate line id " + id_tok);
        if (kind == "AXIOM") {
            std::string name;
            if (!(head >> name) || (head >> extra)) syntax("expected 'AXIOM <clause>'");
            const auto it = names.find(name);
            if (it == names.end()) throw Error(Errc::MalformedProof, "axiom names unknown clause '" + name + "'");
            l.kind = ProofLine::Kind::Axiom;
            l.clause = it->second;
        } else if (kind == "INFER") {
            std::string p0, p1;
            if (!(head >> p0 >> p1) || (head >> extra)) syntax("expected 'INFER <id1> <id2>'");
            l.kind = ProofLine::Kind::Infer;
            const std::string* tok[2] = {&p0, &p1};
            for (int k = 0; k < 2; ++k) {
                const auto it = position.find(parse_id(*tok[k]));
                if (it == position.end())
                    throw Error(Errc::MalformedProof, "line " + id_tok + " infers from unknown or later line " + *tok[k]);
                l.parent[k] = it->second;
            }
        } else {
            syntax("expected AXIOM or INFER, got '" + kind + "'");
        }
        std::string rest = line.substr(semi + 1);
        std::size_t pos = 0;
        while (true) {
            const auto open = rest.find_first_not_of(" \t\r", pos);
            if (open == std::string::npos) break;
            if (rest[open] != '[') syntax("expected '[' to start an equation");
            const auto close = rest.find(']', open);
            if (close == std::string::npos) syntax("unterminated equation");
            std::istringstream eq(rest.substr(open + 1, close - open - 1));
            ParityLiteral lit;
            std::string tok;
            bool seen_eq = false;
            std::string rhs;
            while (eq >> tok) {
                if (seen_eq) {
                    if (!rhs.empty()) syntax("more than one right-hand side");
                    rhs = tok;
                } else if (tok == "=") {
                    seen_eq = true;
                } else {
                    if (tok.size() < 2 || tok[0] != 'v') syntax("expected a variable 'v<k>', got '" + tok + "'");
                    const auto v = parse_id(tok.substr(1));
                    if (v == 0 || v > cnf.vars) throw Error(Errc::MalformedProof, "variable " + tok + " out of range");
                    lit.vars.push_back(v - 1);
                }
            }
            if (!seen_eq || (rhs != "0" && rhs != "1")) syntax("equation must end with '= 0' or '= 1'");
            lit.rhs = rhs == "1";
            lit.vars = vars_of(support_of(cnf.vars, lit.vars));
            l.eqs.push_back(std::move(lit));
            pos = close + 1;
        }
        position[l.id] = proof.lines.size();
        proof.lines.push_back(std::move(l));
    }
    if (proof.lines.empty()) throw Error(Errc::MalformedProof, "proof has no lines");
    return proof;
}

ResPlusProof ResPlusProof::parse(const std::string& text, const Cnf& cnf) {
    std::istringstream in(text);
    return parse(in, cnf);
}

Verdict check_resplus(const Cnf& cnf, const ResPlusProof& proof, bool require_tree, const Guard& guard) {
    if (proof.lines.empty()) throw Error(Errc::MalformedProof, "proof has no lines");
    if (proof.vars != cnf.vars) throw Error(Errc::MalformedProof, "proof and formula disagree on the variable count");
    auto witness = [&](auto&& fn) -> std::optional<BitVec> {
        try {
            return fn();
        } catch (const Error& e) {
            if (e.code() != Errc::GuardExceeded) throw;
            return std::nullopt;
        }
    };
    std::vector<Subspace> subs;
    subs.reserve(proof.lines.size());
    for (std::size_t k = 0; k < proof.lines.size(); ++k) {
        const auto& l = proof.lines[k];
        subs.push_back(subspace_of(cnf.vars, l.eqs));
        const auto& c = subs.back();
        Verdict v;
        v.failing_line = k;
        if (l.kind == ProofLine::Kind::Axiom) {
            if (l.clause >= cnf.clauses.size()) throw Error(Errc::MalformedProof, "axiom clause out of range");
            const auto cube = clause_cube(cnf, l.clause);
            if (!(c == cube)) {
                v.reason = "line " + std::to_string(l.id) + " is not the cube of clause " + cnf.names[l.clause];
                v.witness = witness([&] {
                    auto w = first_point(c, [&](const BitVec& p) { return !cube.contains(p); }, guard);
                    return w ? w : first_point(cube, [&](const BitVec& p) { return !c.contains(p); }, guard);
                });
                return v;
            }
        } else {
            if (l.parent[0] >= k || l.parent[1] >= k)
                throw Error(Errc::MalformedProof, "line " + std::to_string(l.id) + " refers to a later line");
            const auto& a = subs[l.parent[0]];
            const auto& b = subs[l.parent[1]];
            if (!containment_CsubAuB(c, a, b)) {
                v.reason = "line " + std::to_string(l.id) + " is not contained in the union of its parents";
                v.witness = witness([&] { return uncovered_point(c, a, b, guard); });
                return v;
            }
        }
    }
    Verdict v;
    if (require_tree && !proof.tree_like()) {
        std::vector<int> uses(proof.lines.size(), 0);
        for (std::size_t k = 0; k < proof.lines.size(); ++k) {
            const auto& l = proof.lines[k];
            if (l.kind != ProofLine::Kind::Infer) continue;
            for (auto p : l.parent)
                if (++uses[p] > 1 && !v.failing_line) v.failing_line = k;
        }
        v.reason = "proof is not tree-like: line " + std::to_string(proof.lines[*v.failing_line].id) +
                   " reuses a parent";
        return v;
    }
    if (!subs.back().full()) {
        v.failing_line = proof.lines.size() - 1;
        v.reason = "last line is not the whole space";
        v.witness = witness([&] {
            return first_point(Subspace(cnf.vars), [&](const BitVec& p) { return !subs.back().contains(p); }, guard);
        });
        return v;
    }
    v.accepted = true;
    return v;
}

// ---------------------------------------------------------------- trees

Verdict pdt_solves_search(const ParityDecisionTree& t, const Cnf& cnf, const Guard& guard) {
    t.validate();
    if (t.vars() != cnf.vars) throw Error(Errc::ShapeMismatch, "tree and formula disagree on the variable count");
    guard.require("search verification", cnf.vars, 24.0);
    const auto names = name_index(cnf);
    BitVec a(cnf.vars);
    const std::uint64_t total = std::uint64_t{1} << cnf.vars;
    for (std::uint64_t s = 0; s < total; ++s) {
        // Variable 1 is the most significant bit of the counter, so assignments run in lexicographic order.
        for (std::uint32_t v = 0; v < cnf.vars; ++v) a.set(v, (s >> (cnf.vars - 1 - v)) & 1U);
        const auto leaf = t.walk(a);
        const auto& label = t.node(leaf).label;
        const auto it = names.find(label);
        if (it == names.end() || !cnf.falsifies(a, it->second)) {
            Verdict v;
            v.failing_line = leaf;
            v.reason = it == names.end() ? "leaf label '" + label + "' names no clause"
                                         : "assignment " + bits_of(a) + " does not falsify clause " + label;
            v.witness = a;
            return v;
        }
    }
    Verdict v;
    v.accepted = true;
    return v;
}

ResPlusProof pdt_to_resplus(const ParityDecisionTree& t, const Cnf& cnf, bool validate) {
    t.validate();
    if (t.vars() != cnf.vars) throw Error(Errc::SourceInvalid, "tree and formula disagree on the variable count");
    const auto names = name_index(cnf);
    ResPlusProof proof;
    proof.vars = cnf.vars;
    std::function<std::size_t(std::uint32_t, const Subspace&, const std::vector<ParityLiteral>&)> emit =
        [&](std::uint32_t v, const Subspace& path, const std::vector<ParityLiteral>& eqs) -> std::size_t {
        const auto& nd = t.node(v);
        ProofLine l;
        if (nd.leaf) {
            const auto it = names.find(nd.label);
            if (it == names.end()) throw Error(Errc::SourceInvalid, "leaf label '" + nd.label + "' names no clause");
            if (validate && !path.subset_of(clause_cube(cnf, it->second)))
                throw Error(Errc::SourceInvalid, "a path reaching leaf '" + nd.label + "' does not falsify that clause");
            l.kind = ProofLine::Kind::Axiom;
            l.clause = it->second;
            l.eqs = cube_eqs(cnf, it->second);
        } else {
            const BitVec h = support_of(cnf.vars, nd.query);
            std::size_t first = nd.child[0];
            std::size_t second = nd.child[1];
            if (!path.empty()) {
                const auto forced = path.system().in_span(h);
                if (forced && *forced) std::swap(first, second);
            }
            auto branch = [&](std::size_t child) {
                const bool bit = child == nd.child[1];
                Subspace p = path;
                p.add({h, bit});
                auto e = eqs;
                e.push_back({nd.query, bit});
                return emit(static_cast<std::uint32_t>(child), p, e);
            };
            const auto p0 = branch(first);
            const auto p1 = branch(second);
            l.kind = ProofLine::Kind::Infer;
            l.parent[0] = p0;
            l.parent[1] = p1;
            l.eqs = eqs;
        }
        l.id = static_cast<std::uint32_t>(proof.lines.size() + 1);
        proof.lines.push_back(std::move(l));
        return proof.lines.size() - 1;
    };
    emit(0, Subspace(cnf.vars), {});
    return proof;
}

ParityDecisionTree resplus_to_pdt(const ResPlusProof& proof, const Cnf& cnf) {
    const auto verdict = check_resplus(cnf, proof, true);
    if (!verdict.accepted) throw Error(Errc::SourceInvalid, "proof is rejected: " + verdict.reason);
    const std::size_t w = cnf.vars;
    std::vector<Subspace> subs;
    for (const auto& l : proof.lines) subs.push_back(subspace_of(w, l.eqs));
    using Tree = ParityDecisionTree;
    std::function<Tree(std::size_t)> build = [&](std::size_t k) -> Tree {
        const auto& l = proof.lines[k];
        if (l.kind == ProofLine::Kind::Axiom) return Tree::leaf(Tree::Kind::Parity, cnf.vars, cnf.names[l.clause]);
        const std::size_t a = l.parent[0];
        const std::size_t b = l.parent[1];
        const auto& c = subs[k];
        if (c.empty()) return Tree::branch({}, build(a), build(b));
        const Rref rc = rref_of(c);
        const Rref ra = restricted(rc, subs[a]);
        const Rref rb = restricted(rc, subs[b]);
        if (!ra.inconsistent() && ra.rank() == 1) {
            const bool at = ra.rhs(0);
            auto ta = build(a);
            auto tb = build(b);
            return at ? Tree::branch(vars_of(ra.row(0)), std::move(tb), std::move(ta))
                      : Tree::branch(vars_of(ra.row(0)), std::move(ta), std::move(tb));
        }
        if (!rb.inconsistent() && rb.rank() == 1) {
            const bool at = rb.rhs(0);
            auto ta = build(a);
            auto tb = build(b);
            return at ? Tree::branch(vars_of(rb.row(0)), std::move(ta), std::move(tb))
                      : Tree::branch(vars_of(rb.row(0)), std::move(tb), std::move(ta));
        }
        if (!ra.inconsistent() && ra.rank() == 0) return Tree::branch({}, build(a), build(b));
        if (!rb.inconsistent() && rb.rank() == 0) return Tree::branch({}, build(b), build(a));
        throw Error(Errc::SourceInvalid, "line " + std::to_string(l.id) + " has no separating parity");
    };
    return build(proof.lines.size() - 1);
}

ParityDecisionTree canonical_pdt(const ParityDecisionTree& t) {
    t.validate();
    using Tree = ParityDecisionTree;
    const std::size_t w = t.vars();
    std::function<Tree(std::uint32_t, const Rref&)> canon = [&](std::uint32_t v, const Rref& path) -> Tree {
        const auto& nd = t.node(v);
        if (nd.leaf) return Tree::leaf(Tree::Kind::Parity, t.vars(), nd.label);
        if (path.inconsistent()) return Tree::branch({}, canon(nd.child[0], path), canon(nd.child[1], path));
        auto [r, acc] = path.reduce(support_of(w, nd.query), false);
        const std::uint32_t same = nd.child[acc ? 1 : 0];
        const std::uint32_t other = nd.child[acc ? 0 : 1];
        if (r.none()) {
            Rref dead = path;
            dead.add(BitVec(w), true);
            return Tree::branch({}, canon(same, path), canon(other, dead));
        }
        Rref p0 = path;
        p0.add(r, false);
        Rref p1 = path;
        p1.add(r, true);
        return Tree::branch(vars_of(r), canon(same, p0), canon(other, p1));
    };
    return canon(0, Rref(w));
}

}  // namespace liftlab
