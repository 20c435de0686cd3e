// liftlab: command-line front end. Exit codes: 0 pass, 1 semantic reject,
// 2 input error, 3 guard or size limit.

#include "liftlab/counterexample.hpp"
#include "liftlab/entropy.hpp"
#include "liftlab/error.hpp"
#include "liftlab/proofcnf.hpp"
#include "liftlab/protocol.hpp"
#include "liftlab/simulation.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace liftlab;

namespace {

constexpr int kPass = 0;
constexpr int kReject = 1;
constexpr int kInputError = 2;
constexpr int kGuard = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Global {
    bool kv = false;
    bool no_timestamp = false;
    bool force = false;
    unsigned threads = 1;
};

/// Ordered key/value report, printed aligned or as key=value lines.
class Report {
public:
    explicit Report(std::string command) : command_(std::move(command)) {}

    template <class T>
    void add(const std::string& key, const T& value) {
        std::ostringstream s;
        s << value;
        fields_.emplace_back(key, s.str());
    }
    void flag(const std::string& key, bool value) { fields_.emplace_back(key, value ? "yes" : "no"); }

    [[nodiscard]] std::string render(const Global& g) const {
        std::vector<std::pair<std::string, std::string>> all{{"command", command_}};
        if (!g.no_timestamp) all.emplace_back("timestamp", timestamp());
        all.insert(all.end(), fields_.begin(), fields_.end());
        std::ostringstream out;
        std::size_t width = 0;
        for (const auto& [k, v] : all) width = std::max(width, k.size());
        for (const auto& [k, v] : all) {
            if (g.kv)
                out << k << '=' << v << '\n';
            else
                out << std::left << std::setw(static_cast<int>(width)) << k << "  " << v << '\n';
        }
        return out.str();
    }

private:
    static std::string timestamp() {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::ostringstream s;
        s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        return s.str();
    }

    std::string command_;
    std::vector<std::pair<std::string, std::string>> fields_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("cannot write " + path);
}

int emit(const Report& r, const Global& g, int code, const std::string& out_path = {}) {
    const auto text = r.render(g);
    std::cout << text;
    if (!out_path.empty()) write_file(out_path, text);
    return code;
}

std::string bits_of(const BitVec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += v.test(i) ? '1' : '0';
    return s;
}

std::string list_of(const std::vector<std::uint32_t>& xs, std::uint32_t offset) {
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? "," : "") + std::to_string(xs[k] + offset);
    return s.empty() ? "-" : s;
}

std::vector<std::uint32_t> parse_block_list(const std::string& text, std::uint32_t blocks) {
    std::vector<std::uint32_t> out;
    if (text.empty()) return out;
    std::stringstream parts(text);
    std::string tok;
    while (std::getline(parts, tok, ',')) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size() || v == 0 || v > blocks)
            throw Error(Errc::ParseError, "block '" + tok + "' is not in 1.." + std::to_string(blocks));
        out.push_back(static_cast<std::uint32_t>(v - 1));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// z as written on the command line: z_1 first.
std::uint64_t parse_z(const std::string& text, std::uint32_t blocks) {
    if (text.size() != blocks || text.find_first_not_of("01") != std::string::npos)
        throw Error(Errc::ParseError, "--z needs exactly " + std::to_string(blocks) + " characters 0/1");
    std::uint64_t z = 0;
    for (std::uint32_t i = 0; i < blocks; ++i)
        if (text[i] == '1') z |= std::uint64_t{1} << i;
    return z;
}

std::string z_text(std::uint64_t z, std::uint32_t blocks) {
    std::string s;
    for (std::uint32_t i = 0; i < blocks; ++i) s += ((z >> i) & 1U) ? '1' : '0';
    return s;
}

// ------------------------------------------------------------ counterexample

struct CounterexampleArgs {
    std::string gadget = "ind";
    std::uint32_t m = 2;
    std::uint32_t n = 8;
    std::string k = "1";
    std::uint32_t delta = 1;
    bool exhaustive = false;
    std::string out;
};

int run_counterexample(const CounterexampleArgs& a, const Global& g) {
    counterexample::Params p;
    if (a.gadget != "ind" && a.gadget != "ip") throw Error(Errc::ParseError, "--gadget must be ind or ip");
    p.kind = a.gadget == "ind" ? GadgetKind::Index : GadgetKind::InnerProduct;
    p.m = a.m;
    p.n = a.n;
    p.k = parse_rational(a.k);
    p.delta = a.delta;
    const auto family = counterexample::build(p);

    Report r("counterexample");
    r.add("gadget", a.gadget);
    r.add(p.kind == GadgetKind::Index ? "m" : "b", p.m);
    r.add("N", p.n);
    r.add("K", to_string(p.k));
    r.add("delta", p.delta);
    r.add("per_group_threshold", p.per_group_threshold());
    r.add("forbidden", p.kind == GadgetKind::Index ? "all-0" : "all-1");
    if (!a.exhaustive) {
        const auto size = family.cardinality();
        const bool ok = deficiency_at_most(size, family.universe_bits(), p.delta);
        r.add("size", size.str());
        r.add("deficiency", deficiency(size, family.universe_bits()));
        r.flag("deficiency_ok", ok);
        r.add("checks", "construction");
        r.add("result", ok ? "PASS" : "FAIL");
        return emit(r, g, ok ? kPass : kReject, a.out);
    }
    const auto v = counterexample::verify(p, family, {Guard::from_env(g.force), g.threads});
    r.add("size", v.cardinality.str());
    r.add("scanned_size", v.scanned_cardinality.str());
    r.add("deficiency", v.deficiency);
    r.flag("deficiency_ok", v.deficiency_ok);
    r.add("rate", v.rate);
    r.add("rate_witness", list_of(v.rate_witness_blocks, 1));
    r.flag("rate_ok", v.rate_ok);
    r.flag("rate_at_equality", v.rate_at_equality);
    r.add("checked_I", v.sets_checked);
    r.flag("forbidden_missed", v.forbidden_missed);
    if (v.failing_drop) r.add("failing_I", list_of(*v.failing_drop, 1));
    r.flag("special_blocks_ok", v.special_blocks_ok);
    if (v.special_witness) r.add("special_witness", *v.special_witness);
    r.flag("implication_ok", v.implication_ok);
    r.add("checks", "exhaustive");
    r.add("result", v.all_passed() ? "PASS" : "FAIL");
    return emit(r, g, v.all_passed() ? kPass : kReject, a.out);
}

// ------------------------------------------------------------ simulate

struct SimulateArgs {
    std::string protocol;
    std::uint32_t m = 0;
    std::uint32_t n = 0;
    std::string z;
    bool all_z = false;
    std::string emit_dt;
    std::string trace;
    std::string mode;
};

int run_simulate(const SimulateArgs& a, const Global& g) {
    const auto p = ProtocolTree::parse(read_file(a.protocol));
    if (p.m() != a.m || p.blocks() != a.n)
        throw Error(Errc::ShapeMismatch, "protocol header says N=" + std::to_string(p.blocks()) +
                                             " m=" + std::to_string(p.m()));
    sim::Options o;
    o.mode = a.mode.empty() ? (p.kind() == ProtocolKind::StarParity ? sim::Mode::StarParity : sim::Mode::ParityParity)
                            : sim::parse_mode(a.mode);
    o.guard = Guard::from_env(g.force);
    if (!a.trace.empty() && a.z.empty()) throw Error(Errc::InvalidArgument, "--trace needs --z");
    if (a.z.empty() == !a.all_z && a.emit_dt.empty())
        throw Error(Errc::InvalidArgument, "give exactly one of --z and --all-z, or --emit-dt");

    Report r("simulate");
    r.add("N", a.n);
    r.add("m", a.m);
    r.add("mode", sim::to_string(o.mode));
    r.add("protocol_leaves", p.leaves());
    r.add("protocol_depth", p.depth());
    bool bound_ok = true;
    auto record = [&](std::uint64_t z, const std::string& prefix) {
        const auto res = sim::simulate(p, z, o);
        const bool ok = sim::query_bound_holds(res.queried.size(), res.span_bits(), a.m);
        bound_ok = bound_ok && ok;
        r.add(prefix + "label", res.label);
        r.add(prefix + "queried", res.queried.size());
        r.add(prefix + "span_bits", res.span_bits());
        r.add(prefix + "path_bits", res.path_bits);
        r.flag(prefix + "bound_ok", ok);
        return res;
    };
    if (!a.z.empty()) {
        const auto z = parse_z(a.z, a.n);
        r.add("z", a.z);
        const auto res = record(z, "");
        if (!a.trace.empty()) {
            std::ostringstream tsv;
            res.trace.write_tsv(tsv);
            write_file(a.trace, tsv.str());
        }
    } else if (a.all_z) {
        if (a.n > 20) throw Error(Errc::GuardExceeded, "--all-z over more than 2^20 inputs");
        for (std::uint64_t z = 0; z < (std::uint64_t{1} << a.n); ++z) record(z, "z" + z_text(z, a.n) + ".");
    }
    if (!a.emit_dt.empty()) {
        const auto t = sim::extract_decision_tree(p, o);
        write_file(a.emit_dt, t.to_string());
        r.add("dt_leaves", t.leaves());
        r.add("dt_height", t.height());
    }
    r.add("result", bound_ok ? "PASS" : "FAIL");
    return emit(r, g, bound_ok ? kPass : kReject);
}

// ------------------------------------------------------------ lift-cnf

struct LiftArgs {
    std::string in;
    std::uint32_t m = 0;
    std::string out;
    std::string map;
    std::uint64_t max_clauses = 10'000'000;
};

int run_lift(const LiftArgs& a, const Global& g) {
    const auto phi = Cnf::parse_dimacs(read_file(a.in));
    const auto lifted = lift_cnf(phi, a.m, a.max_clauses);
    write_file(a.out, lifted.cnf.to_dimacs());
    if (!a.map.empty()) {
        std::ostringstream map;
        lifted.write_map(map);
        write_file(a.map, map.str());
    }
    // M' = sum over clauses of m^width, N' = N (ell + m).
    std::uint64_t expect_clauses = 0;
    for (const auto& c : phi.clauses) {
        std::uint64_t t = 1;
        for (std::size_t k = 0; k < c.size(); ++k) t *= a.m;
        expect_clauses += t;
    }
    const std::uint64_t expect_vars = std::uint64_t{phi.vars} * (lifted.layout.ell + a.m);
    const bool ok = expect_clauses == lifted.cnf.clauses.size() && expect_vars == lifted.cnf.vars;
    Report r("lift-cnf");
    r.add("base_vars", phi.vars);
    r.add("base_clauses", phi.clauses.size());
    r.add("m", a.m);
    r.add("vars", lifted.cnf.vars);
    r.add("clauses", lifted.cnf.clauses.size());
    r.add("expected_vars", expect_vars);
    r.add("expected_clauses", expect_clauses);
    r.add("result", ok ? "PASS" : "FAIL");
    return emit(r, g, ok ? kPass : kReject);
}

// ------------------------------------------------------------ proofs and trees

void add_verdict(Report& r, const Verdict& v, const std::string& line_key, const std::function<std::string(std::size_t)>& name) {
    r.add("verdict", v.accepted ? "ACCEPT" : "REJECT");
    if (v.accepted) return;
    if (v.failing_line) r.add(line_key, name(*v.failing_line));
    r.add("reason", v.reason);
    if (v.witness) r.add("witness", bits_of(*v.witness));
}

struct ProofArgs {
    std::string cnf;
    std::string proof;
    std::string tree;
    std::string out;
    bool require_tree = false;
};

int run_check_proof(const ProofArgs& a, const Global& g) {
    const auto cnf = Cnf::parse_dimacs(read_file(a.cnf));
    const auto proof = ResPlusProof::parse(read_file(a.proof), cnf);
    const auto v = check_resplus(cnf, proof, a.require_tree, Guard::from_env(g.force));
    Report r("check-proof");
    r.add("vars", cnf.vars);
    r.add("clauses", cnf.clauses.size());
    r.add("lines", proof.lines.size());
    r.flag("tree_like", proof.tree_like());
    r.flag("tree_resolution", proof.is_tree_resolution());
    add_verdict(r, v, "failing_line", [&](std::size_t k) { return std::to_string(proof.lines[k].id); });
    return emit(r, g, v.accepted ? kPass : kReject);
}

int run_pdt_verify(const ProofArgs& a, const Global& g) {
    const auto cnf = Cnf::parse_dimacs(read_file(a.cnf));
    const auto t = ParityDecisionTree::parse(read_file(a.tree));
    const auto v = pdt_solves_search(t, cnf, Guard::from_env(g.force));
    Report r("pdt verify");
    r.add("nodes", t.size());
    r.add("leaves", t.leaves());
    r.add("height", t.height());
    add_verdict(r, v, "failing_node", [](std::size_t k) { return std::to_string(k); });
    return emit(r, g, v.accepted ? kPass : kReject);
}

int run_pdt_to_proof(const ProofArgs& a, const Global& g) {
    const auto cnf = Cnf::parse_dimacs(read_file(a.cnf));
    const auto t = ParityDecisionTree::parse(read_file(a.tree));
    Report r("pdt to-proof");
    r.add("nodes", t.size());
    const auto v = pdt_solves_search(t, cnf, Guard::from_env(g.force));
    if (!v.accepted) {
        add_verdict(r, v, "failing_node", [](std::size_t k) { return std::to_string(k); });
        return emit(r, g, kReject);
    }
    const auto proof = pdt_to_resplus(t, cnf);
    write_file(a.out, proof.to_string(cnf));
    r.add("lines", proof.lines.size());
    r.flag("tree_resolution", proof.is_tree_resolution());
    add_verdict(r, check_resplus(cnf, proof, true, Guard::from_env(g.force)), "failing_line",
                [&](std::size_t k) { return std::to_string(k + 1); });
    return emit(r, g, kPass);
}

int run_pdt_from_proof(const ProofArgs& a, const Global& g) {
    const auto cnf = Cnf::parse_dimacs(read_file(a.cnf));
    const auto proof = ResPlusProof::parse(read_file(a.proof), cnf);
    Report r("pdt from-proof");
    r.add("lines", proof.lines.size());
    const auto v = check_resplus(cnf, proof, true, Guard::from_env(g.force));
    add_verdict(r, v, "failing_line", [&](std::size_t k) { return std::to_string(proof.lines[k].id); });
    if (!v.accepted) return emit(r, g, kReject);
    const auto t = resplus_to_pdt(proof, cnf);
    write_file(a.out, t.to_string());
    r.add("nodes", t.size());
    r.add("leaves", t.leaves());
    r.add("height", t.height());
    return emit(r, g, kPass);
}

struct LiftSimArgs {
    std::string tree;
    std::uint32_t m = 0;
    std::uint32_t n = 0;
    std::string cnf;
    std::string out;
    std::string proof_out;
    bool check = false;
};

int run_pdt_lift_simulate(const LiftSimArgs& a, const Global& g) {
    const auto t = ParityDecisionTree::parse(read_file(a.tree));
    sim::PdtOptions o;
    o.check_invariants = a.check;
    o.guard = Guard::from_env(g.force);
    std::optional<LiftedCnf> lifted;
    if (!a.cnf.empty()) {
        lifted = lift_cnf(Cnf::parse_dimacs(read_file(a.cnf)), a.m);
        if (lifted->base.vars != a.n) throw Error(Errc::ShapeMismatch, "--N differs from the formula's variable count");
        o.relabel = [&](const std::string& name) { return lifted->base_label(name); };
    }
    const auto dt = sim::pdt_simulate(t, a.m, a.n, o);
    if (!a.out.empty()) write_file(a.out, dt.to_string());
    Report r("pdt lift-simulate");
    r.add("N", a.n);
    r.add("m", a.m);
    r.add("pdt_leaves", t.leaves());
    r.add("pdt_height", t.height());
    r.add("dt_leaves", dt.leaves());
    r.add("dt_height", dt.height());
    bool ok = dt.leaves() <= t.leaves();
    r.flag("leaves_ok", ok);
    if (lifted) {
        const auto v = pdt_solves_search(dt, lifted->base, o.guard);
        r.flag("solves_base", v.accepted);
        ok = ok && v.accepted;
        if (v.accepted && !a.proof_out.empty()) {
            const auto proof = pdt_to_resplus(dt, lifted->base);
            write_file(a.proof_out, proof.to_string(lifted->base));
            r.add("proof_lines", proof.lines.size());
        }
    }
    r.add("result", ok ? "PASS" : "FAIL");
    return emit(r, g, ok ? kPass : kReject);
}

// ------------------------------------------------------------ entropy

struct EntropyArgs {
    std::string set;
    std::uint32_t m = 0;
    std::uint32_t n = 0;
    std::string excluded;
    std::string tau = "1/2";
};

/// One member per line, block values 0-based and comma-separated; '#' starts a comment.
PointerSet parse_set(const std::string& text, std::uint32_t blocks, std::uint32_t m) {
    std::vector<Pointer> members;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        std::string extra;
        if (ls >> extra) throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": one member per line");
        Pointer p;
        std::stringstream parts(tok);
        std::string v;
        while (std::getline(parts, v, ',')) {
            if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos || v.size() > 9 ||
                std::stoul(v) >= m)
                throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": bad value '" + v + "'");
            p.push_back(static_cast<std::uint32_t>(std::stoul(v)));
        }
        if (p.size() != blocks)
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected " + std::to_string(blocks) + " values");
        members.push_back(std::move(p));
    }
    return PointerSet(blocks, m, members);
}

int run_entropy(const EntropyArgs& a, const Global& g) {
    const auto s = parse_set(read_file(a.set), a.n, a.m);
    const auto excluded = parse_block_list(a.excluded, a.n);
    const auto tau = parse_rational(a.tau);
    const Guard guard = Guard::from_env(g.force);
    const auto rep = min_entropy_rate(s, excluded, guard);
    const auto low = maximal_low_rate_set(s, excluded, tau, guard);
    Report r("entropy");
    r.add("N", a.n);
    r.add("m", a.m);
    r.add("size", s.size());
    r.add("excluded", list_of(excluded, 1));
    r.add("deficiency", rep.deficiency);
    r.add("rate", rep.rate);
    r.add("witness_set", list_of(rep.witness_set, 1));
    r.add("witness_assignment", list_of(rep.witness_assignment, 0));
    r.add("witness_count", rep.witness_count.str());
    r.add("tau", to_string(tau));
    r.add("low_rate_set", list_of(low.blocks, 1));
    r.add("low_rate_assignment", list_of(low.values, 0));
    return emit(r, g, kPass);
}

int exit_code(Errc c) {
    switch (c) {
        case Errc::GuardExceeded:
        case Errc::WidthOverflow:
        case Errc::TooLarge: return kGuard;
        case Errc::EmptyState:
        case Errc::SpanViolation:
        case Errc::Inconsistent: return kReject;
        default: return kInputError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"liftlab: lifting theorem experiments"};
    app.require_subcommand(1);
    Global g;
    app.add_flag("--kv", g.kv, "Print key=value lines instead of aligned text");
    app.add_flag("--no-timestamp", g.no_timestamp, "Omit the timestamp field");
    app.add_flag("--force", g.force, "Run past guard limits (also LIFTLAB_GUARD_OVERRIDE=1)");
    app.add_option("--threads", g.threads, "Worker threads for exhaustive scans")->check(CLI::Range(1U, 256U));
    int code = kPass;

    CounterexampleArgs ce;
    auto* c = app.add_subcommand("counterexample", "Build and verify the block family counterexample");
    c->add_option("--gadget", ce.gadget, "ind or ip")->check(CLI::IsMember({"ind", "ip"}));
    c->add_option("--m", ce.m, "m for ind, b for ip")->required();
    c->add_option("--N", ce.n, "Number of blocks")->required();
    c->add_option("--K", ce.k, "K >= 1, integer or p/q")->required();
    c->add_option("--delta", ce.delta, "Deficiency budget")->required();
    c->add_flag("--exhaustive", ce.exhaustive, "Run the four exhaustive checks");
    c->add_option("--out", ce.out, "Also write the report here");
    c->callback([&] { code = run_counterexample(ce, g); });

    SimulateArgs sa;
    auto* s = app.add_subcommand("simulate", "Simulate a protocol by a decision tree");
    s->add_option("--protocol", sa.protocol, "Protocol file")->required();
    s->add_option("--m", sa.m)->required();
    s->add_option("--N", sa.n)->required();
    s->add_option("--z", sa.z, "Base input, z_1 first");
    s->add_flag("--all-z", sa.all_z, "Run every z");
    s->add_option("--emit-dt", sa.emit_dt, "Write the extracted decision tree");
    s->add_option("--trace", sa.trace, "Write the step trace (TSV); needs --z");
    s->add_option("--mode", sa.mode, "star-parity or parity-parity")->check(CLI::IsMember({"star-parity", "parity-parity"}));
    s->callback([&] { code = run_simulate(sa, g); });

    LiftArgs la;
    auto* l = app.add_subcommand("lift-cnf", "Compose a CNF with IND_m");
    l->add_option("--in", la.in)->required();
    l->add_option("--m", la.m)->required();
    l->add_option("--out", la.out)->required();
    l->add_option("--map", la.map);
    l->add_option("--max-clauses", la.max_clauses, "Refuse larger outputs");
    l->callback([&] { code = run_lift(la, g); });

    ProofArgs pa;
    auto* cp = app.add_subcommand("check-proof", "Check a Res(+) refutation");
    cp->add_option("--cnf", pa.cnf)->required();
    cp->add_option("--proof", pa.proof)->required();
    cp->add_flag("--tree", pa.require_tree, "Also require tree-like");
    cp->callback([&] { code = run_check_proof(pa, g); });

    auto* pdt = app.add_subcommand("pdt", "Parity decision tree tools");
    pdt->require_subcommand(1);
    auto* pv = pdt->add_subcommand("verify", "Check that a tree solves the search problem");
    pv->add_option("--cnf", pa.cnf)->required();
    pv->add_option("--tree", pa.tree)->required();
    pv->callback([&] { code = run_pdt_verify(pa, g); });
    auto* pt = pdt->add_subcommand("to-proof", "Tree to tree-like Res(+) refutation");
    pt->add_option("--cnf", pa.cnf)->required();
    pt->add_option("--tree", pa.tree)->required();
    pt->add_option("--out", pa.out)->required();
    pt->callback([&] { code = run_pdt_to_proof(pa, g); });
    auto* pf = pdt->add_subcommand("from-proof", "Tree-like Res(+) refutation to tree");
    pf->add_option("--cnf", pa.cnf)->required();
    pf->add_option("--proof", pa.proof)->required();
    pf->add_option("--out", pa.out)->required();
    pf->callback([&] { code = run_pdt_from_proof(pa, g); });
    LiftSimArgs ls;
    auto* pl = pdt->add_subcommand("lift-simulate", "Simulate a lifted parity tree by a decision tree");
    pl->add_option("--tree", ls.tree)->required();
    pl->add_option("--m", ls.m)->required();
    pl->add_option("--N", ls.n)->required();
    pl->add_option("--cnf", ls.cnf, "Base CNF; leaves are then lifted clause names");
    pl->add_option("--out", ls.out, "Write the decision tree");
    pl->add_option("--proof-out", ls.proof_out, "Write the tree-resolution refutation (needs --cnf)");
    pl->add_flag("--check", ls.check, "Check simulation invariants at every step");
    pl->callback([&] { code = run_pdt_lift_simulate(ls, g); });

    EntropyArgs ea;
    auto* e = app.add_subcommand("entropy", "Deficiency and min-entropy rate of an explicit set");
    e->add_option("--set", ea.set, "Members, one per line, values comma-separated and 0-based")->required();
    e->add_option("--m", ea.m)->required();
    e->add_option("--N", ea.n)->required();
    e->add_option("--excluded", ea.excluded, "1-based blocks, comma-separated");
    e->add_option("--tau", ea.tau, "Threshold for the maximal low-rate set");
    e->callback([&] { code = run_entropy(ea, g); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& h) {
        return app.exit(h);
    } catch (const CLI::ParseError& err) {
        (void)app.exit(err);
        return kInputError;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return exit_code(err.code());
    } catch (const IoError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kInputError;
    }
    return code;
}
