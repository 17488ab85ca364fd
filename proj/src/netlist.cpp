#include "lockleak/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>

namespace lockleak {

const char* kind_name(GateKind k) {
    switch (k) {
    case GateKind::And: return "AND";
    case GateKind::Nand: return "NAND";
    case GateKind::Or: return "OR";
    case GateKind::Nor: return "NOR";
    case GateKind::Xor: return "XOR";
    case GateKind::Xnor: return "XNOR";
    case GateKind::Not: return "NOT";
    case GateKind::Buf: return "BUF";
    case GateKind::Mux2: return "MUX2";
    case GateKind::Dff: return "DFF";
    case GateKind::Const0: return "CONST0";
    case GateKind::Const1: return "CONST1";
    }
    return "?";
}

void Netlist::check_arity(GateKind kind, size_t n) const {
    bool ok = true;
    switch (kind) {
    case GateKind::Not:
    case GateKind::Buf:
    case GateKind::Dff: ok = (n == 1); break;
    case GateKind::Mux2: ok = (n == 3); break;
    case GateKind::Const0:
    case GateKind::Const1: ok = (n == 0); break;
    default: ok = (n >= 2); break;
    }
    if (!ok)
        fail(ErrorKind::Op, std::string(kind_name(kind)) + " gate with " +
                                std::to_string(n) + " inputs");
}

NetId Netlist::ensure_net(const std::string& name) {
    auto it = by_name_.find(name);
    if (it != by_name_.end()) return it->second;
    NetId id = NetId(names_.size());
    names_.push_back(name);
    by_name_.emplace(name, id);
    driver_.push_back(NO_DRIVER);
    touch();
    return id;
}

NetId Netlist::add_pi(const std::string& name) {
    NetId n = ensure_net(name);
    if (driver_[n] != NO_DRIVER)
        fail(ErrorKind::Op, "net '" + name + "' already driven");
    driver_[n] = PI_DRIVER;
    pis_.push_back(n);
    touch();
    return n;
}

uint32_t Netlist::add_gate(GateKind kind, std::vector<NetId> inputs, NetId output) {
    check_arity(kind, inputs.size());
    if (driver_[output] != NO_DRIVER)
        fail(ErrorKind::Op, "net '" + names_[output] + "' already driven");
    uint32_t g = uint32_t(gates_.size());
    driver_[output] = g;
    gates_.push_back(Gate{kind, std::move(inputs), output, false});
    touch();
    return g;
}

uint32_t Netlist::add_gate(GateKind kind, std::vector<NetId> inputs,
                           const std::string& output_name) {
    return add_gate(kind, std::move(inputs), ensure_net(output_name));
}

void Netlist::add_po(NetId net) {
    if (std::find(pos_.begin(), pos_.end(), net) != pos_.end())
        fail(ErrorKind::Op, "duplicate primary output '" + names_[net] + "'");
    pos_.push_back(net);
    touch();
}

NetId Netlist::fresh_net(const std::string& stem) {
    if (!by_name_.count(stem)) return ensure_net(stem);
    for (uint64_t i = 1;; ++i) {
        std::string cand = stem + "_" + std::to_string(i);
        if (!by_name_.count(cand)) return ensure_net(cand);
    }
}

NetId Netlist::find_net(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? NO_NET : it->second;
}

size_t Netlist::pi_index(NetId n) const {
    for (size_t i = 0; i < pis_.size(); ++i)
        if (pis_[i] == n) return i;
    fail(ErrorKind::Op, "net '" + names_[n] + "' is not a primary input");
}

bool Netlist::has_dff() const {
    for (const auto& g : gates_)
        if (g.kind == GateKind::Dff) return true;
    return false;
}

const std::vector<Sink>& Netlist::sinks(NetId n) const {
    build_caches();
    return sinks_[n];
}

const std::vector<uint32_t>& Netlist::topo_gates() const {
    build_caches();
    return topo_;
}

const std::vector<LineId>& Netlist::lines() const {
    build_caches();
    return lines_;
}

uint32_t Netlist::line_index(LineId line) const {
    build_caches();
    auto it = line_idx_.find(uint64_t(line.net) << 32 | uint32_t(line.branch + 1));
    if (it == line_idx_.end())
        fail(ErrorKind::Op, "no such line: " + line_text(line));
    return it->second;
}

std::string Netlist::line_text(LineId line) const {
    if (line.net == NO_NET) return "<none>";
    if (line.is_stem()) return names_[line.net];
    return names_[line.net] + "@" + std::to_string(line.branch);
}

LineId Netlist::parse_line_text(const std::string& text) const {
    std::string name = text;
    int32_t branch = -1;
    if (auto at = text.rfind('@'); at != std::string::npos) {
        bool digits = at + 1 < text.size();
        for (size_t i = at + 1; i < text.size(); ++i)
            digits = digits && std::isdigit(uint8_t(text[i]));
        if (digits) {
            name = text.substr(0, at);
            branch = int32_t(std::stol(text.substr(at + 1)));
        }
    }
    NetId n = find_net(name);
    if (n == NO_NET) fail(ErrorKind::Op, "unknown net in line id '" + text + "'");
    LineId line{n, branch};
    line_index(line); // existence check
    return line;
}

LineCensus Netlist::census(const std::vector<LineId>& key_affected) const {
    build_caches();
    LineCensus c;
    c.pi_count = pis_.size();
    c.gate_count = gates_.size();
    for (NetId n = 0; n < names_.size(); ++n)
        if (sinks_[n].size() >= 2) c.fanout_branches += sinks_[n].size();
    for (const LineId& l : key_affected)
        line_index(l); // membership check; throws on a line we do not own
    c.key_affected = key_affected.size();
    c.eligible = c.pi_count + c.gate_count + c.fanout_branches - c.key_affected;
    return c;
}

std::vector<char> Netlist::forward_net_mask(std::span<const NetId> seeds,
                                            bool include_seeds) const {
    build_caches();
    std::vector<char> mark(names_.size(), 0);
    std::deque<NetId> q;
    for (NetId s : seeds) {
        if (!mark[s]) {
            mark[s] = 1;
            q.push_back(s);
        }
    }
    while (!q.empty()) {
        NetId n = q.front();
        q.pop_front();
        for (const Sink& s : sinks_[n]) {
            if (s.is_po()) continue;
            NetId out = gates_[s.gate].output;
            if (!mark[out]) {
                mark[out] = 1;
                q.push_back(out);
            }
        }
    }
    if (!include_seeds)
        for (NetId s : seeds) mark[s] = 0;
    return mark;
}

std::vector<std::vector<uint64_t>> Netlist::pi_support() const {
    build_caches();
    const size_t words = (pis_.size() + 63) / 64;
    std::vector<std::vector<uint64_t>> sup(names_.size(),
                                           std::vector<uint64_t>(words, 0));
    for (size_t i = 0; i < pis_.size(); ++i)
        sup[pis_[i]][i / 64] |= uint64_t(1) << (i % 64);
    for (uint32_t g : topo_) {
        const Gate& gt = gates_[g];
        if (gt.kind == GateKind::Dff) continue; // state, not a PI function
        auto& out = sup[gt.output];
        for (NetId in : gt.inputs)
            for (size_t w = 0; w < words; ++w) out[w] |= sup[in][w];
    }
    return sup;
}

void Netlist::rewire_gate_input(uint32_t g, uint32_t slot, NetId to) {
    gates_[g].inputs[slot] = to;
    touch();
}

void Netlist::replace_po(uint32_t po_slot, NetId to) {
    pos_[po_slot] = to;
    touch();
}

uint32_t Netlist::retarget_sinks(NetId from, NetId to,
                                 std::span<const uint32_t> except_gates) {
    auto skip = [&](uint32_t g) {
        return std::find(except_gates.begin(), except_gates.end(), g) !=
               except_gates.end();
    };
    uint32_t moved = 0;
    for (uint32_t g = 0; g < gates_.size(); ++g) {
        if (skip(g)) continue;
        for (NetId& in : gates_[g].inputs)
            if (in == from) {
                in = to;
                ++moved;
            }
    }
    for (NetId& po : pos_)
        if (po == from) {
            po = to;
            ++moved;
        }
    touch();
    return moved;
}

void Netlist::morph_gate(uint32_t g, GateKind kind, std::vector<NetId> inputs) {
    check_arity(kind, inputs.size());
    gates_[g].kind = kind;
    gates_[g].inputs = std::move(inputs);
    touch();
}

void Netlist::remove_unused_pi(NetId n) {
    build_caches();
    if (!is_pi(n)) fail(ErrorKind::Op, "not a PI: " + names_[n]);
    if (!sinks_[n].empty())
        fail(ErrorKind::Op, "PI '" + names_[n] + "' still has sinks");
    pis_.erase(std::find(pis_.begin(), pis_.end(), n));
    driver_[n] = NO_DRIVER; // net stays allocated but is dead
    touch();
}

void Netlist::set_no_scan(uint32_t g, bool v) {
    if (gates_[g].kind != GateKind::Dff)
        fail(ErrorKind::Op, "no_scan applies to DFF gates only");
    gates_[g].no_scan = v;
}

void Netlist::build_caches() const {
    if (caches_ok_) return;

    sinks_.assign(names_.size(), {});
    for (uint32_t g = 0; g < gates_.size(); ++g)
        for (uint32_t s = 0; s < gates_[g].inputs.size(); ++s)
            sinks_[gates_[g].inputs[s]].push_back(Sink{g, s});
    for (uint32_t p = 0; p < pos_.size(); ++p)
        sinks_[pos_[p]].push_back(Sink{Sink::PO_SINK, p});

    // Kahn's ordering over the combinational graph; DFF outputs are sources,
    // so DFF gates go first and never wait on their inputs.
    topo_.clear();
    topo_.reserve(gates_.size());
    std::vector<uint32_t> pending(gates_.size(), 0);
    std::deque<uint32_t> ready;
    for (uint32_t g = 0; g < gates_.size(); ++g) {
        if (gates_[g].kind == GateKind::Dff) {
            topo_.push_back(g);
            continue;
        }
        uint32_t deps = 0;
        for (NetId in : gates_[g].inputs) {
            uint32_t d = driver_[in];
            if (d != PI_DRIVER && d != NO_DRIVER && gates_[d].kind != GateKind::Dff)
                ++deps;
        }
        pending[g] = deps;
        if (deps == 0) ready.push_back(g);
    }
    size_t comb_emitted = 0;
    while (!ready.empty()) {
        uint32_t g = ready.front();
        ready.pop_front();
        topo_.push_back(g);
        ++comb_emitted;
        for (const Sink& s : sinks_[gates_[g].output]) {
            if (s.is_po()) continue;
            const Gate& succ = gates_[s.gate];
            if (succ.kind == GateKind::Dff) continue;
            if (--pending[s.gate] == 0) ready.push_back(s.gate);
        }
    }
    size_t comb_total = 0;
    for (const auto& g : gates_)
        comb_total += (g.kind != GateKind::Dff);
    if (comb_emitted != comb_total) {
        // Name one net on a cycle for the error message.
        std::string witness = "?";
        for (uint32_t g = 0; g < gates_.size(); ++g)
            if (gates_[g].kind != GateKind::Dff && pending[g] > 0) {
                witness = names_[gates_[g].output];
                break;
            }
        caches_ok_ = false;
        fail(ErrorKind::Parse, "combinational loop through net '" + witness + "'");
    }

    lines_.clear();
    line_idx_.clear();
    for (NetId n = 0; n < names_.size(); ++n) {
        if (driver_[n] == NO_DRIVER) continue; // dead net after PI removal
        line_idx_.emplace(uint64_t(n) << 32 | 0u, uint32_t(lines_.size()));
        lines_.push_back(LineId{n, -1});
        if (sinks_[n].size() >= 2)
            for (int32_t b = 0; b < int32_t(sinks_[n].size()); ++b) {
                line_idx_.emplace(uint64_t(n) << 32 | uint32_t(b + 1),
                                  uint32_t(lines_.size()));
                lines_.push_back(LineId{n, b});
            }
    }

    caches_ok_ = true;
}

void Netlist::validate() const {
    for (NetId n = 0; n < names_.size(); ++n) {
        if (names_[n].empty()) fail(ErrorKind::Op, "unnamed net");
        auto it = by_name_.find(names_[n]);
        if (it == by_name_.end() || it->second != n)
            fail(ErrorKind::Op, "name table out of sync for '" + names_[n] + "'");
    }
    for (uint32_t g = 0; g < gates_.size(); ++g) {
        const Gate& gt = gates_[g];
        check_arity(gt.kind, gt.inputs.size());
        if (driver_[gt.output] != g)
            fail(ErrorKind::Op, "driver table out of sync for '" +
                                    names_[gt.output] + "'");
        if (gt.no_scan && gt.kind != GateKind::Dff)
            fail(ErrorKind::Op, "no_scan on non-DFF gate");
    }
    for (NetId po : pos_)
        if (std::count(pos_.begin(), pos_.end(), po) != 1)
            fail(ErrorKind::Op, "duplicate PO '" + names_[po] + "'");
    for (NetId pi : pis_)
        if (driver_[pi] != PI_DRIVER)
            fail(ErrorKind::Op, "PI table out of sync for '" + names_[pi] + "'");
    build_caches(); // throws on combinational loops
}

std::vector<uint64_t> Netlist::kind_histogram() const {
    std::vector<uint64_t> h(12, 0);
    for (const auto& g : gates_) h[size_t(g.kind)]++;
    return h;
}

// ---------------------------------------------------------------------------
// bench i/o

namespace {

struct Tok {
    std::string text;
    size_t col = 0; // 1-based
};

[[noreturn]] void parse_fail(const std::string& origin, size_t line, size_t col,
                             const std::string& msg) {
    fail(ErrorKind::Parse, origin + ":" + std::to_string(line) + ":" +
                               std::to_string(col) + ": " + msg);
}

bool kind_from_name(std::string t, GateKind& out) {
    for (char& c : t) c = char(std::toupper(uint8_t(c)));
    if (t == "AND") out = GateKind::And;
    else if (t == "NAND") out = GateKind::Nand;
    else if (t == "OR") out = GateKind::Or;
    else if (t == "NOR") out = GateKind::Nor;
    else if (t == "XOR") out = GateKind::Xor;
    else if (t == "XNOR") out = GateKind::Xnor;
    else if (t == "NOT" || t == "INV") out = GateKind::Not;
    else if (t == "BUF" || t == "BUFF") out = GateKind::Buf;
    else if (t == "MUX2" || t == "MUX") out = GateKind::Mux2;
    else if (t == "DFF") out = GateKind::Dff;
    else if (t == "CONST0") out = GateKind::Const0;
    else if (t == "CONST1") out = GateKind::Const1;
    else return false;
    return true;
}

} // namespace

Netlist parse_bench(std::istream& in, const std::string& origin) {
    Netlist nl;
    struct Ref {
        size_t line, col;
    };
    std::unordered_map<std::string, Ref> first_use;
    struct PendingGate {
        GateKind kind;
        std::string out;
        std::vector<std::string> args;
        bool no_scan;
        size_t line, col;
    };
    std::vector<PendingGate> pend_gates;
    std::vector<std::pair<std::string, Ref>> pend_pis, pend_pos;

    std::string raw;
    size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string comment;
        std::string text = raw;
        if (auto h = text.find('#'); h != std::string::npos) {
            comment = text.substr(h + 1);
            text = text.substr(0, h);
        }

        // Tokenize into names and the punctuation ( ) = ,
        std::vector<Tok> toks;
        size_t i = 0;
        auto is_name_char = [](char c) {
            return !std::isspace(uint8_t(c)) && c != '(' && c != ')' &&
                   c != '=' && c != ',' && c != '#';
        };
        while (i < text.size()) {
            char c = text[i];
            if (std::isspace(uint8_t(c))) {
                ++i;
                continue;
            }
            if (c == '(' || c == ')' || c == '=' || c == ',') {
                toks.push_back({std::string(1, c), i + 1});
                ++i;
                continue;
            }
            size_t start = i;
            while (i < text.size() && is_name_char(text[i])) ++i;
            toks.push_back({text.substr(start, i - start), start + 1});
        }
        if (toks.empty()) continue;

        auto expect = [&](size_t idx, const char* what) -> const Tok& {
            if (idx >= toks.size())
                parse_fail(origin, lineno,
                           toks.empty() ? 1 : toks.back().col + toks.back().text.size(),
                           std::string("expected ") + what);
            return toks[idx];
        };
        auto expect_punct = [&](size_t idx, const char* p) {
            const Tok& t = expect(idx, p);
            if (t.text != p)
                parse_fail(origin, lineno, t.col,
                           std::string("expected '") + p + "', got '" + t.text + "'");
        };

        std::string head = toks[0].text;
        std::string head_up = head;
        for (char& c : head_up) c = char(std::toupper(uint8_t(c)));

        if ((head_up == "INPUT" || head_up == "OUTPUT") && toks.size() >= 2 &&
            toks[1].text == "(") {
            expect_punct(1, "(");
            const Tok& name = expect(2, "net name");
            if (name.text == "(" || name.text == ")" || name.text == "=" ||
                name.text == ",")
                parse_fail(origin, lineno, name.col, "expected net name");
            expect_punct(3, ")");
            if (toks.size() > 4)
                parse_fail(origin, lineno, toks[4].col, "trailing tokens");
            if (head_up == "INPUT")
                pend_pis.push_back({name.text, {lineno, name.col}});
            else
                pend_pos.push_back({name.text, {lineno, name.col}});
            first_use.try_emplace(name.text, Ref{lineno, name.col});
            continue;
        }

        // Gate assignment: out = KIND ( args )
        expect_punct(1, "=");
        const Tok& kindTok = expect(2, "gate kind");
        GateKind kind;
        if (!kind_from_name(kindTok.text, kind))
            parse_fail(origin, lineno, kindTok.col,
                       "unknown gate kind '" + kindTok.text + "'");
        expect_punct(3, "(");
        std::vector<std::string> args;
        size_t idx = 4;
        if (expect(idx, "')' or operand").text != ")") {
            for (;;) {
                const Tok& a = expect(idx, "operand");
                if (a.text == "(" || a.text == ")" || a.text == "=" || a.text == ",")
                    parse_fail(origin, lineno, a.col, "expected operand name");
                args.push_back(a.text);
                first_use.try_emplace(a.text, Ref{lineno, a.col});
                ++idx;
                const Tok& sep = expect(idx, "',' or ')'");
                if (sep.text == ",") {
                    ++idx;
                    continue;
                }
                if (sep.text == ")") break;
                parse_fail(origin, lineno, sep.col,
                           "expected ',' or ')', got '" + sep.text + "'");
            }
        }
        // idx points at ')'
        if (idx + 1 < toks.size())
            parse_fail(origin, lineno, toks[idx + 1].col, "trailing tokens");

        bool no_scan = false;
        {
            std::string c = comment;
            c.erase(std::remove_if(c.begin(), c.end(),
                                   [](char ch) { return std::isspace(uint8_t(ch)); }),
                    c.end());
            no_scan = (c == "noscan");
        }
        first_use.try_emplace(toks[0].text, Ref{lineno, toks[0].col});
        pend_gates.push_back(
            {kind, toks[0].text, std::move(args), no_scan, lineno, kindTok.col});
    }

    // Build, reporting duplicates and arity problems at their source lines.
    for (auto& [name, ref] : pend_pis) {
        NetId n = nl.ensure_net(name);
        if (nl.driver_gate(n) != -1 || nl.is_pi(n))
            parse_fail(origin, ref.line, ref.col, "net '" + name + "' already driven");
        try {
            nl.add_pi(name);
        } catch (const Error& e) {
            parse_fail(origin, ref.line, ref.col, e.what());
        }
    }
    for (auto& pg : pend_gates) {
        std::vector<NetId> ins;
        ins.reserve(pg.args.size());
        for (auto& a : pg.args) ins.push_back(nl.ensure_net(a));
        NetId out = nl.ensure_net(pg.out);
        try {
            uint32_t g = nl.add_gate(pg.kind, std::move(ins), out);
            if (pg.no_scan && pg.kind == GateKind::Dff) nl.set_no_scan(g, true);
        } catch (const Error& e) {
            parse_fail(origin, pg.line, pg.col, e.what());
        }
    }
    for (auto& [name, ref] : pend_pos) {
        try {
            nl.add_po(nl.ensure_net(name));
        } catch (const Error& e) {
            parse_fail(origin, ref.line, ref.col, e.what());
        }
    }

    // Every referenced net needs a driver by now.
    for (NetId n = 0; n < nl.num_nets(); ++n) {
        bool driven = nl.is_pi(n) || nl.driver_gate(n) >= 0;
        if (!driven) {
            Ref r = first_use.count(nl.net_name(n)) ? first_use[nl.net_name(n)]
                                                    : Ref{0, 0};
            parse_fail(origin, r.line, r.col,
                       "undriven net '" + nl.net_name(n) + "'");
        }
    }

    nl.validate(); // arities already checked; this catches combinational loops
    return nl;
}

Netlist parse_bench_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::Io, "cannot open '" + path + "'");
    return parse_bench(f, path);
}

void write_bench(const Netlist& nl, std::ostream& out) {
    for (NetId pi : nl.pis()) out << "INPUT(" << nl.net_name(pi) << ")\n";
    for (NetId po : nl.pos()) out << "OUTPUT(" << nl.net_name(po) << ")\n";
    for (const Gate& g : nl.gates()) {
        out << nl.net_name(g.output) << " = ";
        // Standard spelling for buffers is BUFF.
        out << (g.kind == GateKind::Buf ? "BUFF" : kind_name(g.kind)) << "(";
        for (size_t i = 0; i < g.inputs.size(); ++i) {
            if (i) out << ", ";
            out << nl.net_name(g.inputs[i]);
        }
        out << ")";
        if (g.no_scan) out << " # noscan";
        out << "\n";
    }
}

void write_bench_file(const Netlist& nl, const std::string& path) {
    std::ofstream f(path);
    if (!f) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
    write_bench(nl, f);
    if (!f.good()) fail(ErrorKind::Io, "write failed for '" + path + "'");
}

} // namespace lockleak
