#include "lockleak/logicsim.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "lockleak/wordops.hpp"

namespace lockleak {

Value value_from_char(char c) {
    switch (c) {
    case '0': return Value::Zero;
    case '1': return Value::One;
    case 'x':
    case 'X': return Value::X;
    }
    fail(ErrorKind::Parse, std::string("bad value character '") + c + "'");
}

std::string pattern_text(const Pattern& p) {
    std::string s;
    s.reserve(p.size());
    for (Value v : p) s.push_back(value_char(v));
    return s;
}

Pattern pattern_from_text(const std::string& s) {
    Pattern p;
    p.reserve(s.size());
    for (char c : s) p.push_back(value_from_char(c));
    return p;
}

PatternSet load_patterns(std::istream& in, const std::string& origin) {
    PatternSet ps;
    std::string raw;
    size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string text = raw.substr(0, raw.find('#'));
        // trim
        auto b = text.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = text.find_last_not_of(" \t\r");
        text = text.substr(b, e - b + 1);

        if (!have_header) {
            if (text.rfind("pis:", 0) != 0)
                fail(ErrorKind::Parse, origin + ":" + std::to_string(lineno) +
                                           ": expected 'pis:' header");
            std::istringstream ss(text.substr(4));
            std::string name;
            while (ss >> name) {
                if (std::find(ps.pi_names.begin(), ps.pi_names.end(), name) !=
                    ps.pi_names.end())
                    fail(ErrorKind::Parse, origin + ":" + std::to_string(lineno) +
                                               ": duplicate PI '" + name + "'");
                ps.pi_names.push_back(name);
            }
            if (ps.pi_names.empty())
                fail(ErrorKind::Parse, origin + ":" + std::to_string(lineno) +
                                           ": empty 'pis:' header");
            have_header = true;
            continue;
        }
        if (text.size() != ps.pi_names.size())
            fail(ErrorKind::Parse,
                 origin + ":" + std::to_string(lineno) + ": row width " +
                     std::to_string(text.size()) + " != " +
                     std::to_string(ps.pi_names.size()) + " PIs");
        Pattern row;
        row.reserve(text.size());
        for (size_t i = 0; i < text.size(); ++i) {
            char c = text[i];
            if (c != '0' && c != '1' && c != 'x' && c != 'X')
                fail(ErrorKind::Parse, origin + ":" + std::to_string(lineno) + ":" +
                                           std::to_string(i + 1) +
                                           ": bad value character '" + c + "'");
            row.push_back(value_from_char(c));
        }
        ps.rows.push_back(std::move(row));
    }
    if (!have_header)
        fail(ErrorKind::Parse, origin + ": empty pattern file");
    ps.provenance = "imported from " + origin;
    return ps;
}

PatternSet load_patterns_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::Io, "cannot open '" + path + "'");
    return load_patterns(f, path);
}

void save_patterns(const PatternSet& ps, std::ostream& out) {
    if (!ps.provenance.empty()) out << "# " << ps.provenance << "\n";
    out << "pis:";
    for (const auto& n : ps.pi_names) out << " " << n;
    out << "\n";
    for (const auto& row : ps.rows) out << pattern_text(row) << "\n";
}

void save_patterns_file(const PatternSet& ps, const std::string& path) {
    std::ofstream f(path);
    if (!f) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
    save_patterns(ps, f);
    if (!f.good()) fail(ErrorKind::Io, "write failed for '" + path + "'");
}

std::vector<uint32_t> pattern_column_map(const Netlist& nl, const PatternSet& ps) {
    std::unordered_map<std::string, uint32_t> col;
    for (uint32_t i = 0; i < ps.pi_names.size(); ++i) col[ps.pi_names[i]] = i;
    if (ps.pi_names.size() != nl.num_pis())
        fail(ErrorKind::Op, "pattern set covers " + std::to_string(ps.pi_names.size()) +
                                " PIs, netlist has " + std::to_string(nl.num_pis()));
    std::vector<uint32_t> map(nl.num_pis());
    for (size_t i = 0; i < nl.num_pis(); ++i) {
        auto it = col.find(nl.net_name(nl.pis()[i]));
        if (it == col.end())
            fail(ErrorKind::Op, "pattern set missing PI '" +
                                    nl.net_name(nl.pis()[i]) + "'");
        map[i] = it->second;
    }
    return map;
}

Pattern remap_pattern(const Pattern& row, std::span<const uint32_t> colmap) {
    Pattern out(colmap.size());
    for (size_t i = 0; i < colmap.size(); ++i) out[i] = row[colmap[i]];
    return out;
}

Value eval_gate(GateKind kind, std::span<const Value> ins) {
    auto vand = [](std::span<const Value> v) {
        bool x = false;
        for (Value a : v) {
            if (a == Value::Zero) return Value::Zero;
            x |= (a == Value::X);
        }
        return x ? Value::X : Value::One;
    };
    auto vor = [](std::span<const Value> v) {
        bool x = false;
        for (Value a : v) {
            if (a == Value::One) return Value::One;
            x |= (a == Value::X);
        }
        return x ? Value::X : Value::Zero;
    };
    auto vnot = [](Value a) {
        return a == Value::X ? Value::X
                             : (a == Value::Zero ? Value::One : Value::Zero);
    };
    auto vxor = [&](std::span<const Value> v) {
        int parity = 0;
        for (Value a : v) {
            if (a == Value::X) return Value::X;
            parity ^= int(a);
        }
        return parity ? Value::One : Value::Zero;
    };
    switch (kind) {
    case GateKind::And: return vand(ins);
    case GateKind::Nand: return vnot(vand(ins));
    case GateKind::Or: return vor(ins);
    case GateKind::Nor: return vnot(vor(ins));
    case GateKind::Xor: return vxor(ins);
    case GateKind::Xnor: return vnot(vxor(ins));
    case GateKind::Not: return vnot(ins[0]);
    case GateKind::Buf:
    case GateKind::Dff: return ins[0];
    case GateKind::Const0: return Value::Zero;
    case GateKind::Const1: return Value::One;
    case GateKind::Mux2: {
        Value s = ins[0], a = ins[1], b = ins[2];
        if (s == Value::Zero) return a;
        if (s == Value::One) return b;
        return (a == b && a != Value::X) ? a : Value::X;
    }
    }
    return Value::X;
}

std::vector<Value> simulate3(const Netlist& nl, std::span<const Value> pi_values) {
    if (nl.has_dff())
        fail(ErrorKind::Op, "simulate3 on a sequential netlist; use simulate_cycles");
    if (pi_values.size() != nl.num_pis())
        fail(ErrorKind::Op, "pattern width " + std::to_string(pi_values.size()) +
                                " != " + std::to_string(nl.num_pis()) + " PIs");
    std::vector<Value> val(nl.num_nets(), Value::X);
    for (size_t i = 0; i < nl.num_pis(); ++i) val[nl.pis()[i]] = pi_values[i];
    std::vector<Value> ins;
    for (uint32_t g : nl.topo_gates()) {
        const Gate& gt = nl.gate(g);
        ins.clear();
        for (NetId in : gt.inputs) ins.push_back(val[in]);
        val[gt.output] = eval_gate(gt.kind, ins);
    }
    return val;
}

namespace {

// Evaluates gates over one contiguous word range [w0, w1); used whole-range
// single-threaded or per-slice under threads. Patterns beyond npat in the
// last word are zero in both planes and harmless.
void eval_range(const Netlist& nl, PackedVals& m, bool threeval, size_t w0,
                size_t w1) {
    const WordOps& K = wordops();
    const size_t n = w1 - w0;
    if (n == 0) return;
    const size_t W = m.nwords;
    auto O = [&](NetId net) { return m.ones.data() + net * W + w0; };
    auto X = [&](NetId net) { return m.xs.data() + net * W + w0; };

    for (uint32_t gi : nl.topo_gates()) {
        const Gate& g = nl.gate(gi);
        uint64_t* oo = O(g.output);
        uint64_t* ox = X(g.output);
        switch (g.kind) {
        case GateKind::Const0:
            std::memset(oo, 0, n * 8);
            if (threeval) std::memset(ox, 0, n * 8);
            continue;
        case GateKind::Const1:
            std::memset(oo, 0xff, n * 8);
            if (threeval) std::memset(ox, 0, n * 8);
            continue;
        case GateKind::Buf:
        case GateKind::Dff:
            std::memcpy(oo, O(g.inputs[0]), n * 8);
            if (threeval) std::memcpy(ox, X(g.inputs[0]), n * 8);
            continue;
        case GateKind::Not:
            if (threeval)
                K.not3(oo, ox, O(g.inputs[0]), X(g.inputs[0]), n);
            else
                K.not2(oo, O(g.inputs[0]), n);
            continue;
        case GateKind::Mux2:
            if (threeval)
                K.mux3(oo, ox, O(g.inputs[0]), X(g.inputs[0]), O(g.inputs[1]),
                       X(g.inputs[1]), O(g.inputs[2]), X(g.inputs[2]), n);
            else
                K.mux2(oo, O(g.inputs[0]), O(g.inputs[1]), O(g.inputs[2]), n);
            continue;
        default: break;
        }
        // k-ary AND/NAND/OR/NOR/XOR/XNOR: fold inputs into the output row
        std::memcpy(oo, O(g.inputs[0]), n * 8);
        if (threeval) std::memcpy(ox, X(g.inputs[0]), n * 8);
        for (size_t i = 1; i < g.inputs.size(); ++i) {
            const uint64_t* bo = O(g.inputs[i]);
            const uint64_t* bx = X(g.inputs[i]);
            if (threeval) {
                switch (g.kind) {
                case GateKind::And:
                case GateKind::Nand: K.and3(oo, ox, oo, ox, bo, bx, n); break;
                case GateKind::Or:
                case GateKind::Nor: K.or3(oo, ox, oo, ox, bo, bx, n); break;
                default: K.xor3(oo, ox, oo, ox, bo, bx, n); break;
                }
            } else {
                switch (g.kind) {
                case GateKind::And:
                case GateKind::Nand: K.and2(oo, oo, bo, n); break;
                case GateKind::Or:
                case GateKind::Nor: K.or2(oo, oo, bo, n); break;
                default: K.xor2(oo, oo, bo, n); break;
                }
            }
        }
        if (g.kind == GateKind::Nand || g.kind == GateKind::Nor ||
            g.kind == GateKind::Xnor) {
            if (threeval)
                K.not3(oo, ox, oo, ox, n);
            else
                K.not2(oo, oo, n);
        }
    }
}

} // namespace

PackedVals simulate_batch(const Netlist& nl, std::span<const Pattern> rows,
                          unsigned threads) {
    if (nl.has_dff())
        fail(ErrorKind::Op, "simulate_batch on a sequential netlist");
    PackedVals m;
    m.npat = rows.size();
    m.nwords = (m.npat + 63) / 64;
    if (m.nwords == 0) m.nwords = 1;
    m.ones.assign(nl.num_nets() * m.nwords, 0);
    m.xs.assign(nl.num_nets() * m.nwords, 0);

    bool threeval = false;
    for (const Pattern& r : rows) {
        if (r.size() != nl.num_pis())
            fail(ErrorKind::Op, "pattern width " + std::to_string(r.size()) +
                                    " != " + std::to_string(nl.num_pis()) + " PIs");
        for (Value v : r) threeval |= (v == Value::X);
    }

    for (size_t i = 0; i < nl.num_pis(); ++i) {
        NetId net = nl.pis()[i];
        auto o = m.o(net);
        auto x = m.x(net);
        for (size_t j = 0; j < rows.size(); ++j) {
            uint64_t bit = uint64_t(1) << (j % 64);
            Value v = rows[j][i];
            if (v == Value::One) o[j / 64] |= bit;
            else if (v == Value::X) x[j / 64] |= bit;
        }
    }

    if (threads <= 1 || m.nwords == 1) {
        eval_range(nl, m, threeval, 0, m.nwords);
        return m;
    }
    // Word-sliced fork/join: slices are independent, so the result cannot
    // depend on the partitioning.
    unsigned nt = std::min<size_t>(threads, m.nwords);
    std::vector<std::thread> pool;
    size_t per = (m.nwords + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        size_t w0 = t * per, w1 = std::min(m.nwords, w0 + per);
        if (w0 >= w1) break;
        pool.emplace_back([&, w0, w1] { eval_range(nl, m, threeval, w0, w1); });
    }
    for (auto& th : pool) th.join();
    return m;
}

std::vector<uint32_t> dff_gates(const Netlist& nl) {
    std::vector<uint32_t> out;
    for (uint32_t g = 0; g < nl.num_gates(); ++g)
        if (nl.gate(g).kind == GateKind::Dff) out.push_back(g);
    return out;
}

CycleResult simulate_cycles(const Netlist& nl, std::span<const Pattern> per_cycle,
                            std::span<const Value> initial_state) {
    auto dffs = dff_gates(nl);
    if (initial_state.size() != dffs.size())
        fail(ErrorKind::Op, "initial state width " +
                                std::to_string(initial_state.size()) + " != " +
                                std::to_string(dffs.size()) + " DFFs");
    CycleResult res;
    std::vector<Value> state(initial_state.begin(), initial_state.end());
    std::vector<Value> val(nl.num_nets(), Value::X);
    std::vector<Value> ins;
    for (const Pattern& pat : per_cycle) {
        if (pat.size() != nl.num_pis())
            fail(ErrorKind::Op, "pattern width " + std::to_string(pat.size()) +
                                    " != " + std::to_string(nl.num_pis()) + " PIs");
        for (size_t i = 0; i < nl.num_pis(); ++i) val[nl.pis()[i]] = pat[i];
        for (size_t d = 0; d < dffs.size(); ++d)
            val[nl.gate(dffs[d]).output] = state[d];
        for (uint32_t g : nl.topo_gates()) {
            const Gate& gt = nl.gate(g);
            if (gt.kind == GateKind::Dff) continue; // output held at state
            ins.clear();
            for (NetId in : gt.inputs) ins.push_back(val[in]);
            val[gt.output] = eval_gate(gt.kind, ins);
        }
        std::vector<Value> po;
        po.reserve(nl.num_pos());
        for (NetId p : nl.pos()) po.push_back(val[p]);
        res.po_per_cycle.push_back(std::move(po));
        for (size_t d = 0; d < dffs.size(); ++d)
            state[d] = val[nl.gate(dffs[d]).inputs[0]];
    }
    res.final_state = std::move(state);
    return res;
}

} // namespace lockleak
