#include "lockleak/locking.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lockleak/error.hpp"
#include "lockleak/rng.hpp"

namespace lockleak {

const char* scheme_name(LockScheme s) {
    return s == LockScheme::XorRandom ? "xor" : "mux";
}

LockScheme scheme_from_name(const std::string& name) {
    if (name == "xor") return LockScheme::XorRandom;
    if (name == "mux") return LockScheme::MuxRandom;
    fail(ErrorKind::Config, "unknown lock scheme '" + name + "' (expected xor or mux)");
}

std::vector<bool> LockRecord::correct_key() const {
    std::vector<bool> k(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) k[i] = bits[i].correct;
    return k;
}

namespace {

std::string key_input_name(size_t i) { return "keyinput" + std::to_string(i); }

// Internal gate-output nets, ascending by id. PIs are excluded; PO drivers
// are legal sites (their PO slot is retargeted like any other sink).
std::vector<NetId> site_candidates(const Netlist& nl) {
    std::vector<NetId> out;
    for (NetId n = 0; n < nl.num_nets(); ++n)
        if (nl.driver_gate(n) >= 0) out.push_back(n);
    return out;
}

void check_lock_args(const Netlist& nl, size_t key_size, size_t candidates) {
    if (nl.has_dff())
        fail(ErrorKind::Op, "locking expects a combinational netlist");
    if (key_size == 0) fail(ErrorKind::Config, "key size must be at least 1");
    if (candidates == 0)
        fail(ErrorKind::Op, "netlist has no internal nets to lock");
    if (key_size > candidates)
        fail(ErrorKind::Op, "key size " + std::to_string(key_size) +
                                " exceeds the " + std::to_string(candidates) +
                                " available lock sites");
    for (size_t i = 0; i < key_size; ++i)
        if (nl.find_net(key_input_name(i)) != NO_NET)
            fail(ErrorKind::Op, "net name '" + key_input_name(i) +
                                    "' already in use; cannot add key inputs");
}

}  // namespace

LockResult lock_xor(const Netlist& nl, size_t key_size, uint64_t seed) {
    std::vector<NetId> cands = site_candidates(nl);
    check_lock_args(nl, key_size, cands.size());

    Rng rng(seed);
    Rng pick = rng.split("sites");
    Rng coin = rng.split("bits");
    std::vector<uint32_t> chosen =
        pick.sample_indices(static_cast<uint32_t>(cands.size()),
                            static_cast<uint32_t>(key_size));

    LockResult res{nl, {}};
    res.record.scheme = LockScheme::XorRandom;
    res.record.seed = seed;
    Netlist& out = res.netlist;
    for (size_t i = 0; i < key_size; ++i) {
        NetId site = cands[chosen[i]];
        bool correct = coin.coin();
        NetId kin = out.add_pi(key_input_name(i));
        NetId kout = out.fresh_net("kg" + std::to_string(i));
        out.retarget_sinks(site, kout, {});
        out.add_gate(correct ? GateKind::Xnor : GateKind::Xor, {site, kin}, kout);
        res.record.bits.push_back({key_input_name(i), correct,
                                   out.net_name(site), out.net_name(kout), ""});
    }
    out.validate();
    return res;
}

LockResult lock_mux(const Netlist& nl, size_t key_size, uint64_t seed) {
    std::vector<NetId> cands = site_candidates(nl);
    check_lock_args(nl, key_size, cands.size());

    Rng rng(seed);
    Rng pick = rng.split("sites");
    Rng coin = rng.split("bits");
    Rng dummy_rng = rng.split("dummies");
    std::vector<uint32_t> chosen =
        pick.sample_indices(static_cast<uint32_t>(cands.size()),
                            static_cast<uint32_t>(key_size));

    LockResult res{nl, {}};
    res.record.scheme = LockScheme::MuxRandom;
    res.record.seed = seed;
    Netlist& out = res.netlist;
    // The decoy universe is the original nets; key wiring added below never
    // becomes a decoy.
    NetId original_nets = nl.num_nets();
    for (size_t i = 0; i < key_size; ++i) {
        NetId site = cands[chosen[i]];
        bool correct = coin.coin();

        // Rejection-sample the decoy: anything inside the site's fanout cone
        // (or the site itself) would create a loop through the MUX.
        std::vector<NetId> seeds{site};
        std::vector<char> cone = out.forward_net_mask(seeds, true);
        NetId dummy = NO_NET;
        for (int attempt = 0; attempt < 64 && dummy == NO_NET; ++attempt) {
            NetId c = static_cast<NetId>(dummy_rng.below(original_nets));
            if (!cone[c]) dummy = c;
        }
        if (dummy == NO_NET) {
            std::vector<NetId> outside;
            for (NetId c = 0; c < original_nets; ++c)
                if (!cone[c]) outside.push_back(c);
            if (outside.empty())
                fail(ErrorKind::Op,
                     "no decoy net available outside the fanout cone of '" +
                         out.net_name(site) + "'");
            dummy = outside[dummy_rng.below(outside.size())];
        }

        NetId kin = out.add_pi(key_input_name(i));
        NetId kout = out.fresh_net("kg" + std::to_string(i));
        out.retarget_sinks(site, kout, {});
        // Select-1 routes in1; the correct bit must route the true net.
        NetId in0 = correct ? dummy : site;
        NetId in1 = correct ? site : dummy;
        out.add_gate(GateKind::Mux2, {kin, in0, in1}, kout);
        res.record.bits.push_back({key_input_name(i), correct,
                                   out.net_name(site), out.net_name(kout),
                                   out.net_name(dummy)});
    }
    out.validate();
    return res;
}

Netlist apply_key(const Netlist& nl, const LockRecord& record,
                  const std::vector<bool>& key) {
    if (key.size() != record.key_size())
        fail(ErrorKind::Op, "key has " + std::to_string(key.size()) +
                                " bits but the record expects " +
                                std::to_string(record.key_size()));
    Netlist out = nl;
    for (size_t i = 0; i < record.bits.size(); ++i) {
        const KeyBit& kb = record.bits[i];
        NetId kin = out.find_net(kb.key_input);
        if (kin == NO_NET || !out.is_pi(kin))
            fail(ErrorKind::Op, "key input '" + kb.key_input + "' not found");
        NetId kout = out.find_net(kb.key_gate_out);
        int32_t g = kout == NO_NET ? -1 : out.driver_gate(kout);
        if (g < 0)
            fail(ErrorKind::Op, "key gate driving '" + kb.key_gate_out + "' not found");
        const Gate& gate = out.gate(static_cast<uint32_t>(g));
        bool bit = key[i];
        NetId keep = NO_NET;
        if (gate.kind == GateKind::Xor || gate.kind == GateKind::Xnor) {
            if (gate.inputs.size() != 2 ||
                (gate.inputs[0] != kin && gate.inputs[1] != kin))
                fail(ErrorKind::Op, "key gate for '" + kb.key_input +
                                        "' no longer reads the key input");
            keep = gate.inputs[0] == kin ? gate.inputs[1] : gate.inputs[0];
            bool inv = (gate.kind == GateKind::Xor) ? bit : !bit;
            out.morph_gate(static_cast<uint32_t>(g),
                           inv ? GateKind::Not : GateKind::Buf, {keep});
        } else if (gate.kind == GateKind::Mux2) {
            if (gate.inputs.size() != 3 || gate.inputs[0] != kin)
                fail(ErrorKind::Op, "key gate for '" + kb.key_input +
                                        "' no longer selects on the key input");
            keep = bit ? gate.inputs[2] : gate.inputs[1];
            out.morph_gate(static_cast<uint32_t>(g), GateKind::Buf, {keep});
        } else {
            fail(ErrorKind::Op, "gate driving '" + kb.key_gate_out +
                                    "' is not a key gate kind");
        }
    }
    // Any remaining reader of a key-input net (payload taps added after
    // locking) sees the programmed constant.
    for (size_t i = 0; i < record.bits.size(); ++i) {
        NetId kin = out.find_net(record.bits[i].key_input);
        if (!out.sinks(kin).empty()) {
            NetId c = out.fresh_net("kc" + std::to_string(i));
            out.retarget_sinks(kin, c, {});
            out.add_gate(key[i] ? GateKind::Const1 : GateKind::Const0, {}, c);
        }
        out.remove_unused_pi(kin);
    }
    out.validate();
    return out;
}

void save_record(std::ostream& os, const LockRecord& record) {
    os << "scheme = " << scheme_name(record.scheme) << "\n";
    os << "seed = " << record.seed << "\n";
    os << "keys = " << record.bits.size() << "\n";
    for (size_t i = 0; i < record.bits.size(); ++i) {
        const KeyBit& kb = record.bits[i];
        os << "bit " << i << " input=" << kb.key_input
           << " correct=" << (kb.correct ? 1 : 0) << " site=" << kb.site
           << " gate=" << kb.key_gate_out
           << " dummy=" << (kb.dummy.empty() ? "-" : kb.dummy) << "\n";
    }
}

void save_record_file(const std::string& path, const LockRecord& record) {
    std::ofstream os(path);
    if (!os) fail(ErrorKind::Io, "cannot write '" + path + "'");
    save_record(os, record);
    if (!os) fail(ErrorKind::Io, "write failed for '" + path + "'");
}

namespace {

[[noreturn]] void rec_fail(const std::string& origin, size_t line,
                           const std::string& msg) {
    fail(ErrorKind::Parse, origin + ":" + std::to_string(line) + ": " + msg);
}

// "key=value" → value, insisting on the expected key.
std::string field(const std::string& tok, const std::string& key,
                  const std::string& origin, size_t line) {
    std::string prefix = key + "=";
    if (tok.rfind(prefix, 0) != 0)
        rec_fail(origin, line, "expected " + key + "=..., got '" + tok + "'");
    return tok.substr(prefix.size());
}

}  // namespace

LockRecord load_record(std::istream& is, const std::string& origin) {
    LockRecord rec;
    size_t expect = 0;
    bool have_scheme = false, have_keys = false;
    std::string raw;
    size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "scheme") {
            std::string eq, v;
            if (!(ls >> eq >> v) || eq != "=")
                rec_fail(origin, lineno, "expected scheme = <name>");
            rec.scheme = scheme_from_name(v);
            have_scheme = true;
        } else if (tok == "seed") {
            std::string eq;
            uint64_t v;
            if (!(ls >> eq >> v) || eq != "=")
                rec_fail(origin, lineno, "expected seed = <integer>");
            rec.seed = v;
        } else if (tok == "keys") {
            std::string eq;
            if (!(ls >> eq >> expect) || eq != "=")
                rec_fail(origin, lineno, "expected keys = <count>");
            have_keys = true;
        } else if (tok == "bit") {
            size_t idx;
            std::string f1, f2, f3, f4, f5;
            if (!(ls >> idx >> f1 >> f2 >> f3 >> f4 >> f5))
                rec_fail(origin, lineno, "malformed bit line");
            if (idx != rec.bits.size())
                rec_fail(origin, lineno, "bit lines out of order");
            KeyBit kb;
            kb.key_input = field(f1, "input", origin, lineno);
            std::string c = field(f2, "correct", origin, lineno);
            if (c != "0" && c != "1")
                rec_fail(origin, lineno, "correct= must be 0 or 1");
            kb.correct = c == "1";
            kb.site = field(f3, "site", origin, lineno);
            kb.key_gate_out = field(f4, "gate", origin, lineno);
            std::string d = field(f5, "dummy", origin, lineno);
            kb.dummy = d == "-" ? "" : d;
            rec.bits.push_back(std::move(kb));
        } else {
            rec_fail(origin, lineno, "unknown record line '" + tok + "'");
        }
    }
    if (!have_scheme) rec_fail(origin, lineno, "missing scheme line");
    if (!have_keys || rec.bits.size() != expect)
        rec_fail(origin, lineno,
                 "bit line count does not match keys = " + std::to_string(expect));
    return rec;
}

LockRecord load_record_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Io, "cannot read '" + path + "'");
    return load_record(is, path);
}

std::string key_text(const std::vector<bool>& key) {
    std::string s;
    s.reserve(key.size());
    for (bool b : key) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<bool> parse_key_text(const std::string& bits) {
    if (bits.empty()) fail(ErrorKind::Parse, "empty key string");
    std::vector<bool> key;
    key.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1')
            fail(ErrorKind::Parse,
                 std::string("key strings are over {0,1}; got '") + c + "'");
        key.push_back(c == '1');
    }
    return key;
}

void save_key_file(const std::string& path, const std::vector<bool>& key,
                   const std::string& header) {
    std::ofstream os(path);
    if (!os) fail(ErrorKind::Io, "cannot write '" + path + "'");
    if (!header.empty()) os << "# " << header << "\n";
    os << "key = " << key_text(key) << "\n";
    if (!os) fail(ErrorKind::Io, "write failed for '" + path + "'");
}

std::vector<bool> load_key_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Io, "cannot read '" + path + "'");
    std::string raw;
    size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string tok, eq, bits;
        if (!(ls >> tok)) continue;
        if (tok != "key" || !(ls >> eq >> bits) || eq != "=")
            fail(ErrorKind::Parse, path + ":" + std::to_string(lineno) +
                                       ": expected key = <bits>");
        return parse_key_text(bits);
    }
    fail(ErrorKind::Parse, path + ": no key line found");
}

}  // namespace lockleak
