#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lockleak/error.hpp"
#include "lockleak/netlist.hpp"

using namespace lockleak;
using testhelp::nl_from_text;
using testhelp::nl_to_text;

TEST_CASE("bench writer output is a parse fixpoint") {
    Netlist nl = nl_from_text(testhelp::c17_text());
    std::string once = nl_to_text(nl);
    std::string twice = nl_to_text(nl_from_text(once));
    CHECK(once == twice);
    CHECK(nl.num_pis() == 5);
    CHECK(nl.num_pos() == 2);
    CHECK(nl.num_gates() == 6);
}

TEST_CASE("dialect covers every gate kind, comments, and noscan") {
    Netlist nl = nl_from_text(
        "# header comment\n"
        "INPUT(a)\n"
        "INPUT(b)\n"
        "INPUT(s)\n"
        "OUTPUT(y)\n"
        "OUTPUT(q)\n"
        "n1 = AND(a, b)   # trailing comment\n"
        "n2 = BUFF(n1)\n"
        "n3 = MUX2(s, a, n2)\n"
        "c0 = CONST0()\n"
        "c1 = CONST1()\n"
        "n4 = XNOR(n3, c1)\n"
        "y = NOR(n4, c0)\n"
        "q = DFF(y) # noscan\n");
    CHECK(nl.num_gates() == 8);
    CHECK(nl.has_dff());
    bool saw_noscan = false;
    for (const Gate& g : nl.gates())
        if (g.kind == GateKind::Dff) saw_noscan = g.no_scan;
    CHECK(saw_noscan);
    std::string once = nl_to_text(nl);
    // BUFF, the constants, and the noscan marker all survive the roundtrip
    CHECK(once.find("BUFF(") != std::string::npos);
    CHECK(once.find("CONST0()") != std::string::npos);
    CHECK(once.find("# noscan") != std::string::npos);
    CHECK(once == nl_to_text(nl_from_text(once)));
}

TEST_CASE("parse errors carry file and line position") {
    auto bad = [](const std::string& text) {
        try {
            nl_from_text(text, "t.bench");
            return std::string();
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parse);
            return std::string(e.what());
        }
    };
    CHECK(bad("INPUT(a)\nz = FROB(a)\n").find("t.bench:2") != std::string::npos);
    CHECK(bad("INPUT(a)\nOUTPUT(y)\n").find("'y'") != std::string::npos);
    CHECK(bad("INPUT(a)\nOUTPUT(a)\na = NOT(a)\n") != "");
    // combinational loop
    CHECK(bad("INPUT(a)\nOUTPUT(p)\np = AND(a, q)\nq = NOT(p)\n") != "");
}

TEST_CASE("topological order puts drivers before consumers") {
    Netlist nl = testhelp::random_netlist(5, 6, 40);
    std::vector<char> ready(nl.num_nets(), 0);
    for (NetId n = 0; n < nl.num_nets(); ++n)
        if (nl.is_pi(n)) ready[n] = 1;
    for (uint32_t gi : nl.topo_gates()) {
        const Gate& g = nl.gate(gi);
        if (g.kind != GateKind::Dff)
            for (NetId in : g.inputs) CHECK(ready[in] == 1);
        ready[g.output] = 1;
    }
    for (NetId po : nl.pos()) CHECK(ready[po] == 1);
}

TEST_CASE("line universe is stems plus branches of multi-sink nets") {
    Netlist nl = nl_from_text(testhelp::c17_text());
    // 11 driven nets; G3, G11, G16 each feed two sinks
    CHECK(nl.lines().size() == 17);
    size_t stems = 0, branches = 0;
    for (const LineId& l : nl.lines()) {
        if (l.is_stem()) ++stems;
        else ++branches;
        CHECK(nl.line_index(l) < nl.lines().size());
        CHECK(nl.parse_line_text(nl.line_text(l)) == l);
    }
    CHECK(stems == 11);
    CHECK(branches == 6);
    CHECK_THROWS_AS((void)nl.parse_line_text("nope"), Error);
    CHECK_THROWS_AS((void)nl.line_index(LineId{nl.find_net("G1"), 0}), Error);
}

TEST_CASE("census arithmetic on a hand-counted circuit") {
    Netlist nl = nl_from_text(testhelp::c17_text());
    LineCensus c = nl.census({});
    CHECK(c.pi_count == 5);
    CHECK(c.gate_count == 6);
    CHECK(c.fanout_branches == 6);
    CHECK(c.key_affected == 0);
    CHECK(c.eligible == 17);
    // marking two lines key-affected just shifts the eligible total
    std::vector<LineId> ka{nl.lines()[0], nl.lines()[3]};
    CHECK(nl.census(ka).eligible == 15);
}

TEST_CASE("driver_gate distinguishes PIs from gate outputs") {
    Netlist nl = nl_from_text(testhelp::c17_text());
    CHECK(nl.driver_gate(nl.find_net("G1")) == -1);
    int64_t d = nl.driver_gate(nl.find_net("G22"));
    REQUIRE(d >= 0);
    CHECK(nl.gate(uint32_t(d)).output == nl.find_net("G22"));
}

TEST_CASE("forward_net_mask follows fanout only") {
    Netlist nl = nl_from_text(testhelp::c17_text());
    NetId g11 = nl.find_net("G11");
    std::vector<NetId> seeds{g11};
    std::vector<char> m = nl.forward_net_mask(seeds, true);
    CHECK(m[g11] == 1);
    CHECK(m[nl.find_net("G16")] == 1);
    CHECK(m[nl.find_net("G19")] == 1);
    CHECK(m[nl.find_net("G22")] == 1);
    CHECK(m[nl.find_net("G23")] == 1);
    CHECK(m[nl.find_net("G10")] == 0);
    CHECK(m[nl.find_net("G1")] == 0);
    std::vector<char> noseed = nl.forward_net_mask(seeds, false);
    CHECK(noseed[g11] == 0);
}

TEST_CASE("pi_support collects the cone of each net") {
    Netlist nl = nl_from_text(testhelp::c17_text());
    auto sup = nl.pi_support();
    auto has = [&](NetId n, uint32_t pi) {
        return (sup[n][pi / 64] >> (pi % 64)) & 1;
    };
    NetId g10 = nl.find_net("G10");
    // G10 = NAND(G1, G3) depends on PIs 0 and 2 only
    CHECK(has(g10, 0));
    CHECK(!has(g10, 1));
    CHECK(has(g10, 2));
    CHECK(!has(g10, 3));
    CHECK(!has(g10, 4));
    NetId g23 = nl.find_net("G23");
    CHECK(!has(g23, 0));
    for (uint32_t pi = 1; pi < 5; ++pi) CHECK(has(g23, pi));
}

TEST_CASE("surgery keeps the netlist valid") {
    Netlist nl = nl_from_text(testhelp::c17_text());
    NetId g16 = nl.find_net("G16");
    NetId fresh = nl.fresh_net("tap");
    nl.add_gate(GateKind::Buf, {g16}, fresh);
    // move G16's other consumers onto the buffer output, except the buffer
    uint32_t except[] = {uint32_t(nl.num_gates() - 1)};
    uint32_t moved = nl.retarget_sinks(g16, fresh, except);
    CHECK(moved == 2);
    nl.validate();
    CHECK(nl.sinks(g16).size() == 1);
    CHECK(nl.sinks(fresh).size() == 2);
}

TEST_CASE("kind_histogram counts every gate") {
    Netlist nl = nl_from_text(testhelp::c17_text());
    auto h = nl.kind_histogram();
    size_t total = 0;
    for (size_t c : h) total += c;
    CHECK(total == nl.num_gates());
    CHECK(h[size_t(GateKind::Nand)] == 6);
}
