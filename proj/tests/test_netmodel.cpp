#include <doctest.h>

#include <algorithm>

#include "protcoord/error.hpp"
#include "protcoord/netmodel.hpp"
#include "random_network.hpp"

using namespace protcoord;

namespace {

constexpr const char* kMinimal = R"({
  "buses": [{"id": "a", "nominal_voltage": 20000}],
  "sources": [{"id": "g", "bus": "a", "kind": "infinite_grid", "internal_impedance": {"r": 0.1, "x": 1.0}}]
})";

// Two buses joined by a tie, grid at A, DG at B.
constexpr const char* kTwoBusTie = R"({
  "buses": [{"id": "A", "nominal_voltage": 20000}, {"id": "B", "nominal_voltage": 20000}],
  "branches": [{"id": "t", "from_bus": "A", "to_bus": "B", "kind": "tie", "impedance": {"r": 1, "x": 1}}],
  "sources": [
    {"id": "g", "bus": "A", "kind": "infinite_grid", "internal_impedance": {"r": 0.1, "x": 1.0}},
    {"id": "dg", "bus": "B", "kind": "sync_dg", "internal_impedance": {"r": 1, "x": 5}}
  ],
  "relays": [{"id": "r1", "branch": "t", "pickup_a": 100, "tds": 0.5,
              "curve": {"family": "iec_standard_inverse"}}],
  "ufcl": {"tie_branch": "t", "r_limit": 50, "downstream_end": "B"}
})";

Network bundled() { return load_network_file(bundled_dataset_path()); }

bool has_violation(const std::vector<Violation>& v, const std::string& id, const std::string& rule) {
    return std::find(v.begin(), v.end(), Violation{id, rule}) != v.end();
}

}  // namespace

TEST_CASE("minimal document loads with defaults applied") {
    const Network net = load_network(kMinimal);
    CHECK(net.buses.size() == 1);
    CHECK(net.sources.at(0).emf_pu == 1.0);
    CHECK(net.sources.at(0).in_service);
    CHECK(net.s_base_va == 10e6);
    CHECK(validate(net).empty());
}

TEST_CASE("two-bus document: named curve family and ufcl defaults") {
    const Network net = load_network(kTwoBusTie);
    CHECK(net.relays.at(0).curve.a == 0.14);
    CHECK(net.relays.at(0).curve.c == 0.02);
    CHECK(net.relays.at(0).orientation == Orientation::from_to);
    REQUIRE(net.ufcl);
    CHECK(net.ufcl->r_normal == 0.0);
    CHECK(net.branches.at(0).referred_side == Side::from);
    CHECK(validate(net).empty());
}

TEST_CASE("bundled dataset: seven buses, six relays, two DG units, no violations") {
    const Network net = bundled();
    CHECK(net.buses.size() == 7);
    CHECK(net.relays.size() == 6);
    CHECK(net.dg_ids() == std::vector<std::string>{"dg1", "dg2"});
    CHECK(validate(net).empty());
}

TEST_CASE("undefined bus reference names the dangling id") {
    const std::string doc = R"({
      "buses": [{"id": "a", "nominal_voltage": 20000}],
      "sources": [{"id": "g", "bus": "bus9", "kind": "infinite_grid", "internal_impedance": {"r": 0, "x": 1}}]
    })";
    try {
        load_network(doc);
        FAIL("expected ReferenceError");
    } catch (const ReferenceError& e) {
        CHECK(e.dangling_id() == "bus9");
        CHECK(std::string(e.what()).find("bus9") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry a line locus, field errors a JSON pointer") {
    try {
        load_network("{\n  \"buses\": [\n    {\"id\": \"a\",, }\n  ]\n}");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.locus() == "line 3");
    }

    const std::string bad_pickup = R"({
      "buses": [{"id": "A", "nominal_voltage": 20000}, {"id": "B", "nominal_voltage": 20000}],
      "branches": [{"id": "l", "from_bus": "A", "to_bus": "B", "kind": "line", "impedance": {"r": 1, "x": 1}}],
      "sources": [{"id": "g", "bus": "A", "kind": "infinite_grid", "internal_impedance": {"r": 0, "x": 1}}],
      "relays": [{"id": "r", "branch": "l", "pickup_a": "ten", "tds": 0.5, "curve": {"a": 1, "b": 0, "c": 1}}]
    })";
    try {
        load_network(bad_pickup);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.locus() == "/relays/0/pickup_a");
    }

    std::string bad_kind = kMinimal;
    bad_kind.replace(bad_kind.find("infinite_grid"), 13, "windmill");
    CHECK_THROWS_AS(load_network(bad_kind), FormatError);
}

TEST_CASE("curve family rules at load time") {
    std::string doc = kTwoBusTie;
    const std::string named = R"({"family": "iec_standard_inverse"})";
    auto with_curve = [&](const std::string& curve) {
        std::string d = doc;
        d.replace(d.find(named), named.size(), curve);
        return d;
    };
    CHECK_THROWS_AS(load_network(with_curve(R"({"family": "custom"})")), FormatError);
    CHECK_THROWS_AS(load_network(with_curve(R"({"family": "mystery"})")), FormatError);
    CHECK_THROWS_AS(load_network(with_curve(R"({"family": "iec_very_inverse", "a": 1, "b": 0, "c": 1})")),
                    FormatError);
    const Network net = load_network(with_curve(R"({"a": 2, "b": 0.1, "c": 0.5})"));
    CHECK(net.relays[0].curve_family == "custom");
    CHECK(net.relays[0].curve.b == 0.1);
}

TEST_CASE("validate: single-rule violations") {
    Network net = load_network(kTwoBusTie);

    SUBCASE("pickup of zero") {
        net.relays[0].pickup_a = 0.0;
        const auto v = validate(net);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == Violation{"r1", "pickup_a > 0"});
    }
    SUBCASE("island bus") {
        net.buses.push_back({"island", 20000});
        const auto v = validate(net);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == Violation{"island", "graph connected"});
    }
    SUBCASE("zero branch impedance") {
        net.branches[0].impedance = 0.0;
        CHECK(has_violation(validate(net), "t", "|impedance| > 0"));
    }
    SUBCASE("emf out of range") {
        net.sources[1].emf_pu = 1.3;
        CHECK(validate(net) == std::vector<Violation>{{"dg", "emf_pu in (0.8, 1.2]"}});
    }
    SUBCASE("no grid") {
        net.sources.erase(net.sources.begin());
        CHECK(has_violation(validate(net), "network", "infinite_grid source present"));
    }
    SUBCASE("curve constants") {
        net.relays[0].curve = {0.0, -1.0, 0.0};
        const auto v = validate(net);
        CHECK(has_violation(v, "r1", "a > 0"));
        CHECK(has_violation(v, "r1", "b >= 0"));
        CHECK(has_violation(v, "r1", "c > 0"));
    }
    SUBCASE("negative load resistance") {
        net.loads.push_back({"ld", "A", {-1.0, 1.0}});
        CHECK(validate(net) == std::vector<Violation>{{"ld", "Re(impedance) >= 0"}});
    }
    SUBCASE("pair with main == backup") {
        net.pairs.push_back({"r1", "r1", "B"});
        CHECK(validate(net) == std::vector<Violation>{{"r1/r1@B", "main != backup"}});
    }
    SUBCASE("ufcl limits") {
        net.ufcl->r_limit = 0.0;
        CHECK(validate(net) == std::vector<Violation>{{"ufcl", "r_limit > r_normal >= 0"}});
    }
    SUBCASE("ufcl orientation") {
        net.ufcl->downstream_end = "A";
        CHECK(validate(net) == std::vector<Violation>{{"A", "downstream_end lies beyond the tie"}});
    }
    SUBCASE("duplicate ids") {
        net.buses.push_back({"A", 400});
        CHECK(has_violation(validate(net), "A", "unique id"));
    }
}

TEST_CASE("validate is pure and idempotent") {
    Network net = bundled();
    net.relays[2].tds = -1.0;
    net.buses.push_back({"x", 0.0});
    const auto first = validate(net);
    CHECK(first == validate(net));
    CHECK(first.size() == 3);
}

TEST_CASE("per unit: line ohms on a 20 kV, 10 MVA base") {
    Network net = load_network(kTwoBusTie);
    net.branches[0].impedance = {9.4, 3.48};
    const PuNetwork pu = to_per_unit(net);
    CHECK(pu.z_base(0) == doctest::Approx(40.0));
    CHECK(pu.branches[0].z.real() == doctest::Approx(0.235).epsilon(1e-14));
    CHECK(pu.branches[0].z.imag() == doctest::Approx(0.087).epsilon(1e-14));
    CHECK(pu.i_base(0) == doctest::Approx(10e6 / (std::sqrt(3.0) * 20e3)));
}

TEST_CASE("per unit: transformer ohms follow the declared referred side") {
    Network net = load_network(kTwoBusTie);
    net.buses[1].nominal_voltage = 400.0;
    net.branches[0].kind = BranchKind::transformer;
    net.branches[0].impedance = {0.0, 1.6};
    CHECK(to_per_unit(net).branches[0].z.imag() == doctest::Approx(1.6 / 40.0));
    net.branches[0].referred_side = Side::to;
    CHECK(to_per_unit(net).branches[0].z.imag() == doctest::Approx(1.6 / (400.0 * 400.0 / 10e6)));
}

TEST_CASE("per unit: voltage mismatch across a line is rejected") {
    Network net = load_network(kTwoBusTie);
    net.buses[1].nominal_voltage = 400.0;
    CHECK_THROWS_AS(to_per_unit(net), TopologyError);
}

TEST_CASE("per unit: induction multiplier applied and undone") {
    Network net = with_source_kind(load_network(kTwoBusTie), "dg", SourceKind::induction_dg);
    const PuNetwork pu = to_per_unit(net);
    CHECK(std::abs(pu.sources[1].z - Complex(1, 5) * 1.05 / 40.0) < 1e-15);
    CHECK(std::abs(from_per_unit(pu).sources[1].internal_impedance - Complex(1, 5)) < 1e-14);
}

TEST_CASE("per unit round trip is the identity to 1e-12 on random networks") {
    auto rel = [](Complex a, Complex b) { return std::abs(a - b) / std::abs(b); };
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        testing::NetworkDice dice(seed);
        const Network net = testing::random_connected(dice);
        REQUIRE(validate(net).empty());
        const Network back = from_per_unit(to_per_unit(net));
        for (std::size_t i = 0; i < net.branches.size(); ++i)
            CHECK(rel(back.branches[i].impedance, net.branches[i].impedance) < 1e-12);
        for (std::size_t i = 0; i < net.sources.size(); ++i) {
            CHECK(rel(back.sources[i].internal_impedance, net.sources[i].internal_impedance) < 1e-12);
            CHECK(back.sources[i].emf_pu == net.sources[i].emf_pu);
        }
        for (std::size_t i = 0; i < net.loads.size(); ++i)
            CHECK(rel(back.loads[i].impedance, net.loads[i].impedance) < 1e-12);
        for (std::size_t i = 0; i < net.buses.size(); ++i)
            CHECK(back.buses[i].nominal_voltage == net.buses[i].nominal_voltage);
    }
}

TEST_CASE("partition: two buses joined by a tie") {
    const Network net = load_network(kTwoBusTie);
    const TiePartition p = partition_by_tie(net, "t");
    CHECK(p.upstream == std::set<std::string>{"A"});
    CHECK(p.downstream == std::set<std::string>{"B"});
}

TEST_CASE("partition: bundled dataset puts both DG buses downstream") {
    const Network net = bundled();
    const TiePartition p = partition_by_tie(net, net.ufcl->tie_branch);
    for (const auto& id : net.dg_ids()) CHECK(p.downstream.contains(net.source(id).bus));
    CHECK(p.upstream == std::set<std::string>{"bus1", "bus2", "bus3", "bus4"});
}

TEST_CASE("partition: failures") {
    Network net = bundled();
    CHECK_THROWS_AS(partition_by_tie(net, "nope"), TopologyError);
    net.branches.push_back({"loop", "bus3", "bus7", BranchKind::line, {1.0, 2.0}});
    try {
        partition_by_tie(net, "tie25");
        FAIL("expected TopologyError");
    } catch (const TopologyError& e) {
        CHECK(std::string(e.what()).find("tie removal does not disconnect") != std::string::npos);
    }
    CHECK(has_violation(validate(net), "tie25", "tie removal disconnects the graph"));
}

TEST_CASE("partition is a true 2-partition on random radial networks") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        testing::NetworkDice dice(seed);
        const Network net = testing::random_radial_with_dg(dice).net;
        REQUIRE(validate(net).empty());
        const TiePartition p = partition_by_tie(net, net.ufcl->tie_branch);
        CHECK(p.upstream.size() + p.downstream.size() == net.buses.size());
        for (const auto& b : p.upstream) CHECK_FALSE(p.downstream.contains(b));
        CHECK(p.upstream.contains("u0"));
        CHECK(p.downstream.contains(net.ufcl->downstream_end));
    }
}

TEST_CASE("derived networks are pure copies") {
    const Network net = bundled();
    const Network one = with_dg_in_service(net, {"dg1"});
    CHECK(one.source("dg1").in_service);
    CHECK_FALSE(one.source("dg2").in_service);
    CHECK(net.source("dg2").in_service);
    CHECK_FALSE(without_dg(net).source("dg1").in_service);
    CHECK(without_dg(net).source("grid").in_service);
    CHECK_THROWS_AS(with_dg_in_service(net, {"grid"}), Error);
    CHECK(with_ufcl_limit(net, 196.0).ufcl->r_limit == 196.0);
    CHECK(effective_source_impedance(net, with_source_kind(net, "dg1", SourceKind::induction_dg).source("dg1")) ==
          net.source("dg1").internal_impedance * 1.05);
}
