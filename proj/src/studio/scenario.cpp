#include <algorithm>
#include <array>
#include <set>

#include "protcoord/error.hpp"
#include "protcoord/relaycurve.hpp"
#include "protcoord/studio.hpp"

namespace protcoord {

namespace {

constexpr std::array kScenarios{
    ScenarioId::s0_no_dg,         ScenarioId::s1_dg1,           ScenarioId::s2_dg1_ufcl,
    ScenarioId::s3_dg1_dg2,       ScenarioId::s4_dg1_dg2_ufcl,  ScenarioId::s5_induction_dg1,
    ScenarioId::s6_induction_dg1_ufcl,
};

std::vector<std::string> distinct_pair_buses(const Network& net) {
    std::vector<std::string> out;
    for (const auto& p : net.pairs)
        if (std::find(out.begin(), out.end(), p.fault_bus) == out.end()) out.push_back(p.fault_bus);
    return out;
}

FaultSide side_of(const Network& net, const std::string& bus) {
    return net.ufcl ? classify_fault_side(net, *net.ufcl, bus) : FaultSide::upstream;
}

StudyReport run_unchecked(const Network& base, const Scenario& sc, const StudyOptions& opts) {
    Network net = with_dg_in_service(base, std::set<std::string>(sc.dg_in_service.begin(), sc.dg_in_service.end()));
    if (sc.induction_dg1) net = with_source_kind(net, net.dg_ids().at(0), SourceKind::induction_dg);

    StudyReport rep;
    rep.scenario = sc.id;

    std::vector<std::string> buses;
    for (const auto& b : sc.fault_buses) {
        if (!net.bus_index(b)) throw ReferenceError(b, "scenario fault bus list");
        if (std::find(buses.begin(), buses.end(), b) == buses.end()) buses.push_back(b);
    }

    double r_limit = 0.0;
    if (sc.ufcl_enabled) {
        if (!net.ufcl) throw Error("scenario enables the ufcl but the network has none");
        if (opts.fixed_ufcl_ohms) {
            r_limit = *opts.fixed_ufcl_ohms;
        } else {
            std::optional<std::string> bus = opts.sizing_bus;
            for (std::size_t i = 0; !bus && i < buses.size(); ++i)
                if (side_of(net, buses[i]) == FaultSide::upstream) bus = buses[i];
            if (!bus) throw SizingError("no upstream fault bus to size the ufcl against");
            rep.sizing = size_ufcl_to_no_dg(net, *bus, opts.sizing);
            r_limit = rep.sizing->r_star;
        }
        net = with_ufcl_limit(net, r_limit);
    }

    std::vector<FaultJob> jobs;
    std::vector<FaultSide> sides;
    for (const auto& b : buses) {
        const FaultSide side = side_of(net, b);
        const double r = sc.ufcl_enabled ? effective_resistance(*net.ufcl, side) : 0.0;
        jobs.push_back({FaultSpec{b}, r});
        sides.push_back(side);
    }
    const PuNetwork pu = to_per_unit(net);
    std::vector<FaultResult> results = sweep_faults(pu, jobs);

    std::map<std::string, FaultResult> by_bus;
    Network checked = net;
    checked.pairs.clear();
    for (std::size_t i = 0; i < buses.size(); ++i) {
        FaultTable t;
        t.fault_bus = buses[i];
        t.side = sides[i];
        t.ufcl_ohms = jobs[i].ufcl_ohms;
        t.fault_current_a = results[i].fault_current_a();
        for (const auto& p : net.pairs) {
            if (p.fault_bus != buses[i]) continue;
            checked.pairs.push_back(p);
            for (const auto& [id, role] : {std::pair{p.main, "main"}, std::pair{p.backup, "backup"}}) {
                const double amps = results[i].relay_currents.at(id);
                t.rows.push_back({id, role, amps, operate_time(net.relay(id), amps).time_s});
            }
        }
        t.result = std::move(results[i]);
        by_bus.emplace(buses[i], t.result);
        rep.faults.push_back(std::move(t));
    }
    rep.coordination = check_pairs(checked, by_bus, opts.band);
    rep.network = std::move(net);
    return rep;
}

}  // namespace

std::string_view to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::s0_no_dg: return "s0_no_dg";
        case ScenarioId::s1_dg1: return "s1_dg1";
        case ScenarioId::s2_dg1_ufcl: return "s2_dg1_ufcl";
        case ScenarioId::s3_dg1_dg2: return "s3_dg1_dg2";
        case ScenarioId::s4_dg1_dg2_ufcl: return "s4_dg1_dg2_ufcl";
        case ScenarioId::s5_induction_dg1: return "s5_induction_dg1";
        case ScenarioId::s6_induction_dg1_ufcl: return "s6_induction_dg1_ufcl";
    }
    return "?";
}

// Accepts the full id or its leading token ("s2").
ScenarioId parse_scenario_id(std::string_view text) {
    for (ScenarioId id : kScenarios) {
        const std::string_view name = to_string(id);
        if (text == name || text == name.substr(0, name.find('_'))) return id;
    }
    throw Error("unknown scenario \"" + std::string(text) + "\"");
}

std::span<const ScenarioId> all_scenarios() { return kScenarios; }

Scenario make_scenario(const Network& net, ScenarioId id, std::vector<std::string> fault_buses) {
    Scenario sc;
    sc.id = id;
    sc.fault_buses = fault_buses.empty() ? distinct_pair_buses(net) : std::move(fault_buses);

    int dg_count = 0;
    switch (id) {
        case ScenarioId::s0_no_dg: break;
        case ScenarioId::s1_dg1: dg_count = 1; break;
        case ScenarioId::s2_dg1_ufcl: dg_count = 1; sc.ufcl_enabled = true; break;
        case ScenarioId::s3_dg1_dg2: dg_count = 2; break;
        case ScenarioId::s4_dg1_dg2_ufcl: dg_count = 2; sc.ufcl_enabled = true; break;
        case ScenarioId::s5_induction_dg1: dg_count = 1; sc.induction_dg1 = true; break;
        case ScenarioId::s6_induction_dg1_ufcl:
            dg_count = 1;
            sc.induction_dg1 = true;
            sc.ufcl_enabled = true;
            break;
    }
    const auto dgs = net.dg_ids();
    if (static_cast<int>(dgs.size()) < dg_count)
        throw Error(std::string(to_string(id)) + " needs " + std::to_string(dg_count) + " DG sources, network has " +
                    std::to_string(dgs.size()));
    sc.dg_in_service.assign(dgs.begin(), dgs.begin() + dg_count);
    if (sc.ufcl_enabled && !net.ufcl) throw Error(std::string(to_string(id)) + " requires a ufcl in the network");
    return sc;
}

StudyReport run_scenario(const Network& net, const Scenario& scenario, const StudyOptions& opts) {
    try {
        return run_unchecked(net, scenario, opts);
    } catch (const Error& e) {
        throw Error(std::string(to_string(scenario.id)) + ": " + e.what());
    }
}

}  // namespace protcoord
