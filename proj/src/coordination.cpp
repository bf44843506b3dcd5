#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "protcoord/coordination.hpp"
#include "protcoord/error.hpp"
#include "protcoord/relaycurve.hpp"

namespace protcoord {

namespace {

// Absorbs rounding in differences of printed or computed times so that a
// CTI of exactly 0.3 s is not reported as 0.29999999999999993.
constexpr double kBandSlack = 1e-9;

double relay_current(const FaultResult& r, const std::string& relay) {
    auto it = r.relay_currents.find(relay);
    if (it == r.relay_currents.end())
        throw Error("no current for relay \"" + relay + "\" in fault result at " + r.fault_bus);
    return it->second;
}

const FaultResult& result_for(const std::map<std::string, FaultResult>& results, const CoordinationPair& p) {
    auto it = results.find(p.fault_bus);
    if (it == results.end())
        throw Error("no fault result for bus \"" + p.fault_bus + "\" (pair " + p.main + "/" + p.backup + ")");
    return it->second;
}

CoordinationRow make_row(std::string bus, std::string main, std::string backup, std::optional<double> t_main,
                         std::optional<double> t_backup, const CtiBand& band) {
    CoordinationRow row;
    row.fault_bus = std::move(bus);
    row.main = std::move(main);
    row.backup = std::move(backup);
    row.t_main_s = t_main;
    row.t_backup_s = t_backup;
    if (t_main && t_backup) row.cti_s = compute_cti(*t_main, *t_backup);
    row.verdict = classify(t_main, t_backup, band);
    return row;
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::ok: return "ok";
        case Verdict::too_fast: return "too_fast";
        case Verdict::too_slow: return "too_slow";
        case Verdict::backup_first: return "backup_first";
        case Verdict::no_trip: return "no_trip";
    }
    return "?";
}

bool CoordinationReport::all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.verdict == Verdict::ok; });
}

double compute_cti(double t_main, double t_backup) { return t_backup - t_main; }

Verdict classify(std::optional<double> t_main, std::optional<double> t_backup, const CtiBand& band) {
    if (!t_main || !t_backup) return Verdict::no_trip;
    const double cti = compute_cti(*t_main, *t_backup);
    if (cti < 0.0) return Verdict::backup_first;
    if (cti < band.lo - kBandSlack) return Verdict::too_fast;
    if (cti > band.hi + kBandSlack) return Verdict::too_slow;
    return Verdict::ok;
}

CoordinationReport check_pairs(const Network& net, const std::map<std::string, FaultResult>& results,
                               const CtiBand& band) {
    CoordinationReport rep;
    for (const auto& p : net.pairs) {
        const FaultResult& fr = result_for(results, p);
        const double i_main = relay_current(fr, p.main);
        const double i_backup = relay_current(fr, p.backup);
        CoordinationRow row = make_row(p.fault_bus, p.main, p.backup, operate_time(net.relay(p.main), i_main).time_s,
                                       operate_time(net.relay(p.backup), i_backup).time_s, band);
        row.i_main_a = i_main;
        row.i_backup_a = i_backup;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

CoordinationReport check_times(const std::vector<TimedPair>& timed, const CtiBand& band) {
    CoordinationReport rep;
    for (const auto& t : timed) {
        CoordinationRow row = make_row(t.fault_bus, t.main, t.backup, t.t_main_s, t.t_backup_s, band);
        row.i_main_a = t.i_main_a;
        row.i_backup_a = t.i_backup_a;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::map<std::string, double> set_pickups(const std::map<std::string, double>& load_currents,
                                          const std::map<std::string, double>& overload_factors,
                                          double default_factor) {
    std::map<std::string, double> out;
    for (const auto& [relay, load] : load_currents) {
        auto it = overload_factors.find(relay);
        const double f = it == overload_factors.end() ? default_factor : it->second;
        out[relay] = std::round(f * load);
    }
    return out;
}

std::map<std::string, double> optimize_tds(const Network& net, const std::vector<CoordinationPair>& pairs,
                                           const std::map<std::string, FaultResult>& fault_results,
                                           const CtiBand& band, const TdsGrid& grid) {
    if (!(grid.tds_min > 0.0) || !(grid.tds_step > 0.0) || grid.tds_max < grid.tds_min)
        throw Error("invalid tds grid");

    // Kahn ordering on main -> backup: a backup is settled only after every
    // relay it backs up.
    std::map<std::string, std::vector<std::size_t>> as_backup;
    std::map<std::string, int> pending;
    std::map<std::string, std::vector<std::string>> backups_of;
    for (const auto& r : net.relays) pending[r.id] = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        if (!net.has_relay(p.main)) throw ReferenceError(p.main, "coordination pair");
        if (!net.has_relay(p.backup)) throw ReferenceError(p.backup, "coordination pair");
        as_backup[p.backup].push_back(i);
        backups_of[p.main].push_back(p.backup);
        ++pending[p.backup];
    }

    std::queue<std::string> ready;
    for (const auto& r : net.relays)
        if (pending[r.id] == 0) ready.push(r.id);

    const auto max_steps = static_cast<long>(std::floor((grid.tds_max - grid.tds_min) / grid.tds_step + 1e-9));
    auto grid_point = [&](long i) { return grid.tds_min + static_cast<double>(i) * grid.tds_step; };

    std::map<std::string, double> tds;
    while (!ready.empty()) {
        const std::string id = ready.front();
        ready.pop();
        const RelaySpec& relay = net.relay(id);

        long step = 0;
        for (std::size_t pi : as_backup[id]) {
            const auto& p = pairs[pi];
            const FaultResult& fr = result_for(fault_results, p);
            RelaySpec main = net.relay(p.main);
            main.tds = tds.at(p.main);
            const auto t_main = operate_time(main, relay_current(fr, p.main)).time_s;
            if (!t_main) continue;  // nothing to back up at this fault

            const double m = relay_current(fr, id) / relay.pickup_a;
            if (!(m > 1.0))
                throw InfeasibleError("backup " + id + " does not trip for the fault at " + p.fault_bus);
            const double per_tds = curve_time(relay.curve, 1.0, m);
            const double need = (*t_main + band.lo) / per_tds;
            long i = std::max(0L, static_cast<long>(std::ceil((need - grid.tds_min) / grid.tds_step - 1e-9)));
            // Settle on the exact check the classifier will make.
            auto meets = [&](long j) {
                return compute_cti(*t_main, curve_time(relay.curve, grid_point(j), m)) >= band.lo - kBandSlack;
            };
            while (i > 0 && meets(i - 1)) --i;
            while (i <= max_steps && !meets(i)) ++i;
            if (i > max_steps)
                throw InfeasibleError("backup " + id + " cannot reach a " + std::to_string(band.lo) +
                                      " s margin over " + p.main + " at " + p.fault_bus + " within tds_max");
            step = std::max(step, i);
        }
        tds[id] = grid_point(step);
        for (const auto& b : backups_of[id])
            if (--pending[b] == 0) ready.push(b);
    }
    if (tds.size() != net.relays.size()) throw TopologyError("main/backup relations form a cycle");
    return tds;
}

Network with_tds(const Network& net, const std::map<std::string, double>& tds) {
    Network out = net;
    for (auto& r : out.relays)
        if (auto it = tds.find(r.id); it != tds.end()) r.tds = it->second;
    return out;
}

Network with_pickups(const Network& net, const std::map<std::string, double>& pickups) {
    Network out = net;
    for (auto& r : out.relays)
        if (auto it = pickups.find(r.id); it != pickups.end()) r.pickup_a = it->second;
    return out;
}

}  // namespace protcoord
