#include <cmath>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "protcoord/error.hpp"
#include "protcoord/netmodel.hpp"

namespace protcoord {

namespace {

class Checker {
public:
    void rule(bool holds, const std::string& id, const char* rule) {
        if (!holds) out_.push_back({id, rule});
    }
    std::vector<Violation> take() { return std::move(out_); }

private:
    std::vector<Violation> out_;
};

template <typename T>
void unique_ids(Checker& c, const std::vector<T>& items) {
    std::unordered_set<std::string> seen;
    for (const auto& item : items) c.rule(seen.insert(item.id).second, item.id, "unique id");
}

// First bus not reachable from buses[0], if any.
std::optional<std::string> first_unreachable(const Network& net) {
    if (net.buses.empty()) return std::nullopt;
    std::unordered_map<std::string, std::vector<std::string>> adj;
    for (const auto& b : net.branches) {
        adj[b.from_bus].push_back(b.to_bus);
        adj[b.to_bus].push_back(b.from_bus);
    }
    std::unordered_set<std::string> seen{net.buses.front().id};
    std::queue<std::string> q;
    q.push(net.buses.front().id);
    while (!q.empty()) {
        const std::string cur = q.front();
        q.pop();
        for (const auto& nb : adj[cur])
            if (seen.insert(nb).second) q.push(nb);
    }
    for (const auto& b : net.buses)
        if (!seen.contains(b.id)) return b.id;
    return std::nullopt;
}

}  // namespace

std::vector<Violation> validate(const Network& net) {
    Checker c;
    c.rule(net.s_base_va > 0.0, "network", "s_base_va > 0");
    c.rule(!net.buses.empty(), "network", "at least one bus");

    unique_ids(c, net.buses);
    unique_ids(c, net.branches);
    unique_ids(c, net.sources);
    unique_ids(c, net.loads);
    unique_ids(c, net.relays);

    std::unordered_set<std::string> bus_ids, branch_ids, relay_ids;
    for (const auto& b : net.buses) bus_ids.insert(b.id);
    for (const auto& b : net.branches) branch_ids.insert(b.id);
    for (const auto& r : net.relays) relay_ids.insert(r.id);

    for (const auto& b : net.buses) c.rule(b.nominal_voltage > 0.0, b.id, "nominal_voltage > 0");

    for (const auto& b : net.branches) {
        c.rule(std::abs(b.impedance) > 0.0, b.id, "|impedance| > 0");
        c.rule(b.from_bus != b.to_bus, b.id, "from_bus != to_bus");
        c.rule(bus_ids.contains(b.from_bus) && bus_ids.contains(b.to_bus), b.id, "reference exists");
    }

    bool has_grid = false;
    for (const auto& s : net.sources) {
        has_grid = has_grid || s.kind == SourceKind::infinite_grid;
        c.rule(std::abs(s.internal_impedance) > 0.0, s.id, "|internal_impedance| > 0");
        c.rule(s.emf_pu > 0.8 && s.emf_pu <= 1.2, s.id, "emf_pu in (0.8, 1.2]");
        c.rule(bus_ids.contains(s.bus), s.id, "reference exists");
    }
    c.rule(has_grid, "network", "infinite_grid source present");
    c.rule(net.induction_impedance_multiplier > 0.0, "network", "induction_impedance_multiplier > 0");

    for (const auto& l : net.loads) {
        c.rule(l.impedance.real() >= 0.0, l.id, "Re(impedance) >= 0");
        c.rule(std::abs(l.impedance) > 0.0, l.id, "|impedance| > 0");
        c.rule(bus_ids.contains(l.bus), l.id, "reference exists");
    }

    for (const auto& r : net.relays) {
        c.rule(r.pickup_a > 0.0, r.id, "pickup_a > 0");
        c.rule(r.tds > 0.0, r.id, "tds > 0");
        c.rule(r.curve.a > 0.0, r.id, "a > 0");
        c.rule(r.curve.c > 0.0, r.id, "c > 0");
        c.rule(r.curve.b >= 0.0, r.id, "b >= 0");
        c.rule(branch_ids.contains(r.branch), r.id, "reference exists");
    }

    for (const auto& p : net.pairs) {
        const std::string id = p.main + "/" + p.backup + "@" + p.fault_bus;
        c.rule(p.main != p.backup, id, "main != backup");
        c.rule(relay_ids.contains(p.main) && relay_ids.contains(p.backup) && bus_ids.contains(p.fault_bus), id,
               "reference exists");
    }

    const auto island = first_unreachable(net);
    c.rule(!island.has_value(), island.value_or(""), "graph connected");

    if (net.ufcl) {
        const UfclSpec& u = *net.ufcl;
        c.rule(u.r_limit > u.r_normal && u.r_normal >= 0.0, "ufcl", "r_limit > r_normal >= 0");
        const auto bi = net.branch_index(u.tie_branch);
        c.rule(bi.has_value(), u.tie_branch, "reference exists");
        if (bi) {
            const Branch& tie = net.branches[*bi];
            const bool endpoint = u.downstream_end == tie.from_bus || u.downstream_end == tie.to_bus;
            c.rule(endpoint, u.downstream_end, "downstream_end is an endpoint of tie_branch");
            if (endpoint && has_grid && !island) {
                try {
                    const auto part = partition_by_tie(net, u.tie_branch);
                    c.rule(part.downstream.contains(u.downstream_end), u.downstream_end,
                           "downstream_end lies beyond the tie");
                } catch (const TopologyError&) {
                    c.rule(false, u.tie_branch, "tie removal disconnects the graph");
                }
            }
        }
    }
    return c.take();
}

}  // namespace protcoord
