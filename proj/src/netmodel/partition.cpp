#include <queue>
#include <unordered_map>

#include "protcoord/error.hpp"
#include "protcoord/netmodel.hpp"

namespace protcoord {

namespace {

std::set<std::string> reach(const std::unordered_map<std::string, std::vector<std::string>>& adj,
                            const std::string& start) {
    std::set<std::string> seen{start};
    std::queue<std::string> q;
    q.push(start);
    while (!q.empty()) {
        const std::string cur = q.front();
        q.pop();
        auto it = adj.find(cur);
        if (it == adj.end()) continue;
        for (const auto& nb : it->second)
            if (seen.insert(nb).second) q.push(nb);
    }
    return seen;
}

}  // namespace

TiePartition partition_by_tie(const Network& net, std::string_view tie_branch) {
    const auto ti = net.branch_index(tie_branch);
    if (!ti) throw TopologyError("unknown tie branch \"" + std::string(tie_branch) + "\"");
    const Branch& tie = net.branches[*ti];

    const Source* grid = nullptr;
    for (const auto& s : net.sources)
        if (s.kind == SourceKind::infinite_grid) {
            grid = &s;
            break;
        }
    if (!grid) throw TopologyError("no infinite_grid source to anchor the upstream side");

    std::unordered_map<std::string, std::vector<std::string>> adj;
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        if (i == *ti) continue;
        const Branch& b = net.branches[i];
        adj[b.from_bus].push_back(b.to_bus);
        adj[b.to_bus].push_back(b.from_bus);
    }

    TiePartition part;
    part.upstream = reach(adj, grid->bus);
    if (part.upstream.contains(tie.from_bus) && part.upstream.contains(tie.to_bus))
        throw TopologyError("tie removal does not disconnect the graph (\"" + tie.id + "\" lies in a loop)");

    const std::string& far_end = part.upstream.contains(tie.from_bus) ? tie.to_bus : tie.from_bus;
    if (!part.upstream.contains(tie.from_bus) && !part.upstream.contains(tie.to_bus))
        throw TopologyError("tie \"" + tie.id + "\" is not connected to the grid side");
    part.downstream = reach(adj, far_end);

    if (part.upstream.size() + part.downstream.size() != net.buses.size())
        throw TopologyError("removing tie \"" + tie.id + "\" leaves more than two components");
    return part;
}

}  // namespace protcoord
