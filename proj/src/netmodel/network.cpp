#include <algorithm>

#include "protcoord/error.hpp"
#include "protcoord/netmodel.hpp"

namespace protcoord {

namespace {

template <typename T>
std::optional<std::size_t> find_index(const std::vector<T>& items, std::string_view id) {
    for (std::size_t i = 0; i < items.size(); ++i)
        if (items[i].id == id) return i;
    return std::nullopt;
}

template <typename T>
const T& find_or_throw(const std::vector<T>& items, std::string_view id, const char* what) {
    if (auto i = find_index(items, id)) return items[*i];
    throw ReferenceError(std::string(id), std::string("lookup of ") + what);
}

}  // namespace

std::optional<std::size_t> Network::bus_index(std::string_view id) const { return find_index(buses, id); }
std::optional<std::size_t> Network::branch_index(std::string_view id) const { return find_index(branches, id); }
const Bus& Network::bus(std::string_view id) const { return find_or_throw(buses, id, "bus"); }
const Branch& Network::branch(std::string_view id) const { return find_or_throw(branches, id, "branch"); }
const RelaySpec& Network::relay(std::string_view id) const { return find_or_throw(relays, id, "relay"); }
const Source& Network::source(std::string_view id) const { return find_or_throw(sources, id, "source"); }
bool Network::has_relay(std::string_view id) const { return find_index(relays, id).has_value(); }

std::vector<std::string> Network::dg_ids() const {
    std::vector<std::string> ids;
    for (const auto& s : sources)
        if (s.is_dg()) ids.push_back(s.id);
    return ids;
}

Complex effective_source_impedance(const Network& net, const Source& src) {
    if (src.kind == SourceKind::induction_dg) return src.internal_impedance * net.induction_impedance_multiplier;
    return src.internal_impedance;
}

Network with_dg_in_service(const Network& net, const std::set<std::string>& dg_ids) {
    for (const auto& id : dg_ids) {
        const Source& s = net.source(id);
        if (!s.is_dg()) throw Error("source \"" + id + "\" is not a DG unit");
    }
    Network out = net;
    for (auto& s : out.sources)
        if (s.is_dg()) s.in_service = dg_ids.contains(s.id);
    return out;
}

Network without_dg(const Network& net) { return with_dg_in_service(net, {}); }

Network with_source_kind(const Network& net, std::string_view source_id, SourceKind kind) {
    Network out = net;
    auto it = std::find_if(out.sources.begin(), out.sources.end(), [&](const Source& s) { return s.id == source_id; });
    if (it == out.sources.end()) throw ReferenceError(std::string(source_id), "source kind override");
    it->kind = kind;
    return out;
}

Network with_ufcl_limit(const Network& net, double r_limit) {
    if (!net.ufcl) throw Error("network has no ufcl");
    Network out = net;
    out.ufcl->r_limit = r_limit;
    return out;
}

std::string_view to_string(BranchKind k) {
    switch (k) {
        case BranchKind::line: return "line";
        case BranchKind::transformer: return "transformer";
        case BranchKind::tie: return "tie";
    }
    return "?";
}

std::string_view to_string(SourceKind k) {
    switch (k) {
        case SourceKind::infinite_grid: return "infinite_grid";
        case SourceKind::sync_dg: return "sync_dg";
        case SourceKind::induction_dg: return "induction_dg";
    }
    return "?";
}

}  // namespace protcoord
