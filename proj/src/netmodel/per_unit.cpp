#include <cmath>

#include "protcoord/error.hpp"
#include "protcoord/netmodel.hpp"

namespace protcoord {

double PuNetwork::i_base(std::size_t bus) const noexcept { return s_base_va / (std::sqrt(3.0) * v_base[bus]); }

namespace {

std::size_t index_of(const Network& net, const std::string& bus) {
    if (auto i = net.bus_index(bus)) return *i;
    throw ReferenceError(bus, "per-unit conversion");
}

// Bus whose voltage base the branch ohms are stated on.
std::size_t referred_bus(const Branch& b, std::size_t from, std::size_t to) {
    return (b.kind == BranchKind::transformer && b.referred_side == Side::to) ? to : from;
}

}  // namespace

PuNetwork to_per_unit(const Network& net) {
    PuNetwork pu;
    pu.ohmic = std::make_shared<const Network>(net);
    pu.s_base_va = net.s_base_va;
    pu.v_base.reserve(net.buses.size());
    for (const auto& b : net.buses) pu.v_base.push_back(b.nominal_voltage);

    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const Branch& b = net.branches[i];
        const std::size_t f = index_of(net, b.from_bus);
        const std::size_t t = index_of(net, b.to_bus);
        if (b.kind != BranchKind::transformer && pu.v_base[f] != pu.v_base[t])
            throw TopologyError("inconsistent voltage zones across " + std::string(to_string(b.kind)) + " \"" +
                                b.id + "\" (" + b.from_bus + " vs " + b.to_bus + ")");
        pu.branches.push_back({f, t, b.impedance / pu.z_base(referred_bus(b, f, t))});
        if (net.ufcl && net.ufcl->tie_branch == b.id) pu.tie = i;
    }
    for (const auto& s : net.sources) {
        const std::size_t k = index_of(net, s.bus);
        pu.sources.push_back({k, effective_source_impedance(net, s) / pu.z_base(k), s.emf_pu, s.in_service});
    }
    for (const auto& l : net.loads) {
        const std::size_t k = index_of(net, l.bus);
        pu.loads.push_back({k, l.impedance / pu.z_base(k)});
    }
    return pu;
}

Network from_per_unit(const PuNetwork& pu) {
    if (!pu.ohmic) throw Error("per-unit network has no ohmic origin");
    Network net = *pu.ohmic;
    net.s_base_va = pu.s_base_va;
    for (std::size_t i = 0; i < net.buses.size(); ++i) net.buses[i].nominal_voltage = pu.v_base[i];
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const PuBranch& b = pu.branches[i];
        net.branches[i].impedance = b.z * pu.z_base(referred_bus(net.branches[i], b.from, b.to));
    }
    for (std::size_t i = 0; i < net.sources.size(); ++i) {
        Complex z = pu.sources[i].z * pu.z_base(pu.sources[i].bus);
        if (net.sources[i].kind == SourceKind::induction_dg) z /= net.induction_impedance_multiplier;
        net.sources[i].internal_impedance = z;
        net.sources[i].emf_pu = pu.sources[i].emf;
    }
    for (std::size_t i = 0; i < net.loads.size(); ++i)
        net.loads[i].impedance = pu.loads[i].z * pu.z_base(pu.loads[i].bus);
    return net;
}

}  // namespace protcoord
