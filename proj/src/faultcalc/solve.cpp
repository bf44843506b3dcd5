#include "internal.hpp"
#include "protcoord/error.hpp"
#include "protcoord/faultcalc.hpp"

namespace protcoord {

std::size_t detail::bus_index_or_throw(const PuNetwork& pu, std::string_view bus) {
    if (auto i = pu.ohmic->bus_index(bus)) return *i;
    throw ReferenceError(std::string(bus), "fault study");
}

void detail::fill_currents(const PuNetwork& pu, const std::vector<Complex>& v, double ufcl_ohms, FaultResult& out) {
    const Network& net = *pu.ohmic;
    std::vector<Complex> i_pu(pu.branches.size());
    for (std::size_t i = 0; i < pu.branches.size(); ++i) {
        const PuBranch& b = pu.branches[i];
        i_pu[i] = (v[b.from] - v[b.to]) / effective_branch_z(pu, i, ufcl_ohms);
        out.branch_currents[net.branches[i].id] = i_pu[i] * pu.i_base(b.from);
    }
    for (const auto& r : net.relays) {
        const std::size_t bi = *net.branch_index(r.branch);
        const PuBranch& b = pu.branches[bi];
        const std::size_t end = r.orientation == Orientation::from_to ? b.from : b.to;
        out.relay_currents[r.id] = std::abs(i_pu[bi]) * pu.i_base(end);
    }
    for (std::size_t k = 0; k < v.size(); ++k) out.bus_voltages_pu[net.buses[k].id] = v[k];
}

FaultResult detail::solve_factored(const PuNetwork& pu, const LuFactor& lu, const std::vector<Complex>& prefault,
                                   const FaultSpec& fault, double ufcl_ohms) {
    if (fault.fault_impedance.real() < 0.0) throw Error("fault impedance must have Re >= 0");
    const std::size_t k = bus_index_or_throw(pu, fault.bus);

    const std::vector<Complex> zcol = lu.solve_unit(k);
    const Complex zth = zcol[k];
    const Complex zf = fault.fault_impedance / pu.z_base(k);
    const Complex i_fault = prefault[k] / (zth + zf);

    std::vector<Complex> v(prefault.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = prefault[i] - zcol[i] * i_fault;

    FaultResult out;
    out.fault_bus = fault.bus;
    out.fault_current = i_fault * pu.i_base(k);
    fill_currents(pu, v, ufcl_ohms, out);
    return out;
}

std::vector<Complex> steady_state_voltages(const PuNetwork& pu, double ufcl_ohms) {
    const LuFactor lu(build_ybus(pu, ufcl_ohms));
    return lu.solve(source_injections(pu));
}

std::map<std::string, Complex> steady_state(const Network& net) {
    const PuNetwork pu = to_per_unit(net);
    FaultResult scratch;
    detail::fill_currents(pu, steady_state_voltages(pu), 0.0, scratch);
    return scratch.branch_currents;
}

Complex thevenin_at(const PuNetwork& pu, std::string_view bus, double ufcl_ohms) {
    const std::size_t k = detail::bus_index_or_throw(pu, bus);
    const LuFactor lu(build_ybus(pu, ufcl_ohms));
    return lu.solve_unit(k)[k];
}

FaultResult solve_fault(const PuNetwork& pu, const FaultSpec& fault, double ufcl_ohms) {
    detail::bus_index_or_throw(pu, fault.bus);
    const LuFactor lu(build_ybus(pu, ufcl_ohms));
    return detail::solve_factored(pu, lu, lu.solve(source_injections(pu)), fault, ufcl_ohms);
}

FaultResult solve_fault(const Network& net, const FaultSpec& fault, double ufcl_ohms) {
    return solve_fault(to_per_unit(net), fault, ufcl_ohms);
}

}  // namespace protcoord
