#include <iomanip>
#include <sstream>

#include "protcoord/error.hpp"
#include "protcoord/faultcalc.hpp"
#include "internal.hpp"

namespace protcoord {

namespace {

Complex tie_augmented(const PuNetwork& pu, std::size_t branch, double ufcl_ohms) {
    const PuBranch& b = pu.branches[branch];
    if (pu.tie && *pu.tie == branch && ufcl_ohms != 0.0) return b.z + ufcl_ohms / pu.z_base(b.from);
    return b.z;
}

}  // namespace

Complex detail::effective_branch_z(const PuNetwork& pu, std::size_t branch, double ufcl_ohms) {
    return tie_augmented(pu, branch, ufcl_ohms);
}

ComplexMatrix build_ybus(const PuNetwork& pu, double ufcl_ohms) {
    if (ufcl_ohms < 0.0) throw Error("ufcl resistance must be >= 0");
    if (ufcl_ohms > 0.0 && !pu.tie) throw Error("ufcl resistance given but the network has no ufcl");

    ComplexMatrix y(pu.bus_count());
    for (std::size_t i = 0; i < pu.branches.size(); ++i) {
        const PuBranch& b = pu.branches[i];
        const Complex yb = 1.0 / tie_augmented(pu, i, ufcl_ohms);
        y(b.from, b.from) += yb;
        y(b.to, b.to) += yb;
        y(b.from, b.to) -= yb;
        y(b.to, b.from) -= yb;
    }
    for (const auto& s : pu.sources)
        if (s.in_service) y(s.bus, s.bus) += 1.0 / s.z;
    for (const auto& l : pu.loads) y(l.bus, l.bus) += 1.0 / l.z;
    return y;
}

std::vector<Complex> source_injections(const PuNetwork& pu) {
    std::vector<Complex> inj(pu.bus_count());
    for (const auto& s : pu.sources)
        if (s.in_service) inj[s.bus] += s.emf / s.z;
    return inj;
}

std::string dump_ybus_csv(const PuNetwork& pu, double ufcl_ohms, const FaultResult& result) {
    const ComplexMatrix y = build_ybus(pu, ufcl_ohms);
    std::ostringstream out;
    out << std::setprecision(17);
    out << "section,row,col,re,im\n";
    for (std::size_t r = 0; r < y.size(); ++r)
        for (std::size_t c = 0; c < y.size(); ++c)
            out << "ybus," << pu.ohmic->buses[r].id << ',' << pu.ohmic->buses[c].id << ',' << y(r, c).real() << ','
                << y(r, c).imag() << '\n';
    for (const auto& bus : pu.ohmic->buses) {
        const Complex v = result.bus_voltages_pu.at(bus.id);
        out << "voltage," << bus.id << ",," << v.real() << ',' << v.imag() << '\n';
    }
    return out.str();
}

}  // namespace protcoord
