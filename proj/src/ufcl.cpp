#include <cmath>

#include "protcoord/error.hpp"
#include "protcoord/faultcalc.hpp"
#include "protcoord/ufcl.hpp"

namespace protcoord {

std::string_view to_string(FaultSide s) { return s == FaultSide::upstream ? "upstream" : "downstream"; }

FaultSide classify_fault_side(const Network& net, const UfclSpec& ufcl, std::string_view fault_bus) {
    if (!net.bus_index(fault_bus)) throw ReferenceError(std::string(fault_bus), "fault side classification");
    const TiePartition part = partition_by_tie(net, ufcl.tie_branch);
    return part.downstream.contains(std::string(fault_bus)) ? FaultSide::downstream : FaultSide::upstream;
}

double effective_resistance(const UfclSpec& ufcl, FaultSide side) {
    return side == FaultSide::upstream ? ufcl.r_limit : ufcl.r_normal;
}

// The fault current falls monotonically in R but only approaches a floor
// as R grows (the tie stops feeding the fault), so the exact root may not
// exist. The search instead finds the smallest R whose current is inside the
// tolerance band around the target: that is the upper band edge, located by
// bisection to a relative width of 1e-9.
SizingResult size_ufcl(const Network& net, std::string_view fault_bus, double target_a, const SizingOptions& opts) {
    if (!net.ufcl) throw SizingError("network has no ufcl to size");
    if (!(target_a > 0.0)) throw SizingError("target current must be > 0");
    if (!(opts.tol > 0.0)) throw SizingError("tolerance must be > 0");
    if (!(opts.r_hi_seed > 0.0)) throw SizingError("r_hi seed must be > 0");
    if (classify_fault_side(net, *net.ufcl, fault_bus) != FaultSide::upstream)
        throw SizingError("sizing bus \"" + std::string(fault_bus) + "\" is downstream of the ufcl");

    const PuNetwork pu = to_per_unit(net);
    const FaultSpec fault{std::string(fault_bus)};
    SizingResult res;
    res.target_current_a = target_a;

    auto current = [&](double r) {
        ++res.iterations;
        if (res.iterations > opts.max_iterations)
            throw SizingError("ufcl sizing exceeded " + std::to_string(opts.max_iterations) + " iterations");
        return solve_fault(pu, fault, r).fault_current_a();
    };
    const double ceiling = target_a * (1.0 + opts.tol);

    const double i0 = current(0.0);
    if (i0 <= ceiling) {
        res.achieved_current_a = i0;
        return res;
    }

    double lo = 0.0;
    double hi = opts.r_hi_seed;
    double i_hi = current(hi);
    while (i_hi > ceiling) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12)
            throw SizingError("fault current at " + std::string(fault_bus) + " cannot be limited to within tolerance of " +
                              std::to_string(target_a) + " A");
        i_hi = current(hi);
    }

    while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        const double i_mid = current(mid);
        if (i_mid > ceiling) {
            lo = mid;
        } else {
            hi = mid;
            i_hi = i_mid;
        }
    }
    res.r_star = hi;
    res.achieved_current_a = i_hi;
    return res;
}

SizingResult size_ufcl_to_no_dg(const Network& net, std::string_view fault_bus, const SizingOptions& opts) {
    const double target = solve_fault(without_dg(net), FaultSpec{std::string(fault_bus)}, 0.0).fault_current_a();
    return size_ufcl(net, fault_bus, target, opts);
}

SizingResult size_ufcl_max_over(const Network& net, const std::vector<std::string>& fault_buses,
                                const SizingOptions& opts) {
    if (fault_buses.empty()) throw SizingError("no fault buses to size against");
    SizingResult best;
    bool first = true;
    for (const auto& bus : fault_buses) {
        SizingResult r = size_ufcl_to_no_dg(net, bus, opts);
        if (first || r.r_star > best.r_star) best = r;
        first = false;
    }
    return best;
}

}  // namespace protcoord
