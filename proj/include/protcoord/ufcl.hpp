#pragma once

#include <string_view>
#include <vector>

#include "protcoord/netmodel.hpp"

namespace protcoord {

enum class FaultSide { upstream, downstream };
std::string_view to_string(FaultSide s);

// Topological: downstream iff the bus lies beyond the tie from the grid.
FaultSide classify_fault_side(const Network& net, const UfclSpec& ufcl, std::string_view fault_bus);

// r_normal for downstream faults, r_limit for upstream faults.
double effective_resistance(const UfclSpec& ufcl, FaultSide side);

struct SizingOptions {
    double tol = 0.005;        // relative fault-current error
    double r_hi_seed = 10.0;   // ohms
    int max_iterations = 200;  // doublings + bisection steps
};

struct SizingResult {
    double r_star = 0.0;  // ohms
    double achieved_current_a = 0.0;
    double target_current_a = 0.0;
    int iterations = 0;
};

// Smallest UFCL resistance R such that the fault current at `fault_bus` with
// the network's DG in service and R in the tie is within `tol` of
// `target_a`. Bracket [0, r_hi] by doubling from the seed, then bisection.
// Returns r_star = 0 when R = 0 already meets the target.
SizingResult size_ufcl(const Network& net_with_dg, std::string_view fault_bus, double target_a,
                       const SizingOptions& opts = {});

// Target taken from the same network with every DG out of service.
SizingResult size_ufcl_to_no_dg(const Network& net_with_dg, std::string_view fault_bus,
                                const SizingOptions& opts = {});

// Sizing against several upstream buses at once: the largest per-bus r_star.
SizingResult size_ufcl_max_over(const Network& net_with_dg, const std::vector<std::string>& fault_buses,
                                const SizingOptions& opts = {});

}  // namespace protcoord
