#pragma once

#include <vector>

#include "protcoord/dense.hpp"
#include "protcoord/faultcalc.hpp"

namespace protcoord::detail {

Complex effective_branch_z(const PuNetwork& pu, std::size_t branch, double ufcl_ohms);

std::size_t bus_index_or_throw(const PuNetwork& pu, std::string_view bus);

// Fault solution given an existing factorisation of Ybus(ufcl_ohms) and the
// prefault voltages it produces.
FaultResult solve_factored(const PuNetwork& pu, const LuFactor& lu, const std::vector<Complex>& prefault,
                           const FaultSpec& fault, double ufcl_ohms);

// Relay and branch currents in amperes from per-unit bus voltages.
void fill_currents(const PuNetwork& pu, const std::vector<Complex>& v, double ufcl_ohms, FaultResult& out);

}  // namespace protcoord::detail
