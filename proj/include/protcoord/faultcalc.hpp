#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "protcoord/dense.hpp"
#include "protcoord/netmodel.hpp"

namespace protcoord {

// Bolted three-phase fault by default (fault_impedance = 0).
struct FaultSpec {
    std::string bus;
    Complex fault_impedance{0.0, 0.0};  // ohms on the fault bus voltage base
};

struct FaultResult {
    std::string fault_bus;
    Complex fault_current;                      // amperes, fault bus base
    std::map<std::string, double> relay_currents;  // amperes RMS at each relay's measuring end
    std::map<std::string, Complex> branch_currents;  // amperes, from end, from-bus base
    std::map<std::string, Complex> bus_voltages_pu;  // post-fault

    double fault_current_a() const { return std::abs(fault_current); }
};

// Nodal admittance matrix in per unit. Branch y = 1/z stamped -y off the
// diagonal and +y on both diagonals; in-service source and load admittances
// on the diagonal. The UFCL tie impedance is augmented by `ufcl_ohms`.
ComplexMatrix build_ybus(const PuNetwork& pu, double ufcl_ohms);

// Norton injections of the in-service sources (per unit).
std::vector<Complex> source_injections(const PuNetwork& pu);

// Unfaulted operating point; constant-impedance loads make it a linear solve.
// Returns complex branch currents in amperes at the from end.
std::map<std::string, Complex> steady_state(const Network& net);
std::vector<Complex> steady_state_voltages(const PuNetwork& pu, double ufcl_ohms = 0.0);

// Driving-point impedance (per unit) at `bus`.
Complex thevenin_at(const PuNetwork& pu, std::string_view bus, double ufcl_ohms);

// Fault current = prefault voltage / (Zth + Zf); post-fault voltages by
// superposition of the Zbus column. Throws SolveError or ReferenceError.
FaultResult solve_fault(const Network& net, const FaultSpec& fault, double ufcl_ohms);
FaultResult solve_fault(const PuNetwork& pu, const FaultSpec& fault, double ufcl_ohms);

// Independent check of solve_fault: an augmented dense system in referred SI
// units (no per-unit machinery), stamped by its own routine and solved by
// explicit Gauss-Jordan inversion. Limited to networks of at most 12 buses.
FaultResult oracle_solve(const Network& net, const FaultSpec& fault, double ufcl_ohms);
inline constexpr std::size_t kOracleMaxBuses = 12;

// --- batch fault studies ----------------------------------------------------

struct FaultJob {
    FaultSpec fault;
    double ufcl_ohms = 0.0;
};

// Reference implementation: one solve_fault call per job, in order.
std::vector<FaultResult> sweep_faults_serial(const PuNetwork& pu, std::span<const FaultJob> jobs);
// OpenMP implementation. Jobs sharing a UFCL state reuse one factorisation;
// output order and values match sweep_faults_serial.
std::vector<FaultResult> sweep_faults(const PuNetwork& pu, std::span<const FaultJob> jobs);

// CSV dump: section,row,col,re,im (Ybus entries then post-fault voltages).
std::string dump_ybus_csv(const PuNetwork& pu, double ufcl_ohms, const FaultResult& result);

}  // namespace protcoord
