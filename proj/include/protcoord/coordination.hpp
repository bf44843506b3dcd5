#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "protcoord/faultcalc.hpp"
#include "protcoord/netmodel.hpp"

namespace protcoord {

// Acceptable coordination time interval, endpoints inclusive.
struct CtiBand {
    double lo = 0.3;
    double hi = 0.6;
};

enum class Verdict { ok, too_fast, too_slow, backup_first, no_trip };
std::string_view to_string(Verdict v);

struct CoordinationRow {
    std::string fault_bus;
    std::string main;
    std::string backup;
    std::optional<double> i_main_a;
    std::optional<double> i_backup_a;
    std::optional<double> t_main_s;  // empty: relay does not trip
    std::optional<double> t_backup_s;
    std::optional<double> cti_s;     // present when both trip
    Verdict verdict = Verdict::no_trip;
};

struct CoordinationReport {
    std::vector<CoordinationRow> rows;

    bool all_ok() const;
};

// t_backup - t_main; negative when the backup is faster.
double compute_cti(double t_main, double t_backup);

// Verdict from the two times alone: no_trip if either is missing,
// backup_first below zero, too_fast below lo, too_slow above hi.
Verdict classify(std::optional<double> t_main, std::optional<double> t_backup, const CtiBand& band);

// Evaluates every pair of `net` at its fault bus. Throws Error when a pair's
// fault bus has no entry in `results`.
CoordinationReport check_pairs(const Network& net, const std::map<std::string, FaultResult>& results,
                               const CtiBand& band);

// Externally supplied operating times, fed straight to the classifier.
struct TimedPair {
    std::string fault_bus;
    std::string main;
    std::string backup;
    std::optional<double> t_main_s;
    std::optional<double> t_backup_s;
    std::optional<double> i_main_a;
    std::optional<double> i_backup_a;
};
CoordinationReport check_times(const std::vector<TimedPair>& timed, const CtiBand& band);

// pickup = factor * load current, rounded to the nearest ampere. Relays
// without an explicit factor use `default_factor`.
std::map<std::string, double> set_pickups(const std::map<std::string, double>& load_currents,
                                          const std::map<std::string, double>& overload_factors,
                                          double default_factor = 1.25);

struct TdsGrid {
    double tds_min = 0.05;
    double tds_step = 0.05;
    double tds_max = 10.0;
};

// Smallest grid TDS per relay such that every pair meets CTI >= band.lo,
// assigned from the most downstream relay upward. Throws InfeasibleError
// when a backup cannot reach the margin on the grid (or does not trip), and
// TopologyError when the main/backup graph has a cycle.
std::map<std::string, double> optimize_tds(const Network& net,
                                           const std::vector<CoordinationPair>& pairs,
                                           const std::map<std::string, FaultResult>& fault_results,
                                           const CtiBand& band, const TdsGrid& grid = {});

Network with_tds(const Network& net, const std::map<std::string, double>& tds);
Network with_pickups(const Network& net, const std::map<std::string, double>& pickups);

}  // namespace protcoord
