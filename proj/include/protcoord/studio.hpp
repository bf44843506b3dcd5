#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "protcoord/coordination.hpp"
#include "protcoord/faultcalc.hpp"
#include "protcoord/netmodel.hpp"
#include "protcoord/ufcl.hpp"

namespace protcoord {

enum class ScenarioId {
    s0_no_dg,
    s1_dg1,
    s2_dg1_ufcl,
    s3_dg1_dg2,
    s4_dg1_dg2_ufcl,
    s5_induction_dg1,
    s6_induction_dg1_ufcl,
};

std::string_view to_string(ScenarioId id);
ScenarioId parse_scenario_id(std::string_view text);
std::span<const ScenarioId> all_scenarios();

struct Scenario {
    ScenarioId id = ScenarioId::s0_no_dg;
    std::vector<std::string> dg_in_service;
    bool ufcl_enabled = false;
    bool induction_dg1 = false;
    std::vector<std::string> fault_buses;
};

// Resolves DG1/DG2 to the network's first and second DG sources. An empty
// `fault_buses` means the distinct fault buses of the network's pairs.
Scenario make_scenario(const Network& net, ScenarioId id, std::vector<std::string> fault_buses = {});

struct StudyOptions {
    CtiBand band;
    SizingOptions sizing;
    std::optional<std::string> sizing_bus;   // default: first upstream fault bus
    std::optional<double> fixed_ufcl_ohms;   // skip sizing and use this resistance
};

struct RelayRow {
    std::string relay;
    std::string role;  // "main" or "backup"
    double current_a = 0.0;
    std::optional<double> time_s;
};

struct FaultTable {
    std::string fault_bus;
    FaultSide side = FaultSide::upstream;
    double ufcl_ohms = 0.0;
    double fault_current_a = 0.0;
    std::vector<RelayRow> rows;  // main then backup for each pair at this bus
    FaultResult result;
};

struct StudyReport {
    ScenarioId scenario = ScenarioId::s0_no_dg;
    Network network;  // as studied: DG states, source kinds and UFCL limit applied
    std::vector<FaultTable> faults;
    CoordinationReport coordination;
    std::optional<SizingResult> sizing;

    bool all_ok() const { return coordination.all_ok(); }
};

// Enables the scenario's DG, sizes the UFCL when enabled, solves every fault
// bus and checks the pairs located there. Errors are rethrown as Error with
// the scenario id prefixed.
StudyReport run_scenario(const Network& net, const Scenario& scenario, const StudyOptions& opts = {});

enum class ReportFormat { markdown, csv };
ReportFormat parse_report_format(std::string_view text);

// Deterministic text; 4 significant digits unless `full_precision`.
std::string emit_report(const StudyReport& report, ReportFormat format, bool full_precision = false);
std::string emit_coordination_csv(const CoordinationReport& report, bool full_precision = false);
std::string emit_coordination_markdown(const CoordinationReport& report, bool full_precision = false);
std::string format_number(double value, bool full_precision);

// Times CSV for the direct-times check: header with at least
// fault_bus,main,backup,t_main_s,t_backup_s; optional i_main_a,i_backup_a.
// An empty time field means the relay does not trip.
std::vector<TimedPair> parse_times_csv(std::string_view text);

}  // namespace protcoord
