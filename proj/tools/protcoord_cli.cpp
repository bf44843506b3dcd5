// protcoord: protection-coordination studies on radial grids with DG and a
// unidirectional fault current limiter.
//
// Exit status: 0 all pairs coordinated, 2 coordination violations (or
// validation findings), 1 any error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "protcoord/error.hpp"
#include "protcoord/studio.hpp"

using namespace protcoord;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kViolations = 2;

Network load_valid(const std::string& path) {
    Network net = load_network_file(path);
    const auto found = validate(net);
    if (!found.empty()) {
        std::string msg = path + ": network is invalid";
        for (const auto& v : found) msg += "\n  " + v.id + ": " + v.rule;
        throw Error(msg);
    }
    return net;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error("cannot write " + out_path);
    f << text;
}

void dump_ybus(const StudyReport& rep, const std::filesystem::path& path) {
    const PuNetwork pu = to_per_unit(rep.network);
    for (const auto& t : rep.faults) {
        std::filesystem::path target = path;
        if (rep.faults.size() > 1)
            target.replace_filename(path.stem().string() + "_" + t.fault_bus + path.extension().string());
        write_output(dump_ybus_csv(pu, t.ufcl_ohms, t.result), target.string());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fault studies and overcurrent relay coordination with a unidirectional FCL"};
    app.require_subcommand(1);

    std::string network_path = bundled_dataset_path().string();
    std::string format = "md";
    std::string out_path;
    bool full_precision = false;

    auto* run = app.add_subcommand("run", "Run one study scenario");
    std::string scenario;
    std::vector<std::string> fault_buses;
    std::optional<std::string> sizing_bus;
    std::optional<double> ufcl_ohms;
    StudyOptions study;
    run->add_option("--network", network_path, "Network JSON file")->capture_default_str();
    run->add_option("--scenario", scenario, "s0_no_dg ... s6_induction_dg1_ufcl (or s0..s6)")->required();
    run->add_option("--fault-bus", fault_buses, "Fault bus (repeatable); default: buses named by the pairs");
    run->add_option("--format", format, "md or csv")->capture_default_str();
    run->add_option("--out", out_path, "Write the report here instead of stdout");
    run->add_flag("--full-precision", full_precision, "Print 17 significant digits");
    run->add_option("--sizing-bus", sizing_bus, "Upstream bus the UFCL is sized against");
    run->add_option("--ufcl-ohms", ufcl_ohms, "Use this UFCL resistance instead of sizing")->check(CLI::NonNegativeNumber);
    run->add_option("--tol", study.sizing.tol, "Relative sizing tolerance")->capture_default_str();
    std::string dump_path;
    run->add_option("--dump-ybus", dump_path,
                    "Write Ybus and post-fault voltages as CSV (one file per fault bus, suffixed when several)");
    run->add_option("--band-lo", study.band.lo, "Lower CTI bound (s)")->capture_default_str();
    run->add_option("--band-hi", study.band.hi, "Upper CTI bound (s)")->capture_default_str();

    auto* size = app.add_subcommand("size-ufcl", "Size the UFCL to restore the no-DG fault level");
    std::string size_bus;
    SizingOptions sizing;
    std::vector<std::string> dg_on;
    size->add_option("--network", network_path, "Network JSON file")->capture_default_str();
    size->add_option("--fault-bus", size_bus, "Upstream fault bus")->required();
    size->add_option("--tol", sizing.tol, "Relative current tolerance")->capture_default_str();
    size->add_option("--seed", sizing.r_hi_seed, "Initial bracket ohms")->capture_default_str();
    size->add_option("--dg", dg_on, "DG source in service (repeatable); default: as in the file");

    auto* check = app.add_subcommand("check", "Classify externally supplied main/backup times");
    std::string times_path;
    CtiBand band;
    check->add_option("--network", network_path, "Network JSON file")->capture_default_str();
    check->add_option("--times", times_path, "CSV: fault_bus,main,backup,t_main_s,t_backup_s")->required();
    check->add_option("--band-lo", band.lo, "Lower CTI bound (s)")->capture_default_str();
    check->add_option("--band-hi", band.hi, "Upper CTI bound (s)")->capture_default_str();
    check->add_option("--format", format, "md or csv")->capture_default_str();
    check->add_flag("--full-precision", full_precision, "Print 17 significant digits");

    auto* val = app.add_subcommand("validate", "Report structural problems in a network file");
    val->add_option("--network", network_path, "Network JSON file")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kFailure;
    }

    try {
        if (*run) {
            const Network net = load_valid(network_path);
            study.sizing_bus = sizing_bus;
            study.fixed_ufcl_ohms = ufcl_ohms;
            const StudyReport rep =
                run_scenario(net, make_scenario(net, parse_scenario_id(scenario), fault_buses), study);
            write_output(emit_report(rep, parse_report_format(format), full_precision), out_path);
            if (!dump_path.empty()) dump_ybus(rep, dump_path);
            return rep.all_ok() ? kOk : kViolations;
        }
        if (*size) {
            Network net = load_valid(network_path);
            if (!dg_on.empty()) net = with_dg_in_service(net, std::set<std::string>(dg_on.begin(), dg_on.end()));
            const SizingResult r = size_ufcl_to_no_dg(net, size_bus, sizing);
            std::cout << "fault_bus " << size_bus << "\n"
                      << "r_star_ohm " << format_number(r.r_star, true) << "\n"
                      << "target_current_a " << format_number(r.target_current_a, true) << "\n"
                      << "achieved_current_a " << format_number(r.achieved_current_a, true) << "\n"
                      << "iterations " << r.iterations << "\n";
            return kOk;
        }
        if (*check) {
            const Network net = load_valid(network_path);
            if (!(band.lo > 0.0 && band.lo < band.hi)) throw Error("CTI band must satisfy 0 < lo < hi");
            const auto timed = parse_times_csv(read_text_file(times_path));
            for (const auto& t : timed) {
                if (!net.has_relay(t.main)) throw ReferenceError(t.main, times_path);
                if (!net.has_relay(t.backup)) throw ReferenceError(t.backup, times_path);
            }
            const CoordinationReport rep = check_times(timed, band);
            const bool csv = parse_report_format(format) == ReportFormat::csv;
            std::cout << (csv ? emit_coordination_csv(rep, full_precision)
                              : emit_coordination_markdown(rep, full_precision));
            return rep.all_ok() ? kOk : kViolations;
        }
        const Network net = load_network_file(network_path);
        const auto found = validate(net);
        for (const auto& v : found) std::cout << v.id << ": " << v.rule << "\n";
        if (found.empty()) std::cout << "ok\n";
        return found.empty() ? kOk : kViolations;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
}
