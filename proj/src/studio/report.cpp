#include <cmath>
#include <cstdio>
#include <sstream>

#include "protcoord/error.hpp"
#include "protcoord/studio.hpp"

namespace protcoord {

namespace {

std::string opt_number(const std::optional<double>& v, bool full, const char* missing) {
    return v ? format_number(*v, full) : std::string(missing);
}

void coordination_rows(std::ostringstream& out, const CoordinationReport& rep, bool full, bool markdown) {
    const char* sep = markdown ? " | " : ",";
    const char* missing = markdown ? "-" : "";
    for (const auto& r : rep.rows) {
        if (markdown) out << "| ";
        out << r.fault_bus << sep << r.main << sep << r.backup << sep << opt_number(r.i_main_a, full, missing) << sep
            << opt_number(r.i_backup_a, full, missing) << sep << opt_number(r.t_main_s, full, missing) << sep
            << opt_number(r.t_backup_s, full, missing) << sep << opt_number(r.cti_s, full, missing) << sep
            << to_string(r.verdict);
        out << (markdown ? " |\n" : "\n");
    }
}

constexpr const char* kCsvHeader = "fault_bus,main,backup,i_main_a,i_backup_a,t_main_s,t_backup_s,cti_s,verdict\n";
constexpr const char* kMdHeader =
    "| fault_bus | main | backup | i_main_a | i_backup_a | t_main_s | t_backup_s | cti_s | verdict |\n"
    "|---|---|---|---|---|---|---|---|---|\n";

}  // namespace

std::string format_number(double value, bool full_precision) {
    char buf[64];
    if (full_precision) {
        std::snprintf(buf, sizeof buf, "%.17g", value);
        return buf;
    }
    if (value == 0.0) return "0";
    const double mag = std::fabs(value);
    if (!std::isfinite(value) || mag < 1e-3 || mag >= 1e7) {
        std::snprintf(buf, sizeof buf, "%.4g", value);
        return buf;
    }
    // Four significant digits without switching to exponent notation.
    int exponent = static_cast<int>(std::floor(std::log10(mag)));
    const double scale = std::pow(10.0, 3 - exponent);
    const double rounded = std::round(value * scale) / scale;
    exponent = static_cast<int>(std::floor(std::log10(std::fabs(rounded))));
    std::snprintf(buf, sizeof buf, "%.*f", std::max(0, 3 - exponent), rounded);
    return buf;
}

ReportFormat parse_report_format(std::string_view text) {
    if (text == "md" || text == "markdown") return ReportFormat::markdown;
    if (text == "csv") return ReportFormat::csv;
    throw Error("unknown report format \"" + std::string(text) + "\" (expected md or csv)");
}

std::string emit_coordination_csv(const CoordinationReport& report, bool full_precision) {
    std::ostringstream out;
    out << kCsvHeader;
    coordination_rows(out, report, full_precision, false);
    return out.str();
}

std::string emit_coordination_markdown(const CoordinationReport& report, bool full_precision) {
    std::ostringstream out;
    out << kMdHeader;
    coordination_rows(out, report, full_precision, true);
    return out.str();
}

std::string emit_report(const StudyReport& report, ReportFormat format, bool full_precision) {
    if (format == ReportFormat::csv) return emit_coordination_csv(report.coordination, full_precision);

    const bool full = full_precision;
    std::ostringstream out;
    out << "# Study " << to_string(report.scenario) << "\n\n";
    if (report.sizing) {
        const auto& s = *report.sizing;
        out << "UFCL sizing: R = " << format_number(s.r_star, full) << " ohm, target "
            << format_number(s.target_current_a, full) << " A, achieved " << format_number(s.achieved_current_a, full)
            << " A (" << s.iterations << " solves)\n\n";
    }
    for (const auto& t : report.faults) {
        out << "## Fault at " << t.fault_bus << "\n\n"
            << "side " << to_string(t.side) << ", UFCL " << format_number(t.ufcl_ohms, full) << " ohm, fault current "
            << format_number(t.fault_current_a, full) << " A\n\n"
            << "| relay | role | current_a | time_s |\n|---|---|---|---|\n";
        for (const auto& r : t.rows)
            out << "| " << r.relay << " | " << r.role << " | " << format_number(r.current_a, full) << " | "
                << opt_number(r.time_s, full, "-") << " |\n";
        out << '\n';
    }
    out << "## Coordination\n\n" << emit_coordination_markdown(report.coordination, full);
    return out.str();
}

}  // namespace protcoord
