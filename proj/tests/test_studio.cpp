#include <doctest.h>

#include <regex>

#include "compare.hpp"
#include "protcoord/error.hpp"
#include "protcoord/studio.hpp"

using namespace protcoord;

namespace {

const Network& bundled() {
    static const Network net = load_network_file(bundled_dataset_path());
    return net;
}

StudyReport run(ScenarioId id, std::vector<std::string> buses = {}) {
    return run_scenario(bundled(), make_scenario(bundled(), id, std::move(buses)));
}

const CoordinationRow& row_at(const StudyReport& r, const std::string& bus) {
    for (const auto& row : r.coordination.rows)
        if (row.fault_bus == bus) return row;
    throw std::out_of_range(bus);
}

const FaultTable& table_at(const StudyReport& r, const std::string& bus) {
    for (const auto& t : r.faults)
        if (t.fault_bus == bus) return t;
    throw std::out_of_range(bus);
}

}  // namespace

TEST_CASE("scenario definitions") {
    const Scenario s0 = make_scenario(bundled(), ScenarioId::s0_no_dg);
    CHECK(s0.dg_in_service.empty());
    CHECK(s0.fault_buses == std::vector<std::string>{"bus3", "bus4", "bus6", "bus7"});
    const Scenario s4 = make_scenario(bundled(), ScenarioId::s4_dg1_dg2_ufcl);
    CHECK(s4.dg_in_service == std::vector<std::string>{"dg1", "dg2"});
    CHECK(s4.ufcl_enabled);
    const Scenario s6 = make_scenario(bundled(), ScenarioId::s6_induction_dg1_ufcl, {"bus3"});
    CHECK(s6.induction_dg1);
    CHECK(s6.fault_buses == std::vector<std::string>{"bus3"});

    CHECK(parse_scenario_id("s2") == ScenarioId::s2_dg1_ufcl);
    CHECK(parse_scenario_id("s5_induction_dg1") == ScenarioId::s5_induction_dg1);
    CHECK_THROWS_AS(parse_scenario_id("s7"), Error);
    CHECK(all_scenarios().size() == 7);

    Network one_dg = bundled();
    one_dg.sources.pop_back();
    CHECK_THROWS_AS(make_scenario(one_dg, ScenarioId::s3_dg1_dg2), Error);
    Network no_ufcl = bundled();
    no_ufcl.ufcl.reset();
    CHECK_THROWS_AS(make_scenario(no_ufcl, ScenarioId::s2_dg1_ufcl), Error);
}

TEST_CASE("s0 currents track the published no-DG fault levels within 5%") {
    const StudyReport r = run(ScenarioId::s0_no_dg);
    const std::vector<std::tuple<std::string, double, double>> published{
        {"bus3", 981.81, 984.72}, {"bus4", 684.9, 684.9}, {"bus6", 287.8, 313.95}, {"bus7", 1091.77, 1091.77}};
    for (const auto& [bus, main, backup] : published) {
        const auto& row = row_at(r, bus);
        CHECK(*row.i_main_a == doctest::Approx(main).epsilon(0.05));
        CHECK(*row.i_backup_a == doctest::Approx(backup).epsilon(0.05));
    }
}

TEST_CASE("the limiter restores the two violated pairs") {
    const StudyReport s1 = run(ScenarioId::s1_dg1);
    const StudyReport s2 = run(ScenarioId::s2_dg1_ufcl);
    CHECK(row_at(s1, "bus3").verdict == Verdict::too_slow);
    CHECK(row_at(s1, "bus4").verdict == Verdict::too_fast);
    CHECK(row_at(s2, "bus3").verdict == Verdict::ok);
    CHECK(row_at(s2, "bus4").verdict == Verdict::ok);
    REQUIRE(s2.sizing);
    CHECK(table_at(s2, "bus3").ufcl_ohms == s2.sizing->r_star);

    const StudyReport s4 = run(ScenarioId::s4_dg1_dg2_ufcl);
    REQUIRE(s4.sizing);
    CHECK(s4.sizing->r_star == doctest::Approx(196.0).epsilon(0.15));
    CHECK(row_at(s4, "bus3").verdict == Verdict::ok);
    CHECK(row_at(s4, "bus4").verdict == Verdict::ok);
}

TEST_CASE("downstream fault tables match the scenario without the limiter") {
    const std::pair<ScenarioId, ScenarioId> twins[] = {{ScenarioId::s2_dg1_ufcl, ScenarioId::s1_dg1},
                                                       {ScenarioId::s4_dg1_dg2_ufcl, ScenarioId::s3_dg1_dg2},
                                                       {ScenarioId::s6_induction_dg1_ufcl, ScenarioId::s5_induction_dg1}};
    for (const auto& [with, without] : twins) {
        const StudyReport a = run(with);
        const StudyReport b = run(without);
        for (const char* bus : {"bus6", "bus7"}) {
            CHECK(table_at(a, bus).side == FaultSide::downstream);
            CHECK(table_at(a, bus).ufcl_ohms == 0.0);
            CHECK(testing::absolute_gap(table_at(a, bus).result, table_at(b, bus).result) <= 1e-12);
        }
    }
}

TEST_CASE("induction DG1 raises the impedance it presents") {
    const StudyReport s1 = run(ScenarioId::s1_dg1, {"bus3"});
    const StudyReport s5 = run(ScenarioId::s5_induction_dg1, {"bus3"});
    CHECK(s5.faults[0].fault_current_a < s1.faults[0].fault_current_a);
    CHECK(s5.faults[0].fault_current_a > run(ScenarioId::s0_no_dg, {"bus3"}).faults[0].fault_current_a);
}

TEST_CASE("options: fixed resistance, sizing bus, duplicates") {
    StudyOptions opts;
    opts.fixed_ufcl_ohms = 184.0;
    const Network& net = bundled();
    const StudyReport fixed = run_scenario(net, make_scenario(net, ScenarioId::s2_dg1_ufcl), opts);
    CHECK_FALSE(fixed.sizing);
    CHECK(table_at(fixed, "bus3").ufcl_ohms == 184.0);

    StudyOptions by_bus2;
    by_bus2.sizing_bus = "bus2";
    const StudyReport s = run_scenario(net, make_scenario(net, ScenarioId::s2_dg1_ufcl), by_bus2);
    CHECK(s.sizing->r_star == size_ufcl_to_no_dg(with_dg_in_service(net, {"dg1"}), "bus2").r_star);

    const StudyReport dup = run(ScenarioId::s1_dg1, {"bus3", "bus3", "bus4"});
    CHECK(dup.faults.size() == 2);
    CHECK(dup.coordination.rows.size() == 2);
}

TEST_CASE("errors carry the scenario id") {
    try {
        run(ScenarioId::s1_dg1, {"bus42"});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).rfind("s1_dg1: ", 0) == 0);
    }
    StudyOptions opts;
    opts.sizing_bus = "bus7";
    CHECK_THROWS_WITH_AS(run_scenario(bundled(), make_scenario(bundled(), ScenarioId::s2_dg1_ufcl), opts),
                         doctest::Contains("s2_dg1_ufcl: "), Error);
}

TEST_CASE("reports are deterministic and scenarios independent") {
    const std::string alone = emit_report(run(ScenarioId::s2_dg1_ufcl), ReportFormat::markdown);
    (void)run(ScenarioId::s1_dg1);
    CHECK(emit_report(run(ScenarioId::s2_dg1_ufcl), ReportFormat::markdown) == alone);
    CHECK(emit_report(run(ScenarioId::s3_dg1_dg2), ReportFormat::csv, true) ==
          emit_report(run(ScenarioId::s3_dg1_dg2), ReportFormat::csv, true));
}

TEST_CASE("empty fault list gives a header-only document") {
    StudyReport empty;
    CHECK(emit_report(empty, ReportFormat::csv) ==
          "fault_bus,main,backup,i_main_a,i_backup_a,t_main_s,t_backup_s,cti_s,verdict\n");
    const std::string md = emit_report(empty, ReportFormat::markdown);
    CHECK(md.find("## Fault") == std::string::npos);
    CHECK(md.find("| fault_bus |") != std::string::npos);
}

TEST_CASE("markdown lays out one table per fault bus, main before backup") {
    const std::string md = emit_report(run(ScenarioId::s1_dg1), ReportFormat::markdown);
    std::size_t pos = 0;
    for (const auto& [bus, main, backup] : std::vector<std::tuple<std::string, std::string, std::string>>{
             {"bus3", "relay2", "relay1"}, {"bus4", "relay3", "relay2"}, {"bus6", "relay6", "relay4"},
             {"bus7", "relay5", "relay4"}}) {
        pos = md.find("## Fault at " + bus, pos);
        REQUIRE(pos != std::string::npos);
        const auto m = md.find("| " + main + " | main |", pos);
        const auto b = md.find("| " + backup + " | backup |", pos);
        CHECK(m < b);
        CHECK(b < md.find("\n\n", m));
    }
}

TEST_CASE("csv and markdown carry the same 4-digit numbers") {
    const StudyReport r = run(ScenarioId::s3_dg1_dg2);
    const std::string csv = emit_report(r, ReportFormat::csv);
    const std::string md = emit_coordination_markdown(r.coordination);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        std::string md_row = "| " + std::regex_replace(line, std::regex(","), " | ") + " |";
        CHECK(md.find(md_row) != std::string::npos);
    }
}

TEST_CASE("number formatting") {
    CHECK(format_number(1066.52, false) == "1067");
    CHECK(format_number(0.39, false) == "0.3900");
    CHECK(format_number(0.029, false) == "0.02900");
    CHECK(format_number(-0.3691, false) == "-0.3691");
    CHECK(format_number(9.99951, false) == "10.00");
    CHECK(format_number(12345.0, false) == "12350");
    CHECK(format_number(0.0, false) == "0");
    CHECK(format_number(0.1 + 0.2, true) == "0.30000000000000004");
}

TEST_CASE("times csv parsing") {
    const auto rows = parse_times_csv("fault_bus, main ,backup,t_main_s,t_backup_s\r\n\nb,m,k,0.1,\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].main == "m");
    CHECK(*rows[0].t_main_s == 0.1);
    CHECK_FALSE(rows[0].t_backup_s);
    CHECK_FALSE(rows[0].i_main_a);
    CHECK(check_times(rows, {}).rows[0].verdict == Verdict::no_trip);

    CHECK_THROWS_AS(parse_times_csv(""), FormatError);
    CHECK_THROWS_AS(parse_times_csv("fault_bus,main,backup,t_main_s\n"), FormatError);
    try {
        parse_times_csv("fault_bus,main,backup,t_main_s,t_backup_s\nb,m,k,0.1,0.5\nb,m,k,fast,0.5\n");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.locus() == "line 3");
    }
    CHECK_THROWS_AS(parse_times_csv("fault_bus,main,backup,t_main_s,t_backup_s\nb,m,k,0.1\n"), FormatError);
    CHECK(parse_report_format("md") == ReportFormat::markdown);
    CHECK_THROWS_AS(parse_report_format("pdf"), Error);
}
