#include <charconv>
#include <map>
#include <sstream>

#include "protcoord/error.hpp"
#include "protcoord/studio.hpp"

namespace protcoord {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> number(const std::string& cell, int line, std::string_view column) {
    if (cell.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw FormatError("line " + std::to_string(line), "column " + std::string(column) + ": not a number: \"" + cell + "\"");
    return v;
}

}  // namespace

std::vector<TimedPair> parse_times_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    std::map<std::string, std::size_t> col;
    std::vector<TimedPair> out;

    while (std::getline(in, raw)) {
        ++line;
        if (trim(raw).empty()) continue;
        const auto cells = split(raw);
        if (col.empty()) {
            for (std::size_t i = 0; i < cells.size(); ++i) col[cells[i]] = i;
            for (const char* need : {"fault_bus", "main", "backup", "t_main_s", "t_backup_s"})
                if (!col.contains(need))
                    throw FormatError("line " + std::to_string(line), std::string("missing column ") + need);
            continue;
        }
        if (cells.size() != col.size())
            throw FormatError("line " + std::to_string(line), "expected " + std::to_string(col.size()) + " fields, got " +
                                                                  std::to_string(cells.size()));
        auto cell = [&](const char* name) -> std::string {
            auto it = col.find(name);
            return it == col.end() ? std::string() : cells[it->second];
        };
        TimedPair p;
        p.fault_bus = cell("fault_bus");
        p.main = cell("main");
        p.backup = cell("backup");
        p.t_main_s = number(cell("t_main_s"), line, "t_main_s");
        p.t_backup_s = number(cell("t_backup_s"), line, "t_backup_s");
        p.i_main_a = number(cell("i_main_a"), line, "i_main_a");
        p.i_backup_a = number(cell("i_backup_a"), line, "i_backup_a");
        out.push_back(std::move(p));
    }
    if (col.empty()) throw FormatError("line 1", "empty times document");
    return out;
}

}  // namespace protcoord
