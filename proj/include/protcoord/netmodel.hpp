#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace protcoord {

using Complex = std::complex<double>;

enum class BranchKind { line, transformer, tie };
enum class Side { from, to };
enum class SourceKind { infinite_grid, sync_dg, induction_dg };
enum class Orientation { from_to, to_from };

struct Bus {
    std::string id;
    double nominal_voltage = 0.0;  // volts, line-to-line
};

struct Branch {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    BranchKind kind = BranchKind::line;
    Complex impedance;                // ohms
    Side referred_side = Side::from;  // voltage base the ohms are stated on (transformers)
};

struct Source {
    std::string id;
    std::string bus;
    SourceKind kind = SourceKind::infinite_grid;
    Complex internal_impedance;  // ohms on the bus voltage base
    double emf_pu = 1.0;
    bool in_service = true;

    bool is_dg() const noexcept { return kind != SourceKind::infinite_grid; }
};

struct ShuntLoad {
    std::string id;
    std::string bus;
    Complex impedance;  // ohms per phase, wye-equivalent
};

// Constants of t = TDS * (B + A / (M^C - 1)).
struct CurveConstants {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

struct RelaySpec {
    std::string id;
    std::string branch;
    Orientation orientation = Orientation::from_to;
    double pickup_a = 0.0;
    double tds = 0.0;
    std::string curve_family = "custom";
    CurveConstants curve;
};

struct CoordinationPair {
    std::string main;
    std::string backup;
    std::string fault_bus;
};

struct UfclSpec {
    std::string tie_branch;
    double r_limit = 0.0;   // ohms, inserted for upstream faults
    double r_normal = 0.0;  // ohms, normal state and downstream faults
    std::string downstream_end;
};

// Immutable after load. Lookups are linear; networks here have tens of buses.
struct Network {
    std::string name;
    double s_base_va = 10e6;
    double induction_impedance_multiplier = 1.05;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Source> sources;
    std::vector<ShuntLoad> loads;
    std::vector<RelaySpec> relays;
    std::vector<CoordinationPair> pairs;
    std::optional<UfclSpec> ufcl;

    std::optional<std::size_t> bus_index(std::string_view id) const;
    std::optional<std::size_t> branch_index(std::string_view id) const;
    const Bus& bus(std::string_view id) const;
    const Branch& branch(std::string_view id) const;
    const RelaySpec& relay(std::string_view id) const;
    const Source& source(std::string_view id) const;
    bool has_relay(std::string_view id) const;

    // DG sources in declaration order: the first is "DG1", the second "DG2".
    std::vector<std::string> dg_ids() const;
};

// Source impedance actually stamped: induction DG carries the multiplier.
Complex effective_source_impedance(const Network& net, const Source& src);

// --- loading -------------------------------------------------------------

// Parses the JSON network document and applies defaults. Throws
// FormatError (with line or field locus) or ReferenceError.
Network load_network(std::string_view text);
Network load_network_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

// Location of the calibrated seven-bus study grid shipped with the sources.
std::filesystem::path bundled_dataset_path();

// --- validation ----------------------------------------------------------

struct Violation {
    std::string id;
    std::string rule;

    friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate(const Network& net);

// --- derived networks (pure; return modified copies) --------------------

Network with_dg_in_service(const Network& net, const std::set<std::string>& dg_ids);
Network without_dg(const Network& net);
Network with_source_kind(const Network& net, std::string_view source_id, SourceKind kind);
Network with_ufcl_limit(const Network& net, double r_limit);

// --- per unit ------------------------------------------------------------

struct PuBranch {
    std::size_t from = 0;
    std::size_t to = 0;
    Complex z;  // per unit
};

struct PuSource {
    std::size_t bus = 0;
    Complex z;  // per unit, multiplier already applied
    double emf = 1.0;
    bool in_service = true;
};

struct PuLoad {
    std::size_t bus = 0;
    Complex z;
};

struct PuNetwork {
    std::shared_ptr<const Network> ohmic;  // the network this was derived from
    double s_base_va = 0.0;
    std::vector<double> v_base;  // volts LL per bus, same order as ohmic->buses
    std::vector<PuBranch> branches;
    std::vector<PuSource> sources;
    std::vector<PuLoad> loads;
    std::optional<std::size_t> tie;  // branch index of the UFCL tie, when present

    std::size_t bus_count() const noexcept { return v_base.size(); }
    double z_base(std::size_t bus) const noexcept { return v_base[bus] * v_base[bus] / s_base_va; }
    double i_base(std::size_t bus) const noexcept;
};

// Requires validate(net) to be empty. Throws TopologyError when a
// non-transformer branch joins buses of different nominal voltage.
PuNetwork to_per_unit(const Network& net);
// Inverse of to_per_unit: rebuilds the ohmic network from the per-unit values.
Network from_per_unit(const PuNetwork& pu);

// --- topology ------------------------------------------------------------

struct TiePartition {
    std::set<std::string> upstream;
    std::set<std::string> downstream;
};

// Splits the buses into the component holding the infinite grid and the
// component beyond the tie. Throws TopologyError when the tie is unknown or
// its removal does not disconnect the graph into exactly two parts.
TiePartition partition_by_tie(const Network& net, std::string_view tie_branch);

std::string_view to_string(BranchKind k);
std::string_view to_string(SourceKind k);

}  // namespace protcoord
