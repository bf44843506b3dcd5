#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "protcoord/error.hpp"
#include "protcoord/netmodel.hpp"
#include "protcoord/relaycurve.hpp"

namespace protcoord {

using json = nlohmann::json;

namespace {

std::string line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
    return "line " + std::to_string(line);
}

// Field access with JSON-pointer loci for error messages.
class Record {
public:
    Record(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    [[noreturn]] static void fail(const std::string& locus, const std::string& what) {
        throw FormatError(locus.empty() ? "/" : locus, what);
    }

    std::string at(std::string_view key) const { return path_ + "/" + std::string(key); }
    bool has(std::string_view key) const { return j_.contains(std::string(key)); }

    std::string str(std::string_view key) const {
        const auto& v = field(key);
        if (!v.is_string()) fail(at(key), "expected a string");
        return v.get<std::string>();
    }

    double num(std::string_view key) const {
        const auto& v = field(key);
        if (!v.is_number()) fail(at(key), "expected a number");
        return v.get<double>();
    }

    double num_or(std::string_view key, double fallback) const { return has(key) ? num(key) : fallback; }

    bool flag_or(std::string_view key, bool fallback) const {
        if (!has(key)) return fallback;
        const auto& v = field(key);
        if (!v.is_boolean()) fail(at(key), "expected true or false");
        return v.get<bool>();
    }

    Complex impedance(std::string_view key) const {
        Record z(field(key), at(key));
        return {z.num("r"), z.num("x")};
    }

    template <typename Enum, std::size_t N>
    Enum choice(std::string_view key, const std::pair<std::string_view, Enum> (&options)[N]) const {
        const std::string s = str(key);
        for (const auto& [name, value] : options)
            if (name == s) return value;
        std::string allowed;
        for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
        fail(at(key), "unknown value \"" + s + "\" (expected one of: " + allowed + ")");
    }

    const json& field(std::string_view key) const {
        auto it = j_.find(std::string(key));
        if (it == j_.end()) fail(at(key), "missing required field");
        return *it;
    }

    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
};

const json& array_field(const json& root, const char* key, bool required) {
    static const json empty = json::array();
    auto it = root.find(key);
    if (it == root.end()) {
        if (required) throw FormatError(std::string("/") + key, "missing required array");
        return empty;
    }
    if (!it->is_array()) throw FormatError(std::string("/") + key, "expected an array");
    return *it;
}

constexpr std::pair<std::string_view, BranchKind> kBranchKinds[] = {
    {"line", BranchKind::line}, {"transformer", BranchKind::transformer}, {"tie", BranchKind::tie}};
constexpr std::pair<std::string_view, Side> kSides[] = {{"from", Side::from}, {"to", Side::to}};
constexpr std::pair<std::string_view, SourceKind> kSourceKinds[] = {{"infinite_grid", SourceKind::infinite_grid},
                                                                    {"sync_dg", SourceKind::sync_dg},
                                                                    {"induction_dg", SourceKind::induction_dg}};
constexpr std::pair<std::string_view, Orientation> kOrientations[] = {{"from_to", Orientation::from_to},
                                                                      {"to_from", Orientation::to_from}};

RelaySpec parse_relay(const Record& r) {
    RelaySpec relay;
    relay.id = r.str("id");
    relay.branch = r.str("branch");
    relay.orientation = r.has("orientation") ? r.choice("orientation", kOrientations) : Orientation::from_to;
    relay.pickup_a = r.num("pickup_a");
    relay.tds = r.num("tds");

    Record curve(r.field("curve"), r.at("curve"));
    const bool has_abc = curve.has("a") || curve.has("b") || curve.has("c");
    relay.curve_family = curve.has("family") ? curve.str("family") : "custom";
    std::optional<CurveConstants> explicit_constants;
    if (has_abc) {
        if (relay.curve_family != "custom")
            Record::fail(curve.path(), "explicit a/b/c are only accepted with family \"custom\"");
        explicit_constants = CurveConstants{curve.num("a"), curve.num("b"), curve.num("c")};
    }
    try {
        relay.curve = curve_family(relay.curve_family, explicit_constants);
    } catch (const Error& e) {
        Record::fail(curve.path(), e.what());
    }
    return relay;
}

void check_references(const Network& net) {
    std::unordered_set<std::string> buses, branches, relays;
    for (const auto& b : net.buses) buses.insert(b.id);
    for (const auto& b : net.branches) branches.insert(b.id);
    for (const auto& r : net.relays) relays.insert(r.id);

    auto need = [](const auto& set, const std::string& id, const std::string& context) {
        if (!set.contains(id)) throw ReferenceError(id, context);
    };
    for (const auto& b : net.branches) {
        need(buses, b.from_bus, "branch \"" + b.id + "\"");
        need(buses, b.to_bus, "branch \"" + b.id + "\"");
    }
    for (const auto& s : net.sources) need(buses, s.bus, "source \"" + s.id + "\"");
    for (const auto& l : net.loads) need(buses, l.bus, "load \"" + l.id + "\"");
    for (const auto& r : net.relays) need(branches, r.branch, "relay \"" + r.id + "\"");
    for (const auto& p : net.pairs) {
        const std::string ctx = "pair (" + p.main + ", " + p.backup + ")";
        need(relays, p.main, ctx);
        need(relays, p.backup, ctx);
        need(buses, p.fault_bus, ctx);
    }
    if (net.ufcl) {
        need(branches, net.ufcl->tie_branch, "ufcl");
        need(buses, net.ufcl->downstream_end, "ufcl");
    }
}

}  // namespace

Network load_network(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw FormatError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    if (!root.is_object()) throw FormatError("/", "network document must be a JSON object");

    const Record top(root, "");
    Network net;
    if (top.has("name")) net.name = top.str("name");
    net.s_base_va = top.num_or("s_base_va", net.s_base_va);
    net.induction_impedance_multiplier = top.num_or("induction_impedance_multiplier", net.induction_impedance_multiplier);

    const auto& buses = array_field(root, "buses", true);
    for (std::size_t i = 0; i < buses.size(); ++i) {
        Record r(buses[i], "/buses/" + std::to_string(i));
        net.buses.push_back({r.str("id"), r.num("nominal_voltage")});
    }

    const auto& branches = array_field(root, "branches", false);
    for (std::size_t i = 0; i < branches.size(); ++i) {
        Record r(branches[i], "/branches/" + std::to_string(i));
        Branch b;
        b.id = r.str("id");
        b.from_bus = r.str("from_bus");
        b.to_bus = r.str("to_bus");
        b.kind = r.choice("kind", kBranchKinds);
        b.impedance = r.impedance("impedance");
        b.referred_side = r.has("referred_side") ? r.choice("referred_side", kSides) : Side::from;
        net.branches.push_back(std::move(b));
    }

    const auto& sources = array_field(root, "sources", true);
    for (std::size_t i = 0; i < sources.size(); ++i) {
        Record r(sources[i], "/sources/" + std::to_string(i));
        Source s;
        s.id = r.str("id");
        s.bus = r.str("bus");
        s.kind = r.choice("kind", kSourceKinds);
        s.internal_impedance = r.impedance("internal_impedance");
        s.emf_pu = r.num_or("emf_pu", 1.0);
        s.in_service = r.flag_or("in_service", true);
        net.sources.push_back(std::move(s));
    }

    const auto& loads = array_field(root, "loads", false);
    for (std::size_t i = 0; i < loads.size(); ++i) {
        Record r(loads[i], "/loads/" + std::to_string(i));
        net.loads.push_back({r.str("id"), r.str("bus"), r.impedance("impedance")});
    }

    const auto& relays = array_field(root, "relays", false);
    for (std::size_t i = 0; i < relays.size(); ++i)
        net.relays.push_back(parse_relay(Record(relays[i], "/relays/" + std::to_string(i))));

    const auto& pairs = array_field(root, "pairs", false);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        Record r(pairs[i], "/pairs/" + std::to_string(i));
        net.pairs.push_back({r.str("main"), r.str("backup"), r.str("fault_bus")});
    }

    if (root.contains("ufcl") && !root["ufcl"].is_null()) {
        Record r(root["ufcl"], "/ufcl");
        UfclSpec u;
        u.tie_branch = r.str("tie_branch");
        u.r_limit = r.num("r_limit");
        u.r_normal = r.num_or("r_normal", 0.0);
        u.downstream_end = r.str("downstream_end");
        net.ufcl = std::move(u);
    }

    check_references(net);
    return net;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Network load_network_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return load_network(text);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + " " + e.locus(), std::string(e.what()).substr(e.locus().size() + 2));
    }
}

std::filesystem::path bundled_dataset_path() {
    return std::filesystem::path(PROTCOORD_DATA_DIR) / "seven_bus_dg.json";
}

}  // namespace protcoord
