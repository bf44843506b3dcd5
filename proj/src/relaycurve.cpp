#include <array>
#include <cmath>
#include <string>

#include "protcoord/error.hpp"
#include "protcoord/relaycurve.hpp"

namespace protcoord {

namespace {

struct Family {
    std::string_view name;
    CurveConstants k;
};

// IEC 60255-151 and IEEE C37.112 constants.
constexpr std::array kFamilies{
    Family{"iec_standard_inverse", {0.14, 0.0, 0.02}},
    Family{"iec_very_inverse", {13.5, 0.0, 1.0}},
    Family{"iec_extremely_inverse", {80.0, 0.0, 2.0}},
    Family{"ieee_moderately_inverse", {0.0515, 0.114, 0.02}},
    Family{"ieee_very_inverse", {19.61, 0.491, 2.0}},
    Family{"ieee_extremely_inverse", {28.2, 0.1217, 2.0}},
};

constexpr std::array<std::string_view, kFamilies.size() + 1> kNames{
    kFamilies[0].name, kFamilies[1].name, kFamilies[2].name, kFamilies[3].name,
    kFamilies[4].name, kFamilies[5].name, "custom",
};

}  // namespace

double curve_time(const CurveConstants& k, double tds, double multiple) {
    return tds * (k.b + k.a / std::expm1(k.c * std::log(multiple)));
}

TripDecision operate_time(const RelaySpec& relay, double current_a) {
    TripDecision d;
    d.multiple = current_a / relay.pickup_a;
    if (d.multiple > 1.0) d.time_s = curve_time(relay.curve, relay.tds, d.multiple);
    return d;
}

CurveConstants curve_family(std::string_view name, std::optional<CurveConstants> explicit_constants) {
    if (name == "custom") {
        if (!explicit_constants) throw Error("curve family \"custom\" requires explicit a, b, c");
        return *explicit_constants;
    }
    for (const auto& f : kFamilies)
        if (f.name == name) {
            if (explicit_constants) throw Error("curve family \"" + std::string(name) + "\" takes no explicit constants");
            return f.k;
        }
    throw Error("unknown curve family \"" + std::string(name) + "\"");
}

std::span<const std::string_view> curve_family_names() { return kNames; }

}  // namespace protcoord
