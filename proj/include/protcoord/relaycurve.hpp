#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "protcoord/netmodel.hpp"

namespace protcoord {

struct TripDecision {
    std::optional<double> time_s;  // empty: no trip
    double multiple = 0.0;         // M = I / Ip

    bool trips() const noexcept { return time_s.has_value(); }
};

// t = TDS * (B + A / (M^C - 1)) for M > 1, otherwise no trip.
TripDecision operate_time(const RelaySpec& relay, double current_a);
double curve_time(const CurveConstants& k, double tds, double multiple);

// Documented names: iec_standard_inverse, iec_very_inverse,
// iec_extremely_inverse, ieee_moderately_inverse, ieee_very_inverse,
// ieee_extremely_inverse, custom. "custom" returns `explicit_constants` and
// throws when none are given; unknown names throw.
CurveConstants curve_family(std::string_view name,
                            std::optional<CurveConstants> explicit_constants = std::nullopt);
std::span<const std::string_view> curve_family_names();

}  // namespace protcoord
