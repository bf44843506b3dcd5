#include <cmath>
#include <string>
#include <vector>

#include "protcoord/error.hpp"
#include "protcoord/faultcalc.hpp"

// Deliberately shares nothing with the per-unit path beyond the Network
// type: every impedance is referred to the voltage level of bus 0 in ohms,
// the system carries the fault current as an extra unknown, and the matrix is
// inverted outright.

namespace protcoord {

namespace {

using Mat = std::vector<std::vector<Complex>>;

Mat gauss_jordan_inverse(Mat a) {
    const std::size_t n = a.size();
    Mat inv(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) == 0.0) throw SolveError("oracle: singular augmented system");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);

        const Complex d = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Complex f = a[r][col];
            if (f == Complex{}) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

struct Referred {
    double v_ref;                  // LL volts of the reference level
    std::vector<double> v_nom;     // LL volts per bus
    std::vector<Complex> z_branch;  // ohms at the reference level
};

// (V_ref / V_bus)^2 brings ohms stated on bus's level to the reference level.
double refer(const Referred& r, std::size_t bus) {
    const double ratio = r.v_ref / r.v_nom[bus];
    return ratio * ratio;
}

std::size_t find_bus(const Network& net, const std::string& id) {
    for (std::size_t i = 0; i < net.buses.size(); ++i)
        if (net.buses[i].id == id) return i;
    throw ReferenceError(id, "oracle");
}

}  // namespace

FaultResult oracle_solve(const Network& net, const FaultSpec& fault, double ufcl_ohms) {
    const std::size_t n = net.buses.size();
    if (n == 0) throw Error("oracle: empty network");
    if (n > kOracleMaxBuses)
        throw Error("oracle supports at most " + std::to_string(kOracleMaxBuses) + " buses, got " + std::to_string(n));
    if (ufcl_ohms < 0.0) throw Error("ufcl resistance must be >= 0");
    if (fault.fault_impedance.real() < 0.0) throw Error("fault impedance must have Re >= 0");

    Referred ref;
    ref.v_ref = net.buses[0].nominal_voltage;
    for (const auto& b : net.buses) ref.v_nom.push_back(b.nominal_voltage);

    // Augmented matrix: rows 0..n-1 are KCL at each bus, row n ties the
    // faulted bus voltage to the fault current through Zf.
    Mat a(n + 1, std::vector<Complex>(n + 1));
    std::vector<Complex> rhs(n + 1);

    for (const auto& br : net.branches) {
        const std::size_t f = find_bus(net, br.from_bus);
        const std::size_t t = find_bus(net, br.to_bus);
        const std::size_t stated = (br.kind == BranchKind::transformer && br.referred_side == Side::to) ? t : f;
        Complex z = br.impedance;
        if (net.ufcl && net.ufcl->tie_branch == br.id) z += ufcl_ohms;
        z *= refer(ref, stated);
        ref.z_branch.push_back(z);
        const Complex y = 1.0 / z;
        a[f][f] += y;
        a[t][t] += y;
        a[f][t] -= y;
        a[t][f] -= y;
    }
    if (ufcl_ohms > 0.0 && !net.ufcl) throw Error("ufcl resistance given but the network has no ufcl");

    const double v_phase_ref = ref.v_ref / std::sqrt(3.0);
    for (const auto& s : net.sources) {
        if (!s.in_service) continue;
        const std::size_t k = find_bus(net, s.bus);
        Complex z = s.internal_impedance;
        if (s.kind == SourceKind::induction_dg) z *= net.induction_impedance_multiplier;
        z *= refer(ref, k);
        a[k][k] += 1.0 / z;
        rhs[k] += s.emf_pu * v_phase_ref / z;
    }
    for (const auto& l : net.loads) {
        const std::size_t k = find_bus(net, l.bus);
        a[k][k] += 1.0 / (l.impedance * refer(ref, k));
    }

    const std::size_t kf = find_bus(net, fault.bus);
    a[kf][n] = 1.0;  // fault current leaves bus kf
    a[n][kf] = 1.0;
    a[n][n] = -fault.fault_impedance * refer(ref, kf);

    const Mat inv = gauss_jordan_inverse(a);
    std::vector<Complex> x(n + 1);
    for (std::size_t r = 0; r <= n; ++r)
        for (std::size_t c = 0; c <= n; ++c) x[r] += inv[r][c] * rhs[c];

    // Referred amperes become actual amperes on a bus by the turns ratio.
    auto to_actual = [&](Complex i_ref, std::size_t bus) { return i_ref * ref.v_ref / ref.v_nom[bus]; };

    FaultResult out;
    out.fault_bus = fault.bus;
    out.fault_current = to_actual(x[n], kf);
    std::vector<Complex> i_ref(net.branches.size());
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const std::size_t f = find_bus(net, net.branches[i].from_bus);
        const std::size_t t = find_bus(net, net.branches[i].to_bus);
        i_ref[i] = (x[f] - x[t]) / ref.z_branch[i];
        out.branch_currents[net.branches[i].id] = to_actual(i_ref[i], f);
    }
    for (const auto& r : net.relays) {
        std::size_t bi = 0;
        while (net.branches[bi].id != r.branch) ++bi;
        const std::string& end = r.orientation == Orientation::from_to ? net.branches[bi].from_bus : net.branches[bi].to_bus;
        out.relay_currents[r.id] = std::abs(to_actual(i_ref[bi], find_bus(net, end)));
    }
    for (std::size_t k = 0; k < n; ++k) out.bus_voltages_pu[net.buses[k].id] = x[k] / v_phase_ref;
    return out;
}

}  // namespace protcoord
