#include "qnet/fidelity.hpp"

#include <cmath>

#include "qnet/overlap_engine.hpp"

namespace qnet {

double fidelity_of_overlaps(const std::map<BasisState, cplx>& overlaps, int n) {
    cplx acc = 0.0;
    for (const auto& [s, o] : overlaps) acc += static_cast<double>(cp_sign(s, n)) * o;
    acc /= static_cast<double>(BasisState{1} << n);
    return std::norm(acc);
}

GateReport gate_fidelity(const NetworkSpec& spec, const WavePacket& packet,
                         const FidelityOptions& opts) {
    OverlapEngine eng(spec, packet, opts.model);
    const int n = eng.n();
    const BasisState count = BasisState{1} << n;
    std::vector<cplx> c(count);
    for (BasisState s = 0; s < count; ++s)
        c[s] = static_cast<double>(cp_sign(s, n)) / static_cast<double>(count);

    const auto [xi_star, fmax] =
        eng.maximize_xi(c, xi_window_low(spec, opts.xi_window_scale),
                        xi_window_high(spec, opts.xi_window_scale),
                        xi_tolerance(spec, opts.xi_tol_scale));

    GateReport report;
    report.xi_star = xi_star;
    report.fidelity = fmax;
    for (BasisState s = 0; s < count; ++s) report.overlaps[s] = eng.state_overlap(s, xi_star);
    report.success_probability = eng.success_probability();
    if (report.success_probability < 1e-12)
        throw Error("gate_fidelity: no transmitted signal to herald on");
    report.heralded_fidelity = report.fidelity / report.success_probability;
    return report;
}

double optimal_xi(const NetworkSpec& spec, const WavePacket& packet, const FidelityOptions& opts) {
    return gate_fidelity(spec, packet, opts).xi_star;
}

std::pair<double, double> heralded_report(const NetworkSpec& spec, const WavePacket& packet,
                                          const FidelityOptions& opts) {
    const auto report = gate_fidelity(spec, packet, opts);
    return {report.success_probability, report.heralded_fidelity};
}

double entanglement_fidelity(const NetworkSpec& spec, const WavePacket& packet,
                             const FidelityOptions& opts) {
    if (spec.n() != 2) throw Error("entanglement_fidelity: two-node network required");
    const auto report = gate_fidelity(spec, packet, opts);
    const cplx sum = report.overlaps.at(parse_state("00")) + report.overlaps.at(parse_state("01")) +
                     report.overlaps.at(parse_state("10")) - report.overlaps.at(parse_state("11"));
    return std::norm(0.25 * sum);
}

namespace {

// Dimensionless working point for coefficient extraction: kappa = 1,
// gamma = 0.1, bandwidth 1e-4 kappa unless stated otherwise.
struct ExtractionSetup {
    double kappa = 1.0;
    double gamma = 0.1;
    std::size_t points;
    double halfspan;

    explicit ExtractionSetup(const CoefficientOptions& o)
        : points(o.grid_points), halfspan(o.grid_halfspan_bandwidths) {}

    double one_minus_f(int n, double coop, double kappa_prime, double eta, double tau,
                       double delta_omega) const {
        CavitySpec proto;
        proto.kappa = kappa;
        proto.gamma = gamma;
        proto.kappa_prime = kappa_prime;
        proto.g = std::sqrt(coop * kappa * gamma);
        const NetworkSpec spec = make_uniform_network(n, proto, tau, eta, eta);
        const auto grid = uniform_grid(halfspan * delta_omega, points);
        const auto packet = gaussian_packet(delta_omega, grid);
        return 1.0 - gate_fidelity(spec, packet).fidelity;
    }
};

}  // namespace

double expansion_coefficient(int n, SmallParameter which, const CoefficientOptions& opts) {
    const ExtractionSetup setup(opts);
    const double dw = 1e-4;

    auto drift_check = [&](double s_fine, double s_coarse, const char* label) {
        const double drift = std::abs(s_fine - s_coarse) / std::max(std::abs(s_fine), 1e-300);
        if (drift > opts.drift_tolerance)
            throw Error(std::string("expansion_coefficient: non-asymptotic regime for ") + label);
    };

    switch (which) {
        case SmallParameter::inv_cooperativity: {
            const double floor = setup.one_minus_f(n, 1e11, 0.0, 0.0, 0.0, dw);
            const double s1 = (setup.one_minus_f(n, 1e3, 0.0, 0.0, 0.0, dw) - floor) * 1e3;
            const double s2 = (setup.one_minus_f(n, 2e3, 0.0, 0.0, 0.0, dw) - floor) * 2e3;
            drift_check(s2, s1, "1/C");
            return 2.0 * s2 - s1;
        }
        case SmallParameter::kappa_prime_ratio: {
            const double coop = 1e8;
            const double floor = setup.one_minus_f(n, coop, 0.0, 0.0, 0.0, dw);
            const double x = 5e-3;
            const double s1 =
                (setup.one_minus_f(n, coop, x * setup.kappa, 0.0, 0.0, dw) - floor) / x;
            const double s2 =
                (setup.one_minus_f(n, coop, 2.0 * x * setup.kappa, 0.0, 0.0, dw) - floor) /
                (2.0 * x);
            drift_check(s1, s2, "kappa'/kappa");
            return 2.0 * s1 - s2;
        }
        case SmallParameter::eta: {
            const double coop = 1e8;
            const double floor = setup.one_minus_f(n, coop, 0.0, 0.0, 0.0, dw);
            const double x = 5e-3;
            const double s1 = (setup.one_minus_f(n, coop, 0.0, x, 0.0, dw) - floor) / x;
            const double s2 =
                (setup.one_minus_f(n, coop, 0.0, 2.0 * x, 0.0, dw) - floor) / (2.0 * x);
            drift_check(s1, s2, "eta");
            return 2.0 * s1 - s2;
        }
    }
    throw Error("expansion_coefficient: unknown parameter");
}

BandwidthBlock bandwidth_coefficients(int n, const CoefficientOptions& opts) {
    const ExtractionSetup setup(opts);
    const double coop = 1e9;
    const double dw0 = 1e-4;

    auto block_at_tau = [&](double tau) {
        const double floor = setup.one_minus_f(n, coop, 0.0, 0.0, tau, dw0);
        const double d1 = 1e-2;
        const double s1 = (setup.one_minus_f(n, coop, 0.0, 0.0, tau, d1) - floor) / (d1 * d1);
        const double s2 =
            (setup.one_minus_f(n, coop, 0.0, 0.0, tau, 2.0 * d1) - floor) / (4.0 * d1 * d1);
        return (4.0 * s1 - s2) / 3.0;  // Richardson in dOmega^2
    };

    // tau nodes 0, 1/(2 kappa), 1/kappa; exact quadratic through the block values
    const double b0 = block_at_tau(0.0);
    const double bh = block_at_tau(0.5 / setup.kappa);
    const double b1 = block_at_tau(1.0 / setup.kappa);
    BandwidthBlock out;
    out.a = b0;
    out.b = 4.0 * bh - 3.0 * b0 - b1;
    out.c = 2.0 * b1 + 2.0 * b0 - 4.0 * bh;
    return out;
}

}  // namespace qnet
