#ifndef QNET_FIDELITY_HPP
#define QNET_FIDELITY_HPP

#include <map>

#include "qnet/network.hpp"
#include "qnet/packet.hpp"

namespace qnet {

// Ideal C-PHASE sign: -1 on the all-ones state, +1 otherwise.
inline int cp_sign(BasisState s, int n) { return s == all_ones_state(n) ? -1 : 1; }

struct GateReport {
    double fidelity = 0.0;
    double xi_star = 0.0;
    std::map<BasisState, cplx> overlaps;  // O_s at xi_star
    double success_probability = 0.0;
    double heralded_fidelity = 0.0;
};

struct FidelityOptions {
    double xi_tol_scale = 1e-6;     // xi tolerance = scale / kappa
    double xi_window_scale = 20.0;  // window = [-w/kappa - 5 sum(tau), +w/kappa]
    ElementModel model = ElementModel::physical;
};

// Gate fidelity
//   F_N(xi) = | 2^-N sum_s CP(s) Int e^{i w xi} |Phi(w)|^2 T(w, s) dw |^2
// maximized over the reference delay xi (coarse bracket + golden section).
// Also reports per-state overlaps at the optimum, the average transmitted
// probability P and the heralded fidelity F/P.
GateReport gate_fidelity(const NetworkSpec& spec, const WavePacket& packet,
                         const FidelityOptions& opts = {});

double optimal_xi(const NetworkSpec& spec, const WavePacket& packet,
                  const FidelityOptions& opts = {});

// |mean_s CP(s) O_s|^2 for externally supplied overlaps.
double fidelity_of_overlaps(const std::map<BasisState, cplx>& overlaps, int n);

// Success probability and heralded fidelity (= fidelity / success).
std::pair<double, double> heralded_report(const NetworkSpec& spec, const WavePacket& packet,
                                          const FidelityOptions& opts = {});

// Two-node entangled-state fidelity |(O_00 + O_01 + O_10 - O_11)/4|^2 built
// from the per-state overlaps at the optimized xi. Requires N = 2.
double entanglement_fidelity(const NetworkSpec& spec, const WavePacket& packet,
                             const FidelityOptions& opts = {});

enum class SmallParameter { inv_cooperativity, kappa_prime_ratio, eta };

struct CoefficientOptions {
    std::size_t grid_points = 2048;
    double grid_halfspan_bandwidths = 8.0;
    double drift_tolerance = 0.20;  // relative slope drift between refinements
};

// Linear slope of (1 - F_N) in one small parameter, extracted by two-point
// finite differences in the asymptotic regime (all other small parameters
// pinned near zero, bandwidth 1e-4 kappa where a packet is still needed) with
// Richardson refinement. Throws if the slope drifts more than the tolerance
// between refinements (non-asymptotic regime).
double expansion_coefficient(int n, SmallParameter which, const CoefficientOptions& opts = {});

// The bandwidth block of 1 - F_N: coefficients (a, b, c) of
// (a / kappa^2 + b tau / kappa + c tau^2) * dOmega^2, recovered from a
// quadratic fit over tau in {0, 1/(2 kappa), 1/kappa}.
struct BandwidthBlock {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

BandwidthBlock bandwidth_coefficients(int n, const CoefficientOptions& opts = {});

}  // namespace qnet

#endif
