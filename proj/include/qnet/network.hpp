#ifndef QNET_NETWORK_HPP
#define QNET_NETWORK_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qnet/cavity.hpp"
#include "qnet/phase.hpp"

namespace qnet {

// One directed inter-cavity path: delay tau, amplitude factor e^{-eta},
// static phase offset phi. A traversal multiplies by e^{i w tau} e^{-eta} e^{i phi}.
struct PathSegment {
    double tau = 0.0;
    double eta = 0.0;
    double phi = 0.0;

    cplx factor(double omega) const;
};

// Basis states of the N-qubit register are bitmasks with qubit i (1-based)
// stored in bit i-1. The display string "q1 q2 ... qN" reads left to right.
using BasisState = std::uint32_t;

BasisState all_ones_state(int n);
int qubit_bit(BasisState s, int qubit_index);             // 1-based qubit index
BasisState flip_qubit(BasisState s, int qubit_index);     // 1-based
int leading_ones_run(BasisState s, int n);                // run starting at qubit 1
std::string state_string(BasisState s, int n);
BasisState parse_state(const std::string& bits);          // "101" -> state

// The N-cavity interferometer: cavities 1..N-1 two-sided, cavity N one-sided.
// The photon enters on the front rail at cavity 1 and exits on the back rail
// at cavity 1. forward_segments[k-1] is the front-rail path cavity k -> k+1
// (noise phase index 2k-1); return_segments[k-1] is the back-rail path
// cavity k+1 -> k (noise phase index 2k). io_eta is the amplitude loss
// exponent of the single input-output channel, applied once per run.
struct NetworkSpec {
    std::vector<CavitySpec> cavities;
    std::vector<PathSegment> forward_segments;
    std::vector<PathSegment> return_segments;
    double io_eta = 0.0;

    int n() const { return static_cast<int>(cavities.size()); }
    std::size_t num_phis() const { return 2 * (cavities.size() - 1); }
    void validate() const;

    std::vector<double> phi_values() const;             // phi_1 .. phi_{2(N-1)}
    void set_phi_values(const std::vector<double>& p);  // same order
};

// Uniform chain builder: identical cavities, identical segment delay/loss.
NetworkSpec make_uniform_network(int n, const CavitySpec& proto, double tau = 0.0,
                                 double eta = 0.0, double io_eta = 0.0);

// Element model used when evaluating the chain. `physical` uses the cavity
// scattering formulas; `ideal` replaces every element by its strong-coupling
// limit (R=+1 for |1> and blocked cavities, T=-1 / R=-1 for |0>), keeping the
// segment factors.
enum class ElementModel { physical, ideal };

// Qubit-state-conditioned amplitude from the input port to the output port,
// obtained by eliminating the directed-graph linear system over the port
// amplitudes cavity by cavity. Exact for passive elements, including the
// points where a loop gain reaches modulus one (there the re-entry reflection
// vanishes with it).
cplx basis_amplitude(double omega, const NetworkSpec& spec, BasisState state,
                     ElementModel model = ElementModel::physical);

struct PathSumResult {
    cplx value;
    double truncation_bound;  // L1 norm of amplitude still circulating
};

// Same amplitude by explicit path enumeration: amplitudes are propagated
// bounce by bounce (one cavity encounter per step per live amplitude) and the
// exit contributions accumulated, a truncated geometric series over the loop
// traversals. Converges to basis_amplitude since every loop gain has modulus
// below one away from lossless degeneracies.
PathSumResult basis_amplitude_pathsum(double omega, const NetworkSpec& spec, BasisState state,
                                      int max_bounces,
                                      ElementModel model = ElementModel::physical);

// Closed form for the two-cavity chain (two-sided entrance cavity g1, one-sided
// end cavity g2, same kappa and gamma in both, kappa' = 0, trivial segments).
// Derived by the same consistent field matching as basis_amplitude; kept as an
// independent polynomial expression for cross-checks.
cplx two_cavity_closed_form(double omega, double g1, double g2, double kappa, double gamma);

// Ideal-limit symbolic phase of each basis state: pi unless every unblocked
// qubit the photon meets before turning around is |1>, plus the noise phases
// of the traversed segments. Blocked cavities reflect +1 and are passed over.
PhaseExpression ideal_phase_table(const NetworkSpec& spec, BasisState state);

// Amplitude table sampled on a detuning grid, one column per basis state.
struct BasisAmplitudeSet {
    std::vector<double> grid;
    std::map<BasisState, std::vector<cplx>> amplitudes;
};

BasisAmplitudeSet build_amplitude_set(const NetworkSpec& spec, const std::vector<double>& grid,
                                      ElementModel model = ElementModel::physical);

}  // namespace qnet

#endif
