#ifndef QNET_CAVITY_HPP
#define QNET_CAVITY_HPP

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>

namespace qnet {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Sidedness { one_sided, two_sided };

enum class Qubit : int { zero = 0, one = 1 };

// Physical parameters of one qubit-loaded cavity node. Rates are angular
// frequencies in a common unit system (the library itself is unit-agnostic).
//   g           qubit-cavity coupling (g applies when the qubit is |1>, 0 for |0>)
//   kappa       per-mirror transmission damping rate
//   kappa_prime per-mirror absorption loss rate
//   gamma       atomic excited-state amplitude decay rate
// A cavity with block_detuning set is shifted far off resonance and takes the
// photon detuned by that amount; in the ideal element model it reflects +1.
struct CavitySpec {
    double g = 0.0;
    double kappa = 1.0;
    double kappa_prime = 0.0;
    double gamma = 0.0;
    Sidedness sidedness = Sidedness::two_sided;
    std::optional<double> block_detuning;

    void validate() const;
    bool blocked() const { return block_detuning.has_value(); }
    double coupling(Qubit q) const { return q == Qubit::one ? g : 0.0; }
    double cooperativity() const;  // C = g^2 / (kappa * gamma)
};

struct ScatterCoefficients {
    cplx reflection;
    std::optional<cplx> transmission;  // absent for a one-sided cavity
    double omega = 0.0;
};

// Reflection coefficient of the one-sided cavity:
//   R(w) = 1 - 2 kappa (gamma - i w) /
//          [ 2 (g_q^2 - w^2) + gamma (kappa + kappa' - 2 i w) - i (kappa + kappa') w ]
// Throws on non-finite omega or an exactly vanishing denominator (parameter
// degeneracy, e.g. all rates zero).
cplx one_sided_reflection(double omega, const CavitySpec& cavity, Qubit q);

// Transmission/reflection of the symmetric two-sided cavity:
//   T(w) = -kappa (gamma - i w) /
//          [ (g_q^2 - w^2) + gamma (kappa + kappa' - i w) - i (kappa + kappa') w ]
//   R(w) = 1 + T(w)
ScatterCoefficients two_sided_coefficients(double omega, const CavitySpec& cavity, Qubit q);

// Same coefficients obtained by assembling and solving the frequency-domain
// linear system for the cavity and atomic amplitudes C_b, C_e and applying
// b_out = b_in + sqrt(kappa) C_b per port. Independent of the closed forms;
// used as an oracle against them.
ScatterCoefficients frequency_domain_oracle(double omega, const CavitySpec& cavity, Qubit q);

// d(arg f)/d(omega) by central finite difference with step
// h = max(1e-6 * rate_scale, 1e-9 |omega| + 1e-12 * rate_scale).
// rate_scale should be a characteristic rate of f (typically kappa).
// Throws if |f(omega)| < 1e-9 (phase undefined).
double group_delay(const std::function<cplx(double)>& coefficient_fn, double omega,
                   double rate_scale);

}  // namespace qnet

#endif
