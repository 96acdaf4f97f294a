#include "qnet/cavity.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace qnet {

namespace {

const cplx kI(0.0, 1.0);

double effective_omega(double omega, const CavitySpec& c) {
    if (!std::isfinite(omega)) throw Error("scattering: non-finite detuning");
    return c.blocked() ? omega - *c.block_detuning : omega;
}

}  // namespace

void CavitySpec::validate() const {
    if (!(g >= 0.0)) throw std::invalid_argument("cavity: g must be >= 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("cavity: kappa must be > 0");
    if (!(kappa_prime >= 0.0)) throw std::invalid_argument("cavity: kappa_prime must be >= 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("cavity: gamma must be >= 0");
    if (block_detuning && !std::isfinite(*block_detuning))
        throw std::invalid_argument("cavity: block_detuning must be finite");
}

double CavitySpec::cooperativity() const {
    if (gamma <= 0.0 || kappa <= 0.0) return std::numeric_limits<double>::infinity();
    return g * g / (kappa * gamma);
}

cplx one_sided_reflection(double omega, const CavitySpec& cavity, Qubit q) {
    const double w = effective_omega(omega, cavity);
    const double gq = cavity.coupling(q);
    const double kt = cavity.kappa + cavity.kappa_prime;
    const cplx den = 2.0 * (gq * gq - w * w) + cavity.gamma * cplx(kt, -2.0 * w) - kI * kt * w;
    if (den == cplx(0.0, 0.0)) throw Error("one_sided_reflection: degenerate parameters");
    return 1.0 - 2.0 * cavity.kappa * cplx(cavity.gamma, -w) / den;
}

ScatterCoefficients two_sided_coefficients(double omega, const CavitySpec& cavity, Qubit q) {
    const double w = effective_omega(omega, cavity);
    const double gq = cavity.coupling(q);
    const double kt = cavity.kappa + cavity.kappa_prime;
    const cplx den = (gq * gq - w * w) + cavity.gamma * cplx(kt, -w) - kI * kt * w;
    if (den == cplx(0.0, 0.0)) throw Error("two_sided_coefficients: degenerate parameters");
    const cplx t = -cavity.kappa * cplx(cavity.gamma, -w) / den;
    return {1.0 + t, t, omega};
}

ScatterCoefficients frequency_domain_oracle(double omega, const CavitySpec& cavity, Qubit q) {
    const double w = effective_omega(omega, cavity);
    const double gq = cavity.coupling(q);
    const double sqk = std::sqrt(cavity.kappa);

    // Unknowns x = (C_b, C_e), unit input on one port:
    //   -i w C_b = g_q C_e - sqrt(kappa) b_in - (decay/2) C_b
    //   -i w C_e = -gamma C_e - g_q C_b
    // decay = kappa + kappa' (one-sided) or 2 kappa + 2 kappa' (two mirrors).
    const double mirrors = cavity.sidedness == Sidedness::one_sided ? 1.0 : 2.0;
    const double half_decay = 0.5 * mirrors * (cavity.kappa + cavity.kappa_prime);

    Eigen::Matrix2cd m;
    m(0, 0) = half_decay - kI * w;
    m(0, 1) = -gq;
    m(1, 0) = gq;
    m(1, 1) = cavity.gamma - kI * w;
    Eigen::Vector2cd rhs(-sqk, 0.0);

    const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (det == cplx(0.0, 0.0)) throw Error("frequency_domain_oracle: singular system");
    const Eigen::Vector2cd x = m.partialPivLu().solve(rhs);
    const cplx cb = x(0);

    if (cavity.sidedness == Sidedness::one_sided) {
        return {cplx(1.0, 0.0) + sqk * cb, std::nullopt, omega};
    }
    // Input on the right port: reflection on the same side, transmission on the
    // other; both ports apply b_out = b_in + sqrt(kappa) C_b.
    return {cplx(1.0, 0.0) + sqk * cb, sqk * cb, omega};
}

double group_delay(const std::function<cplx(double)>& coefficient_fn, double omega,
                   double rate_scale) {
    const cplx center = coefficient_fn(omega);
    if (std::abs(center) < 1e-9) throw Error("group_delay: amplitude too small, phase undefined");
    const double h = std::max(1e-6 * rate_scale, 1e-9 * std::abs(omega) + 1e-12 * rate_scale);
    const cplx hi = coefficient_fn(omega + h);
    const cplx lo = coefficient_fn(omega - h);
    // arg(hi/lo) avoids branch cuts of arg(hi) - arg(lo) near +-pi.
    return std::arg(hi / lo) / (2.0 * h);
}

}  // namespace qnet
