#include "qnet/network.hpp"

#include <algorithm>
#include <cmath>

namespace qnet {

namespace {


struct Element {
    cplx r;  // reflection
    cplx t;  // transmission (0 for the one-sided end cavity)
};

Element element_coefficients(double omega, const CavitySpec& c, Qubit q, ElementModel model) {
    if (model == ElementModel::ideal) {
        if (c.blocked()) return {1.0, 0.0};
        if (c.sidedness == Sidedness::one_sided) return {q == Qubit::one ? 1.0 : -1.0, 0.0};
        return q == Qubit::one ? Element{1.0, 0.0} : Element{0.0, -1.0};
    }
    if (c.sidedness == Sidedness::one_sided) return {one_sided_reflection(omega, c, q), 0.0};
    const auto sc = two_sided_coefficients(omega, c, q);
    return {sc.reflection, *sc.transmission};
}

Qubit qubit_of(BasisState s, int k) { return qubit_bit(s, k) ? Qubit::one : Qubit::zero; }

}  // namespace

cplx PathSegment::factor(double omega) const {
    return std::exp(cplx(-eta, omega * tau + phi));
}

BasisState all_ones_state(int n) { return (BasisState{1} << n) - 1; }

int qubit_bit(BasisState s, int qubit_index) { return (s >> (qubit_index - 1)) & 1; }

BasisState flip_qubit(BasisState s, int qubit_index) { return s ^ (BasisState{1} << (qubit_index - 1)); }

int leading_ones_run(BasisState s, int n) {
    int run = 0;
    while (run < n && qubit_bit(s, run + 1)) ++run;
    return run;
}

std::string state_string(BasisState s, int n) {
    std::string out(n, '0');
    for (int i = 1; i <= n; ++i)
        if (qubit_bit(s, i)) out[i - 1] = '1';
    return out;
}

BasisState parse_state(const std::string& bits) {
    BasisState s = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            s |= BasisState{1} << i;
        else if (bits[i] != '0')
            throw std::invalid_argument("parse_state: expected a 0/1 string");
    }
    return s;
}

void NetworkSpec::validate() const {
    const int num = n();
    if (num < 1) throw std::invalid_argument("network: needs at least one cavity");
    if (num > 20) throw std::invalid_argument("network: too many cavities");
    for (int k = 0; k < num - 1; ++k)
        if (cavities[k].sidedness != Sidedness::two_sided)
            throw std::invalid_argument("network: cavities 1..N-1 must be two-sided");
    if (cavities[num - 1].sidedness != Sidedness::one_sided)
        throw std::invalid_argument("network: the last cavity must be one-sided");
    if (forward_segments.size() != static_cast<std::size_t>(num - 1) ||
        return_segments.size() != static_cast<std::size_t>(num - 1))
        throw std::invalid_argument("network: needs N-1 forward and N-1 return segments");
    for (const auto& c : cavities) c.validate();
    auto check_seg = [](const PathSegment& s) {
        if (!(s.tau >= 0.0) || !(s.eta >= 0.0) || !std::isfinite(s.phi))
            throw std::invalid_argument("network: segment needs tau >= 0, eta >= 0, finite phi");
    };
    for (const auto& s : forward_segments) check_seg(s);
    for (const auto& s : return_segments) check_seg(s);
    if (!(io_eta >= 0.0)) throw std::invalid_argument("network: io_eta must be >= 0");
}

std::vector<double> NetworkSpec::phi_values() const {
    std::vector<double> p(num_phis(), 0.0);
    for (std::size_t k = 0; k < forward_segments.size(); ++k) {
        p[2 * k] = forward_segments[k].phi;      // phi_{2k+1}
        p[2 * k + 1] = return_segments[k].phi;   // phi_{2k+2}
    }
    return p;
}

void NetworkSpec::set_phi_values(const std::vector<double>& p) {
    if (p.size() != num_phis())
        throw std::invalid_argument("network: expected 2(N-1) phase values");
    for (std::size_t k = 0; k < forward_segments.size(); ++k) {
        forward_segments[k].phi = p[2 * k];
        return_segments[k].phi = p[2 * k + 1];
    }
}

NetworkSpec make_uniform_network(int n, const CavitySpec& proto, double tau, double eta,
                                 double io_eta) {
    NetworkSpec spec;
    spec.io_eta = io_eta;
    for (int k = 0; k < n; ++k) {
        CavitySpec c = proto;
        c.sidedness = k == n - 1 ? Sidedness::one_sided : Sidedness::two_sided;
        spec.cavities.push_back(c);
    }
    spec.forward_segments.assign(n - 1, PathSegment{tau, eta, 0.0});
    spec.return_segments.assign(n - 1, PathSegment{tau, eta, 0.0});
    return spec;
}

// Eliminating the port amplitudes from the back of the chain: rho_k is the
// exit-bound amplitude emitted at cavity k per unit amplitude arriving on its
// front side. With L = (forward segment) * rho_{k+1} * (return segment),
// summing the re-injection round trips gives
//   rho_k = T_k + R_k^2 L / (1 - T_k L).
// At a lossless resonance T_k L -> 1 only together with R_k -> 0, and the
// re-entry term vanishes like R^2/(1 - T L); the guard takes that limit.
cplx basis_amplitude(double omega, const NetworkSpec& spec, BasisState state, ElementModel model) {
    const int n = spec.n();
    cplx rho;
    {
        const auto end = element_coefficients(omega, spec.cavities[n - 1], qubit_of(state, n), model);
        rho = end.r;
    }
    for (int k = n - 1; k >= 1; --k) {
        const auto el = element_coefficients(omega, spec.cavities[k - 1], qubit_of(state, k), model);
        const cplx loop = spec.forward_segments[k - 1].factor(omega) * rho *
                          spec.return_segments[k - 1].factor(omega);
        const cplx num = el.r * el.r * loop;
        const cplx den = 1.0 - el.t * loop;
        if (num == cplx(0.0, 0.0)) {
            rho = el.t;
        } else {
            if (den == cplx(0.0, 0.0)) throw Error("basis_amplitude: singular port system");
            rho = el.t + num / den;
        }
    }
    return std::exp(-spec.io_eta) * rho;
}

PathSumResult basis_amplitude_pathsum(double omega, const NetworkSpec& spec, BasisState state,
                                      int max_bounces, ElementModel model) {
    if (max_bounces < 1) throw std::invalid_argument("basis_amplitude_pathsum: max_bounces >= 1");
    const int n = spec.n();
    std::vector<Element> el(n);
    for (int k = 1; k <= n; ++k)
        el[k - 1] = element_coefficients(omega, spec.cavities[k - 1], qubit_of(state, k), model);
    std::vector<cplx> fwd(n - 1), ret(n - 1);
    for (int k = 0; k < n - 1; ++k) {
        fwd[k] = spec.forward_segments[k].factor(omega);
        ret[k] = spec.return_segments[k].factor(omega);
    }

    // front[k]: amplitude arriving at cavity k+1's front side;
    // back[k]: amplitude arriving at cavity k+1's back side.
    std::vector<cplx> front(n, 0.0), back(std::max(n - 1, 0), 0.0);
    front[0] = 1.0;
    cplx out = 0.0;
    double live_prev = 1.0;
    for (int bounce = 0; bounce < max_bounces; ++bounce) {
        std::vector<cplx> nfront(n, 0.0), nback(std::max(n - 1, 0), 0.0);
        for (int k = 1; k <= n; ++k) {
            const cplx a = front[k - 1];
            if (a == cplx(0.0, 0.0)) continue;
            if (k == n) {
                // one-sided end: reflect onto the back rail (or straight out for N=1)
                if (n == 1)
                    out += el[k - 1].r * a;
                else
                    nback[k - 2] += el[k - 1].r * a * ret[k - 2];
            } else {
                nfront[k] += el[k - 1].r * a * fwd[k - 1];  // onward along the front rail
                if (k == 1)
                    out += el[k - 1].t * a;  // transmitted at the entrance cavity: exit
                else
                    nback[k - 2] += el[k - 1].t * a * ret[k - 2];
            }
        }
        for (int k = 1; k <= n - 1; ++k) {
            const cplx a = back[k - 1];
            if (a == cplx(0.0, 0.0)) continue;
            if (k == 1)
                out += el[k - 1].r * a;  // past the entrance cavity: exit
            else
                nback[k - 2] += el[k - 1].r * a * ret[k - 2];
            nfront[k] += el[k - 1].t * a * fwd[k - 1];  // re-injected toward cavity k+1
        }
        front = std::move(nfront);
        back = std::move(nback);
        if (bounce + 2 == max_bounces) {
            live_prev = 0.0;
            for (const auto& a : front) live_prev += std::abs(a);
            for (const auto& a : back) live_prev += std::abs(a);
        }
    }
    double live = 0.0;
    for (const auto& a : front) live += std::abs(a);
    for (const auto& a : back) live += std::abs(a);
    // Geometric-tail estimate: the circulating amplitude decays per bounce by
    // roughly live/live_prev, so the future output is bounded by the series sum.
    double gain = live_prev > 0.0 ? live / live_prev : 0.0;
    gain = std::min(gain, 0.999);
    const double io = std::exp(-spec.io_eta);
    return {io * out, io * live / (1.0 - gain)};
}

// Two-sided entrance cavity (a = g1^2) cascaded onto the one-sided end cavity
// (b = g2^2), both with the same kappa and gamma, kappa' = 0, written over the
// common denominator with u = gamma - i w.
cplx two_cavity_closed_form(double omega, double g1, double g2, double kappa, double gamma) {
    const double a = g1 * g1;
    const double b = g2 * g2;
    const cplx u(gamma, -omega);
    const cplx num = 2.0 * a * b - a * u * cplx(kappa, 2.0 * omega) -
                     2.0 * b * u * cplx(2.0 * kappa, omega) -
                     u * u * omega * cplx(2.0 * omega, -5.0 * kappa);
    const cplx den = 2.0 * a * b + a * u * cplx(kappa, -2.0 * omega) +
                     2.0 * b * u * cplx(2.0 * kappa, -omega) -
                     u * u * omega * cplx(2.0 * omega, 5.0 * kappa);
    if (den == cplx(0.0, 0.0)) throw Error("two_cavity_closed_form: degenerate parameters");
    return num / den;
}

// Ideal elements: the photon runs along the front rail while it meets blocked
// cavities or |1> qubits, turns around at the first open |0> (pi phase) or at
// the end mirror, and returns along the back rail. Segment noise phases are
// collected for each traversed pair.
PhaseExpression ideal_phase_table(const NetworkSpec& spec, BasisState state) {
    const int n = spec.n();
    PhaseExpression phase(spec.num_phis());
    int turnaround = n;  // cavity index where the photon reverses
    bool pi_flip = true;
    for (int k = 1; k <= n; ++k) {
        if (spec.cavities[k - 1].blocked() || qubit_bit(state, k)) {
            if (k == n) pi_flip = false;  // reflected off the end with zero phase
            continue;
        }
        turnaround = k;
        break;
    }
    if (pi_flip) phase.pi_coeff = 1;
    for (int j = 1; j <= turnaround - 1; ++j) {
        phase.phi_coeffs[2 * j - 2] += 1;  // phi_{2j-1}, forward leg
        phase.phi_coeffs[2 * j - 1] += 1;  // phi_{2j}, return leg
    }
    return phase;
}

BasisAmplitudeSet build_amplitude_set(const NetworkSpec& spec, const std::vector<double>& grid,
                                      ElementModel model) {
    spec.validate();
    BasisAmplitudeSet set;
    set.grid = grid;
    const BasisState count = BasisState{1} << spec.n();
    for (BasisState s = 0; s < count; ++s) {
        auto& col = set.amplitudes[s];
        col.reserve(grid.size());
        for (double w : grid) col.push_back(basis_amplitude(w, spec, s, model));
    }
    return set;
}

}  // namespace qnet
