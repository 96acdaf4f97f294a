#ifndef QNET_TIMEDOMAIN_HPP
#define QNET_TIMEDOMAIN_HPP

#include "qnet/packet.hpp"

namespace qnet {

// One-sided cavity scattering integrated in the time domain from the driven
// amplitude equations
//   dC_b/dt = g_q C_e - sqrt(kappa) b_in(t) - (kappa + kappa')/2 C_b
//   dC_e/dt = -gamma C_e - g_q C_b
//   b_out(t) = b_in(t) + sqrt(kappa) C_b(t)
// (gamma is an amplitude rate: excited-state population decays at 2 gamma).
struct TimeDomainState {
    std::vector<double> t;
    std::vector<cplx> b_in;
    std::vector<cplx> b_out;
    std::vector<cplx> c_b;
    std::vector<cplx> c_e;

    double input_norm() const;
    double output_norm() const;
};

struct ScatterOptions {
    double rtol = 1e-10;
    std::size_t oversample = 128;  // fine-grid factor for evaluating b_in(t)
};

// Integrates the amplitude equations with an adaptive Dormand-Prince 5(4)
// stepper, sampling on the packet's conjugate time grid. The time origin is
// placed so the pulse peak arrives after at least 5/kappa of quiescence;
// violations raise a coverage error.
TimeDomainState scatter_time_domain(const WavePacket& packet, const CavitySpec& cavity, Qubit q,
                                    const ScatterOptions& opts = {});

// Spectral amplitude of the scattered output on the packet's own grid.
WavePacket output_packet(const TimeDomainState& state, const WavePacket& packet);

// Location of the peak of |samples| refined by quadratic interpolation.
double peak_time(const std::vector<double>& t, const std::vector<cplx>& samples);

}  // namespace qnet

#endif
