#ifndef QNET_PACKET_HPP
#define QNET_PACKET_HPP

#include <vector>

#include "qnet/cavity.hpp"

namespace qnet {

// Spectral description of a single-photon pulse: complex amplitude Phi(w) on
// an ordered detuning grid. The frequency/time conventions pair
//   b(t) = (1/sqrt(2 pi)) Int dw e^{-i w t} Phi(w)
//   Phi(w) = (1/sqrt(2 pi)) Int dt e^{+i w t} b(t)
// so a coefficient e^{i w T} acting on Phi delays the pulse by T.
struct WavePacket {
    std::vector<double> grid;
    std::vector<cplx> amplitude;
    double delta_omega = 0.0;  // Gaussian bandwidth, 0 if not constructed that way

    double delta_t() const;  // pulse duration 2 pi / delta_omega
    double norm() const;     // Int |Phi|^2 dw (trapezoid)
};

std::vector<double> uniform_grid(double halfspan, std::size_t points, double center = 0.0);

// Gaussian packet with |Phi(w)|^2 = exp(-w^2 / 2 dw^2) / (dw sqrt(2 pi)) and
// zero phase, renormalized on the grid. The grid must span at least +-6 dw.
WavePacket gaussian_packet(double delta_omega, const std::vector<double>& grid);

// Int a*(w) b(w) dw by trapezoid; grids must match.
cplx overlap(const WavePacket& a, const WavePacket& b);

// Packet with amplitude multiplied by e^{i w xi}.
WavePacket xi_shifted(const WavePacket& p, double xi);

// Sampled time-domain signal on the uniform grid conjugate to the packet's
// frequency grid (span T = 2 pi / dw_step, centered on t = 0).
struct TimeSeries {
    std::vector<double> t;
    std::vector<cplx> samples;

    double norm() const;  // Int |b|^2 dt (trapezoid)
};

TimeSeries to_time_domain(const WavePacket& p, std::size_t oversample = 1);
WavePacket from_time_domain(const TimeSeries& s, const std::vector<double>& grid);

}  // namespace qnet

#endif
