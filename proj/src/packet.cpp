#include "qnet/packet.hpp"

#include <algorithm>
#include <cmath>

#include "qnet/fft.hpp"

namespace qnet {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

double trapezoid_weight(const std::vector<double>& grid, std::size_t k) {
    if (grid.size() < 2) return 0.0;
    if (k == 0) return 0.5 * (grid[1] - grid[0]);
    if (k == grid.size() - 1) return 0.5 * (grid[k] - grid[k - 1]);
    return 0.5 * (grid[k + 1] - grid[k - 1]);
}

void require_uniform(const std::vector<double>& grid) {
    if (grid.size() < 2) throw Error("packet: grid needs at least two points");
    const double step = grid[1] - grid[0];
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        if (std::abs((grid[k + 1] - grid[k]) - step) > 1e-9 * std::abs(step))
            throw Error("packet: transform requires a uniform grid");
    }
}

}  // namespace

double WavePacket::delta_t() const {
    if (delta_omega <= 0.0) throw Error("packet: no bandwidth recorded");
    return 2.0 * kPi / delta_omega;
}

double WavePacket::norm() const {
    double s = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        s += trapezoid_weight(grid, k) * std::norm(amplitude[k]);
    return s;
}

std::vector<double> uniform_grid(double halfspan, std::size_t points, double center) {
    if (points < 2) throw std::invalid_argument("uniform_grid: needs at least two points");
    std::vector<double> g(points);
    const double step = 2.0 * halfspan / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) g[k] = center - halfspan + step * k;
    return g;
}

WavePacket gaussian_packet(double delta_omega, const std::vector<double>& grid) {
    if (!(delta_omega > 0.0)) throw std::invalid_argument("gaussian_packet: delta_omega > 0");
    if (grid.size() < 2) throw std::invalid_argument("gaussian_packet: grid too small");
    if (grid.front() > -6.0 * delta_omega || grid.back() < 6.0 * delta_omega)
        throw Error("gaussian_packet: grid must span at least +-6 bandwidths");
    WavePacket p;
    p.grid = grid;
    p.delta_omega = delta_omega;
    p.amplitude.resize(grid.size());
    const double prefactor = 1.0 / std::sqrt(delta_omega * std::sqrt(2.0 * kPi));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = grid[k] / delta_omega;
        p.amplitude[k] = prefactor * std::exp(-0.25 * w * w);
    }
    // Grid renormalization removes the truncated tails (< 2e-9 at span 6).
    const double n = p.norm();
    const double scale = 1.0 / std::sqrt(n);
    for (auto& a : p.amplitude) a *= scale;
    return p;
}

cplx overlap(const WavePacket& a, const WavePacket& b) {
    if (a.grid.size() != b.grid.size()) throw Error("overlap: grid mismatch");
    for (std::size_t k = 0; k < a.grid.size(); ++k)
        if (a.grid[k] != b.grid[k]) throw Error("overlap: grid mismatch");
    cplx s = 0.0;
    for (std::size_t k = 0; k < a.grid.size(); ++k)
        s += trapezoid_weight(a.grid, k) * std::conj(a.amplitude[k]) * b.amplitude[k];
    return s;
}

WavePacket xi_shifted(const WavePacket& p, double xi) {
    WavePacket out = p;
    for (std::size_t k = 0; k < p.grid.size(); ++k)
        out.amplitude[k] *= std::exp(kI * p.grid[k] * xi);
    return out;
}

double TimeSeries::norm() const {
    double s = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
        s += trapezoid_weight(t, k) * std::norm(samples[k]);
    return s;
}

TimeSeries to_time_domain(const WavePacket& p, std::size_t oversample) {
    require_uniform(p.grid);
    if (oversample == 0) throw std::invalid_argument("to_time_domain: oversample >= 1");
    const std::size_t m = p.grid.size();
    std::size_t mf = 1;
    while (mf < m * oversample) mf <<= 1;

    const double dw = p.grid[1] - p.grid[0];
    const double span_t = 2.0 * kPi / dw;  // time window, independent of padding
    const double dt = span_t / static_cast<double>(mf);
    const double t0 = -0.5 * span_t;

    // Zero-pad the spectrum symmetrically; same dw, so the window is unchanged
    // and the time sampling refines.
    const std::size_t pad_left = (mf - m) / 2;
    const double w0 = p.grid[0] - static_cast<double>(pad_left) * dw;

    std::vector<cplx> work(mf, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t kk = k + pad_left;
        // twiddle e^{-i k dw t0} folds the grid origin into the DFT index
        work[kk] = p.amplitude[k] * std::exp(cplx(0.0, -static_cast<double>(kk) * dw * t0));
    }
    dft(work, false);

    TimeSeries s;
    s.t.resize(mf);
    s.samples.resize(mf);
    const double scale = dw / std::sqrt(2.0 * kPi);
    for (std::size_t nidx = 0; nidx < mf; ++nidx) {
        const double t = t0 + dt * static_cast<double>(nidx);
        s.t[nidx] = t;
        s.samples[nidx] = scale * std::exp(cplx(0.0, -w0 * t)) * work[nidx];
    }
    return s;
}

WavePacket from_time_domain(const TimeSeries& s, const std::vector<double>& grid) {
    require_uniform(grid);
    require_uniform(s.t);
    const std::size_t mt = s.t.size();
    const double dt = s.t[1] - s.t[0];
    const double t0 = s.t[0];
    const double dw_native = 2.0 * kPi / (dt * static_cast<double>(mt));

    // Phi(w_k) = dt/sqrt(2 pi) sum_n b_n e^{i w_k t_n}: fold the grid origin
    // into a twiddle and read the inverse DFT at stride k.
    const double w_base = grid[0];
    std::vector<cplx> work(mt);
    for (std::size_t n = 0; n < mt; ++n)
        work[n] = s.samples[n] * std::exp(cplx(0.0, w_base * (t0 + dt * static_cast<double>(n))));
    dft(work, true);

    const double dw = grid[1] - grid[0];
    const double ratio = dw / dw_native;
    const double ratio_rounded = std::round(ratio);
    if (std::abs(ratio - ratio_rounded) > 1e-6 || ratio_rounded < 1.0)
        throw Error("from_time_domain: grid incommensurate with the time window");
    const std::size_t stride = static_cast<std::size_t>(ratio_rounded);

    WavePacket p;
    p.grid = grid;
    p.amplitude.resize(grid.size());
    const double scale = dt / std::sqrt(2.0 * kPi);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const std::size_t idx = (k * stride) % mt;
        p.amplitude[k] = scale * std::exp(cplx(0.0, (grid[k] - w_base) * t0)) * work[idx];
    }
    return p;
}

}  // namespace qnet
