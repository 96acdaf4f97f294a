#ifndef QNET_OVERLAP_ENGINE_HPP
#define QNET_OVERLAP_ENGINE_HPP

#include <cmath>
#include <vector>

#include "qnet/golden.hpp"
#include "qnet/network.hpp"
#include "qnet/packet.hpp"

namespace qnet {

// Per-state amplitude columns of one photon pass through a network, folded
// against the packet weight |Phi(w)|^2; the machinery behind every
// reference-delay optimization.
class OverlapEngine {
public:
    OverlapEngine(const NetworkSpec& spec, const WavePacket& packet, ElementModel model)
        : n_(spec.n()) {
        spec.validate();
        grid_ = packet.grid;
        wphi_.resize(grid_.size());
        for (std::size_t k = 0; k < grid_.size(); ++k)
            wphi_[k] = weight(grid_, k) * std::norm(packet.amplitude[k]);
        const BasisState count = BasisState{1} << n_;
        columns_.resize(count);
        for (BasisState s = 0; s < count; ++s) {
            columns_[s].resize(grid_.size());
            for (std::size_t k = 0; k < grid_.size(); ++k)
                columns_[s][k] = basis_amplitude(grid_[k], spec, s, model);
        }
    }

    int n() const { return n_; }
    std::size_t states() const { return columns_.size(); }

    // Weighted combination sum_s c_s T_s(w) |Phi(w)|^2 w_k, ready for xi scans.
    std::vector<cplx> combine(const std::vector<cplx>& c) const {
        std::vector<cplx> d(grid_.size(), 0.0);
        for (std::size_t s = 0; s < columns_.size(); ++s)
            for (std::size_t k = 0; k < grid_.size(); ++k) d[k] += c[s] * columns_[s][k];
        for (std::size_t k = 0; k < grid_.size(); ++k) d[k] *= wphi_[k];
        return d;
    }

    double objective(const std::vector<cplx>& d, double xi) const {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < grid_.size(); ++k)
            acc += d[k] * std::exp(cplx(0.0, grid_[k] * xi));
        return std::norm(acc);
    }

    cplx state_overlap(BasisState s, double xi) const {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < grid_.size(); ++k)
            acc += wphi_[k] * std::exp(cplx(0.0, grid_[k] * xi)) * columns_[s][k];
        return acc;
    }

    double success_probability() const {
        double p = 0.0;
        for (const auto& col : columns_)
            for (std::size_t k = 0; k < grid_.size(); ++k) p += wphi_[k] * std::norm(col[k]);
        return p / static_cast<double>(columns_.size());
    }

    // Maximize |combination(xi)|^2 over [lo, hi].
    std::pair<double, double> maximize_xi(const std::vector<cplx>& c, double lo, double hi,
                                          double xtol, int scan_points = 160) const {
        const auto d = combine(c);
        auto f = [&](double xi) { return objective(d, xi); };
        return golden_section_max(f, lo, hi, xtol, scan_points);
    }

private:
    static double weight(const std::vector<double>& grid, std::size_t k) {
        if (k == 0) return 0.5 * (grid[1] - grid[0]);
        if (k == grid.size() - 1) return 0.5 * (grid[k] - grid[k - 1]);
        return 0.5 * (grid[k + 1] - grid[k - 1]);
    }

    int n_;
    std::vector<double> grid_;
    std::vector<double> wphi_;
    std::vector<std::vector<cplx>> columns_;
};

inline double xi_window_low(const NetworkSpec& spec, double window_scale) {
    double kappa = spec.cavities.front().kappa;
    for (const auto& c : spec.cavities) kappa = std::min(kappa, c.kappa);
    double tau = 0.0;
    for (const auto& s : spec.forward_segments) tau += s.tau;
    for (const auto& s : spec.return_segments) tau += s.tau;
    return -window_scale / kappa - 5.0 * tau;
}

inline double xi_window_high(const NetworkSpec& spec, double window_scale) {
    double kappa = spec.cavities.front().kappa;
    for (const auto& c : spec.cavities) kappa = std::min(kappa, c.kappa);
    return window_scale / kappa;
}

inline double xi_tolerance(const NetworkSpec& spec, double tol_scale) {
    double kappa = spec.cavities.front().kappa;
    for (const auto& c : spec.cavities) kappa = std::min(kappa, c.kappa);
    return tol_scale / kappa;
}

}  // namespace qnet

#endif
