#ifndef QNET_CONFIG_HPP
#define QNET_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnet/network.hpp"
#include "qnet/packet.hpp"

namespace qnet {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run configuration parsed from a key = value file with dotted keys and #
// comments. Every physical quantity carries an explicit unit suffix in its
// key (rates *_mhz_2pi in 2 pi MHz, times *_ns / *_us); values are converted
// to rad/s and seconds internally. The raw text of every key is kept for the
// full-precision metadata echo.
struct RunConfig {
    int n = 2;

    // uniform cavity chain, angular rates in rad/s
    double g = 0.0;
    double gamma = 0.0;
    double kappa = 0.0;
    double kappa_prime = 0.0;

    double tau = 0.0;  // seconds, per segment
    double eta = 0.0;  // amplitude loss exponent per channel (segments and I/O)
    std::vector<double> phi;  // static segment phases, radians (2(N-1) or empty)

    double delta_omega = 0.0;  // rad/s
    std::size_t grid_points = 4096;
    double grid_halfspan_bandwidths = 8.0;

    // Monte Carlo block
    double mc_delta = 0.0;
    int mc_samples = 200;
    std::uint64_t mc_seed = 1;
    double mc_block_detuning_kappas = 1e3;

    // sweep block (optional; CLI flags override)
    std::string sweep_param;
    double sweep_from = 0.0;
    double sweep_to = 0.0;
    int sweep_points = 0;
    bool sweep_log = false;

    std::string output_path;
    std::string output_format = "csv";

    std::vector<std::pair<std::string, std::string>> echo;  // raw key/value text, file order

    CavitySpec uniform_cavity(Sidedness s) const;
    NetworkSpec network() const;
    WavePacket packet() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Known sweep parameter names: inv_C, bandwidth2, tau_ns, delta,
// kappa_prime_ratio, eta.
bool is_sweep_param(const std::string& name);

// The configuration with one swept parameter substituted.
RunConfig apply_sweep_value(const RunConfig& base, const std::string& param, double value);

}  // namespace qnet

#endif
