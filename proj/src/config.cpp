#include "qnet/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qnet/packet.hpp"

namespace qnet {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "n",
        "g_mhz_2pi",
        "gamma_mhz_2pi",
        "kappa_mhz_2pi",
        "kappa_prime_mhz_2pi",
        "tau_ns",
        "eta",
        "phi_rad",
        "packet.delta_t_us",
        "packet.delta_omega_mhz_2pi",
        "packet.grid_points",
        "packet.grid_halfspan_bandwidths",
        "mc.delta",
        "mc.samples",
        "mc.seed",
        "mc.block_detuning_kappas",
        "sweep.param",
        "sweep.from",
        "sweep.to",
        "sweep.points",
        "sweep.log",
        "output.path",
        "output.format",
    };
    return keys;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ValidationError("config: key '" + key + "': expected a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ValidationError("config: key '" + key + "': expected an integer, got '" + value +
                              "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ValidationError("config: key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) out.push_back(parse_double(key, tok));
    return out;
}

}  // namespace

CavitySpec RunConfig::uniform_cavity(Sidedness s) const {
    CavitySpec c;
    c.g = g;
    c.gamma = gamma;
    c.kappa = kappa;
    c.kappa_prime = kappa_prime;
    c.sidedness = s;
    return c;
}

NetworkSpec RunConfig::network() const {
    NetworkSpec spec =
        make_uniform_network(n, uniform_cavity(Sidedness::two_sided), tau, eta, eta);
    if (!phi.empty()) {
        if (phi.size() != spec.num_phis())
            throw ValidationError("config: key 'phi_rad': expected " +
                                  std::to_string(spec.num_phis()) + " values");
        spec.set_phi_values(phi);
    }
    spec.validate();
    return spec;
}

WavePacket RunConfig::packet() const {
    const auto grid = uniform_grid(grid_halfspan_bandwidths * delta_omega, grid_points);
    return gaussian_packet(delta_omega, grid);
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, std::string> raw;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) throw ValidationError("config: unknown key '" + key + "'");
        if (raw.count(key)) throw ValidationError("config: duplicate key '" + key + "'");
        raw[key] = value;
        cfg.echo.emplace_back(key, value);
    }

    auto take = [&raw](const char* key) -> std::optional<std::string> {
        auto it = raw.find(key);
        if (it == raw.end()) return std::nullopt;
        return it->second;
    };
    auto required = [&take](const char* key) {
        auto v = take(key);
        if (!v) throw ValidationError(std::string("config: missing required key '") + key + "'");
        return *v;
    };

    if (auto v = take("n")) cfg.n = static_cast<int>(parse_int("n", *v));
    if (cfg.n < 1 || cfg.n > 20) throw ValidationError("config: key 'n': need 1 <= n <= 20");

    cfg.g = parse_double("g_mhz_2pi", required("g_mhz_2pi")) * kTwoPi * 1e6;
    cfg.gamma = parse_double("gamma_mhz_2pi", required("gamma_mhz_2pi")) * kTwoPi * 1e6;
    cfg.kappa = parse_double("kappa_mhz_2pi", required("kappa_mhz_2pi")) * kTwoPi * 1e6;
    if (auto v = take("kappa_prime_mhz_2pi"))
        cfg.kappa_prime = parse_double("kappa_prime_mhz_2pi", *v) * kTwoPi * 1e6;
    if (!(cfg.kappa > 0.0)) throw ValidationError("config: key 'kappa_mhz_2pi': must be > 0");
    if (cfg.g < 0.0 || cfg.gamma < 0.0 || cfg.kappa_prime < 0.0)
        throw ValidationError("config: rates must be >= 0");

    if (auto v = take("tau_ns")) cfg.tau = parse_double("tau_ns", *v) * 1e-9;
    if (cfg.tau < 0.0) throw ValidationError("config: key 'tau_ns': must be >= 0");
    if (auto v = take("eta")) cfg.eta = parse_double("eta", *v);
    if (cfg.eta < 0.0) throw ValidationError("config: key 'eta': must be >= 0");
    if (auto v = take("phi_rad")) cfg.phi = parse_list("phi_rad", *v);

    const auto dt_us = take("packet.delta_t_us");
    const auto dw_mhz = take("packet.delta_omega_mhz_2pi");
    if (dt_us && dw_mhz)
        throw ValidationError(
            "config: give exactly one of packet.delta_t_us / packet.delta_omega_mhz_2pi");
    if (dt_us) {
        const double dt = parse_double("packet.delta_t_us", *dt_us) * 1e-6;
        if (!(dt > 0.0)) throw ValidationError("config: key 'packet.delta_t_us': must be > 0");
        cfg.delta_omega = kTwoPi / dt;
    } else if (dw_mhz) {
        cfg.delta_omega = parse_double("packet.delta_omega_mhz_2pi", *dw_mhz) * kTwoPi * 1e6;
        if (!(cfg.delta_omega > 0.0))
            throw ValidationError("config: key 'packet.delta_omega_mhz_2pi': must be > 0");
    } else {
        throw ValidationError(
            "config: missing packet.delta_t_us or packet.delta_omega_mhz_2pi");
    }

    if (auto v = take("packet.grid_points")) {
        const long long p = parse_int("packet.grid_points", *v);
        if (p < 16 || p > (1 << 22))
            throw ValidationError("config: key 'packet.grid_points': out of range");
        cfg.grid_points = static_cast<std::size_t>(p);
    }
    if (auto v = take("packet.grid_halfspan_bandwidths")) {
        cfg.grid_halfspan_bandwidths = parse_double("packet.grid_halfspan_bandwidths", *v);
        if (cfg.grid_halfspan_bandwidths < 6.0)
            throw ValidationError("config: key 'packet.grid_halfspan_bandwidths': must be >= 6");
    }

    if (auto v = take("mc.delta")) cfg.mc_delta = parse_double("mc.delta", *v);
    if (cfg.mc_delta < 0.0) throw ValidationError("config: key 'mc.delta': must be >= 0");
    if (auto v = take("mc.samples")) {
        cfg.mc_samples = static_cast<int>(parse_int("mc.samples", *v));
        if (cfg.mc_samples < 1) throw ValidationError("config: key 'mc.samples': must be >= 1");
    }
    if (auto v = take("mc.seed"))
        cfg.mc_seed = static_cast<std::uint64_t>(parse_int("mc.seed", *v));
    if (auto v = take("mc.block_detuning_kappas")) {
        cfg.mc_block_detuning_kappas = parse_double("mc.block_detuning_kappas", *v);
        if (!(cfg.mc_block_detuning_kappas > 0.0))
            throw ValidationError("config: key 'mc.block_detuning_kappas': must be > 0");
    }

    if (auto v = take("sweep.param")) {
        cfg.sweep_param = *v;
        if (!is_sweep_param(cfg.sweep_param))
            throw ValidationError("config: key 'sweep.param': unknown parameter '" +
                                  cfg.sweep_param + "'");
    }
    if (auto v = take("sweep.from")) cfg.sweep_from = parse_double("sweep.from", *v);
    if (auto v = take("sweep.to")) cfg.sweep_to = parse_double("sweep.to", *v);
    if (auto v = take("sweep.points")) {
        cfg.sweep_points = static_cast<int>(parse_int("sweep.points", *v));
        if (cfg.sweep_points < 1) throw ValidationError("config: key 'sweep.points': must be >= 1");
    }
    if (auto v = take("sweep.log")) cfg.sweep_log = parse_bool("sweep.log", *v);

    if (auto v = take("output.path")) cfg.output_path = *v;
    if (auto v = take("output.format")) {
        cfg.output_format = *v;
        if (cfg.output_format != "csv" && cfg.output_format != "json")
            throw ValidationError("config: key 'output.format': expected csv or json");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

bool is_sweep_param(const std::string& name) {
    return name == "inv_C" || name == "bandwidth2" || name == "tau_ns" || name == "delta" ||
           name == "kappa_prime_ratio" || name == "eta";
}

RunConfig apply_sweep_value(const RunConfig& base, const std::string& param, double value) {
    RunConfig cfg = base;
    if (param == "inv_C") {
        const double inv_c = std::max(value, 1e-12);
        cfg.g = std::sqrt(cfg.kappa * cfg.gamma / inv_c);
    } else if (param == "bandwidth2") {
        const double b2 = std::max(value, 1e-8);
        cfg.delta_omega = cfg.kappa * std::sqrt(b2);
    } else if (param == "tau_ns") {
        if (value < 0.0) throw ValidationError("sweep: tau_ns must be >= 0");
        cfg.tau = value * 1e-9;
    } else if (param == "delta") {
        if (value < 0.0) throw ValidationError("sweep: delta must be >= 0");
        cfg.mc_delta = value;
    } else if (param == "kappa_prime_ratio") {
        if (value < 0.0) throw ValidationError("sweep: kappa_prime_ratio must be >= 0");
        cfg.kappa_prime = value * cfg.kappa;
    } else if (param == "eta") {
        if (value < 0.0) throw ValidationError("sweep: eta must be >= 0");
        cfg.eta = value;
    } else {
        throw ValidationError("sweep: unknown parameter '" + param + "'");
    }
    return cfg;
}

}  // namespace qnet
