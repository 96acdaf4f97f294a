#include "doctest.h"

#include <cmath>
#include <sstream>

#include "qnet/config.hpp"

using namespace qnet;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

const char* kBenchmarkText = R"(# two-node working point
n = 2
g_mhz_2pi = 7.9
gamma_mhz_2pi = 3.0
kappa_mhz_2pi = 2.3
kappa_prime_mhz_2pi = 0.2
tau_ns = 10.0
eta = 0.0
packet.delta_t_us = 5.0
packet.grid_points = 1024
mc.delta = 0.1
mc.samples = 32
mc.seed = 9
)";

}  // namespace

TEST_CASE("configuration parses with explicit units") {
    const auto cfg = parse_config_text(kBenchmarkText);
    CHECK(cfg.n == 2);
    CHECK(cfg.g == doctest::Approx(7.9 * kTwoPi * 1e6).epsilon(1e-15));
    CHECK(cfg.kappa == doctest::Approx(2.3 * kTwoPi * 1e6).epsilon(1e-15));
    CHECK(cfg.kappa_prime == doctest::Approx(0.2 * kTwoPi * 1e6).epsilon(1e-15));
    CHECK(cfg.gamma == doctest::Approx(3.0 * kTwoPi * 1e6).epsilon(1e-15));
    CHECK(cfg.tau == doctest::Approx(10.0e-9).epsilon(1e-15));
    CHECK(cfg.delta_omega == doctest::Approx(kTwoPi / 5.0e-6).epsilon(1e-15));
    CHECK(cfg.grid_points == 1024);
    CHECK(cfg.mc_delta == 0.1);
    CHECK(cfg.mc_samples == 32);
    CHECK(cfg.mc_seed == 9);

    const auto net = cfg.network();
    CHECK(net.n() == 2);
    CHECK(net.cavities.back().sidedness == Sidedness::one_sided);
    CHECK(net.forward_segments[0].tau == doctest::Approx(1e-8));
    CHECK(net.io_eta == 0.0);

    const auto p = cfg.packet();
    CHECK(std::abs(p.norm() - 1.0) < 1e-9);
}

TEST_CASE("configuration echo reproduces the input text exactly") {
    const auto cfg = parse_config_text(kBenchmarkText);
    // the echo holds the raw strings; re-serializing and re-parsing is lossless
    std::ostringstream round;
    for (const auto& [k, v] : cfg.echo) round << k << " = " << v << "\n";
    const auto again = parse_config_text(round.str());
    CHECK(again.echo == cfg.echo);
    CHECK(again.g == cfg.g);
    CHECK(again.delta_omega == cfg.delta_omega);
    CHECK(again.tau == cfg.tau);
}

TEST_CASE("field-level validation messages") {
    auto expect_message = [](const char* text, const char* needle) {
        try {
            parse_config_text(text);
            FAIL_CHECK("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_message("bogus_key = 1\n", "bogus_key");
    expect_message("n = 2\nn = 3\n", "duplicate");
    expect_message("n = 2\ng_mhz_2pi = oops\n", "g_mhz_2pi");
    expect_message("n = 2\n", "g_mhz_2pi");  // missing required
    const char* both = "g_mhz_2pi = 1\ngamma_mhz_2pi = 1\nkappa_mhz_2pi = 1\n"
                       "packet.delta_t_us = 1\npacket.delta_omega_mhz_2pi = 1\n";
    expect_message(both, "exactly one");
    const char* neither = "g_mhz_2pi = 1\ngamma_mhz_2pi = 1\nkappa_mhz_2pi = 1\n";
    expect_message(neither, "packet.delta_t_us");
    expect_message("kappa_mhz_2pi = 0\ng_mhz_2pi = 1\ngamma_mhz_2pi = 1\n"
                   "packet.delta_t_us = 1\n",
                   "kappa");
}

TEST_CASE("sweep substitution") {
    auto cfg = parse_config_text(kBenchmarkText);

    const auto inv_c = apply_sweep_value(cfg, "inv_C", 0.02);
    CHECK(inv_c.g * inv_c.g / (inv_c.kappa * inv_c.gamma) == doctest::Approx(50.0));

    const auto bw = apply_sweep_value(cfg, "bandwidth2", 0.04);
    CHECK(bw.delta_omega == doctest::Approx(0.2 * cfg.kappa));

    const auto tau = apply_sweep_value(cfg, "tau_ns", 25.0);
    CHECK(tau.tau == doctest::Approx(25e-9));

    const auto kp = apply_sweep_value(cfg, "kappa_prime_ratio", 0.3);
    CHECK(kp.kappa_prime == doctest::Approx(0.3 * cfg.kappa));

    const auto eta = apply_sweep_value(cfg, "eta", 0.07);
    CHECK(eta.eta == 0.07);
    CHECK(eta.network().io_eta == 0.07);
    CHECK(eta.network().forward_segments[0].eta == 0.07);

    const auto dd = apply_sweep_value(cfg, "delta", 0.2);
    CHECK(dd.mc_delta == 0.2);

    CHECK_THROWS_AS(apply_sweep_value(cfg, "nonsense", 1.0), ValidationError);
    CHECK(is_sweep_param("inv_C"));
    CHECK(!is_sweep_param("nonsense"));
}

TEST_CASE("phi list wiring") {
    std::string text(kBenchmarkText);
    text += "phi_rad = 0.25 -0.5\n";
    const auto cfg = parse_config_text(text);
    const auto net = cfg.network();
    CHECK(net.forward_segments[0].phi == 0.25);
    CHECK(net.return_segments[0].phi == -0.5);

    std::string bad(kBenchmarkText);
    bad += "phi_rad = 0.25\n";  // needs 2(N-1) entries
    CHECK_THROWS_AS(parse_config_text(bad).network(), ValidationError);
}
