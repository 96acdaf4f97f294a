#include "doctest.h"

#include <cmath>

#include "qnet/cavity.hpp"
#include "qnet/timedomain.hpp"

using namespace qnet;

namespace {

CavitySpec one_sided(double g, double kappa, double kappa_prime, double gamma) {
    return {g, kappa, kappa_prime, gamma, Sidedness::one_sided, std::nullopt};
}

// relative L2 distance between the scattered spectrum and R(w) Phi(w)
double spectral_mismatch(const CavitySpec& cavity, Qubit q, double delta_omega,
                         std::size_t points = 1024) {
    const auto grid = uniform_grid(10.0 * delta_omega, points);
    const auto packet = gaussian_packet(delta_omega, grid);
    const auto state = scatter_time_domain(packet, cavity, q);
    const auto out = output_packet(state, packet);

    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const cplx expect = one_sided_reflection(grid[k], cavity, q) * packet.amplitude[k];
        num += std::norm(out.amplitude[k] - expect);
        den += std::norm(expect);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("time-domain integration matches the frequency-domain coefficient") {
    const double kappa = 1.0, gamma = 0.2;
    for (double coop : {1.0, 10.0, 100.0}) {
        const double g = std::sqrt(coop * kappa * gamma);
        for (Qubit q : {Qubit::zero, Qubit::one}) {
            const double err = spectral_mismatch(one_sided(g, kappa, 0.0, gamma), q, kappa / 20.0);
            CHECK(err < 1e-6);
        }
    }
    // lossy mirror
    CHECK(spectral_mismatch(one_sided(1.0, 1.0, 0.15, 0.2), Qubit::one, 0.05) < 1e-6);
}

TEST_CASE("empty cavity delays the pulse by the group delay") {
    const auto cavity = one_sided(0.0, 1.0, 0.0, 0.3);
    const double delta_omega = cavity.kappa / 50.0;
    const auto grid = uniform_grid(8.0 * delta_omega, 1024);
    const auto packet = gaussian_packet(delta_omega, grid);
    const auto state = scatter_time_domain(packet, cavity, Qubit::zero);

    auto fn = [&](double w) { return one_sided_reflection(w, cavity, Qubit::zero); };
    const double expected = group_delay(fn, 0.0, cavity.kappa);

    // oversample both envelopes for sub-sample peak localization
    const auto out = output_packet(state, packet);
    const auto fine_out = to_time_domain(out, 32);
    const auto fine_in = to_time_domain(packet, 32);
    const double delay =
        peak_time(fine_out.t, fine_out.samples) - peak_time(fine_in.t, fine_in.samples);
    CHECK(std::abs(delay - expected) < 0.05 * expected);
}

TEST_CASE("absorption loses norm, elastic scattering keeps it") {
    const auto grid_factory = [](double dw) { return uniform_grid(8.0 * dw, 512); };
    const double dw = 0.05;
    const auto packet = gaussian_packet(dw, grid_factory(dw));

    const auto lossy = scatter_time_domain(packet, one_sided(0.8, 1.0, 0.3, 0.2), Qubit::zero);
    CHECK(lossy.output_norm() < 1.0);
    CHECK(lossy.output_norm() <= lossy.input_norm() + 1e-9);

    const auto elastic = scatter_time_domain(packet, one_sided(0.8, 1.0, 0.0, 0.0), Qubit::one);
    CHECK(std::abs(elastic.output_norm() - elastic.input_norm()) < 1e-6);
    CHECK(elastic.output_norm() <= elastic.input_norm() + 1e-9);
}

TEST_CASE("scattering is linear in the input packet") {
    const auto cavity = one_sided(1.2, 1.0, 0.05, 0.25);
    const auto grid = uniform_grid(1.2, 512);
    const auto a = gaussian_packet(0.15, grid);
    auto b = gaussian_packet(0.1, grid);
    for (std::size_t k = 0; k < b.grid.size(); ++k)
        b.amplitude[k] *= std::exp(cplx(0.0, 0.8 * b.grid[k]));

    WavePacket sum = a;
    for (std::size_t k = 0; k < sum.grid.size(); ++k) sum.amplitude[k] += b.amplitude[k];

    ScatterOptions tight;
    tight.rtol = 1e-12;
    const auto sa = scatter_time_domain(a, cavity, Qubit::one, tight);
    const auto sb = scatter_time_domain(b, cavity, Qubit::one, tight);
    const auto ssum = scatter_time_domain(sum, cavity, Qubit::one, tight);

    double worst = 0.0;
    for (std::size_t k = 0; k < ssum.t.size(); ++k)
        worst = std::max(worst,
                         std::abs(ssum.b_out[k] - sa.b_out[k] - sb.b_out[k]));
    CHECK(worst < 1e-10);
}

TEST_CASE("window too short for quiescence is rejected") {
    const auto cavity = one_sided(0.0, 1.0, 0.0, 0.2);
    // very broadband pulse: the conjugate window shrinks below 5/kappa
    const double dw = 100.0;
    const auto packet = gaussian_packet(dw, uniform_grid(8.0 * dw, 256));
    CHECK_THROWS_AS(scatter_time_domain(packet, cavity, Qubit::zero), Error);
    // two-sided cavities have no time-domain route here
    CavitySpec two = cavity;
    two.sidedness = Sidedness::two_sided;
    const auto ok = gaussian_packet(0.05, uniform_grid(0.4, 256));
    CHECK_THROWS_AS(scatter_time_domain(ok, two, Qubit::zero), Error);
}
