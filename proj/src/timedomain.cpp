#include "qnet/timedomain.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qnet {

namespace {

// Catmull-Rom interpolation of a uniformly sampled complex signal. Outside
// the window the signal is treated as zero (packets decay well inside it).
struct SampledSignal {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<cplx> samples;

    cplx operator()(double t) const {
        const double x = (t - t0) / dt;
        const double fl = std::floor(x);
        const long i = static_cast<long>(fl);
        const long n = static_cast<long>(samples.size());
        if (i < 1 || i + 2 >= n) {
            if (i < -1 || i > n) return 0.0;
            // clamped linear fallback at the very edges
            const long a = std::clamp(i, 0L, n - 1);
            const long b = std::clamp(i + 1, 0L, n - 1);
            const double u = x - fl;
            return samples[a] * (1.0 - u) + samples[b] * u;
        }
        const double u = x - fl;
        const cplx pm1 = samples[i - 1], p0 = samples[i], p1 = samples[i + 1], p2 = samples[i + 2];
        const cplx a = 2.0 * p0;
        const cplx b = p1 - pm1;
        const cplx c = 2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2;
        const cplx d = -pm1 + 3.0 * p0 - 3.0 * p1 + p2;
        return 0.5 * (a + b * u + c * u * u + d * u * u * u);
    }
};

struct State {
    cplx cb;
    cplx ce;
};

// Dormand-Prince 5(4) pair on the two-amplitude system.
template <typename Rhs>
State dp45_step(const Rhs& rhs, double t, double h, const State& y, double& err_est,
                std::array<State, 7>& k) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto lin = [](const State& s, double c) { return State{s.cb * c, s.ce * c}; };
    auto add = [](State a, const State& b) {
        a.cb += b.cb;
        a.ce += b.ce;
        return a;
    };

    k[0] = rhs(t, y);
    k[1] = rhs(t + h * a21, add(y, lin(k[0], h * a21)));
    k[2] = rhs(t + h * 0.3, add(y, add(lin(k[0], h * a31), lin(k[1], h * a32))));
    k[3] = rhs(t + h * 0.8,
               add(y, add(add(lin(k[0], h * a41), lin(k[1], h * a42)), lin(k[2], h * a43))));
    k[4] = rhs(t + h * (8.0 / 9),
               add(y, add(add(lin(k[0], h * a51), lin(k[1], h * a52)),
                          add(lin(k[2], h * a53), lin(k[3], h * a54)))));
    k[5] = rhs(t + h, add(y, add(add(lin(k[0], h * a61), lin(k[1], h * a62)),
                                 add(add(lin(k[2], h * a63), lin(k[3], h * a64)),
                                     lin(k[4], h * a65)))));
    State y5 = add(y, add(add(lin(k[0], h * b1), lin(k[2], h * b3)),
                          add(add(lin(k[3], h * b4), lin(k[4], h * b5)), lin(k[5], h * b6))));
    k[6] = rhs(t + h, y5);

    const cplx err_cb = h * (e1 * k[0].cb + e3 * k[2].cb + e4 * k[3].cb + e5 * k[4].cb +
                             e6 * k[5].cb + e7 * k[6].cb);
    const cplx err_ce = h * (e1 * k[0].ce + e3 * k[2].ce + e4 * k[3].ce + e5 * k[4].ce +
                             e6 * k[5].ce + e7 * k[6].ce);
    err_est = std::sqrt(std::norm(err_cb) + std::norm(err_ce));
    return y5;
}

}  // namespace

double TimeDomainState::input_norm() const {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k)
        s += 0.5 * (t[k + 1] - t[k]) * (std::norm(b_in[k]) + std::norm(b_in[k + 1]));
    return s;
}

double TimeDomainState::output_norm() const {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k)
        s += 0.5 * (t[k + 1] - t[k]) * (std::norm(b_out[k]) + std::norm(b_out[k + 1]));
    return s;
}

TimeDomainState scatter_time_domain(const WavePacket& packet, const CavitySpec& cavity, Qubit q,
                                    const ScatterOptions& opts) {
    cavity.validate();
    if (cavity.sidedness != Sidedness::one_sided)
        throw Error("scatter_time_domain: one-sided cavity required");

    // Coarse grid for the reported samples, fine grid for the drive.
    const TimeSeries coarse = to_time_domain(packet, 1);
    const TimeSeries fine = to_time_domain(packet, opts.oversample);
    SampledSignal drive{fine.t[0], fine.t[1] - fine.t[0], fine.samples};

    const double quiescence = -coarse.t.front();  // pulse peak sits at t = 0
    if (quiescence < 5.0 / cavity.kappa)
        throw Error("scatter_time_domain: window too short for 5/kappa of quiescence");

    const double gq = cavity.coupling(q);
    const double sqk = std::sqrt(cavity.kappa);
    const double half_decay = 0.5 * (cavity.kappa + cavity.kappa_prime);
    const double gamma = cavity.gamma;

    auto rhs = [&](double t, const State& y) {
        const cplx bin = drive(t);
        return State{gq * y.ce - sqk * bin - half_decay * y.cb, -gamma * y.ce - gq * y.cb};
    };

    double bmax = 0.0;
    for (const auto& b : coarse.samples) bmax = std::max(bmax, std::abs(b));
    const double atol = opts.rtol * bmax / std::max(sqk, 1e-300);

    TimeDomainState out;
    out.t = coarse.t;
    out.b_in = coarse.samples;
    out.b_out.resize(coarse.t.size());
    out.c_b.resize(coarse.t.size());
    out.c_e.resize(coarse.t.size());

    State y{0.0, 0.0};
    out.b_out[0] = out.b_in[0];
    double h = 0.1 / cavity.kappa;
    std::array<State, 7> k;
    for (std::size_t idx = 1; idx < coarse.t.size(); ++idx) {
        double t = coarse.t[idx - 1];
        const double t_end = coarse.t[idx];
        while (t < t_end) {
            h = std::min(h, t_end - t);
            double err;
            const State trial = dp45_step(rhs, t, h, y, err, k);
            const double scale =
                atol + opts.rtol * std::sqrt(std::norm(y.cb) + std::norm(y.ce));
            const double ratio = err / std::max(scale, 1e-300);
            if (ratio <= 1.0) {
                t += h;
                y = trial;
                h *= std::clamp(0.9 * std::pow(std::max(ratio, 1e-16), -0.2), 1.0, 5.0);
            } else {
                h *= std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 0.9);
                if (h < 1e-14 * (coarse.t.back() - coarse.t.front()))
                    throw Error("scatter_time_domain: step size underflow");
            }
        }
        out.c_b[idx] = y.cb;
        out.c_e[idx] = y.ce;
        out.b_out[idx] = out.b_in[idx] + sqk * y.cb;
    }
    return out;
}

WavePacket output_packet(const TimeDomainState& state, const WavePacket& packet) {
    TimeSeries s;
    s.t = state.t;
    s.samples = state.b_out;
    WavePacket p = from_time_domain(s, packet.grid);
    p.delta_omega = packet.delta_omega;
    return p;
}

double peak_time(const std::vector<double>& t, const std::vector<cplx>& samples) {
    std::size_t imax = 0;
    double vmax = -1.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double v = std::abs(samples[i]);
        if (v > vmax) {
            vmax = v;
            imax = i;
        }
    }
    if (imax == 0 || imax + 1 >= samples.size()) return t[imax];
    const double ym = std::abs(samples[imax - 1]);
    const double y0 = std::abs(samples[imax]);
    const double yp = std::abs(samples[imax + 1]);
    const double denom = ym - 2.0 * y0 + yp;
    if (denom == 0.0) return t[imax];
    const double shift = 0.5 * (ym - yp) / denom;
    return t[imax] + shift * (t[1] - t[0]);
}

}  // namespace qnet
