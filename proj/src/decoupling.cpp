#include "qnet/decoupling.hpp"

#include <cmath>

#include "qnet/overlap_engine.hpp"
#include "qnet/rng.hpp"

namespace qnet {

namespace {

void require_n(int n) {
    if (n < 2 || n > 20) throw std::invalid_argument("decoupling: need 2 <= N <= 20");
}

}  // namespace

bool DiagonalGate::same_action(const DiagonalGate& o) const {
    if (n != o.n || phases.size() != o.phases.size()) return false;
    // A common state-independent offset keeps the action equal; compare the
    // relative phases plus the combined global.
    const PhaseExpression mine = phases[0] + global;
    const PhaseExpression theirs = o.phases[0] + o.global;
    for (std::size_t s = 0; s < phases.size(); ++s) {
        const PhaseExpression a = phases[s] + global - mine;
        const PhaseExpression b = o.phases[s] + o.global - theirs;
        if (!a.same_action(b)) return false;
    }
    return mine.same_action(theirs);
}

DiagonalGate build_u_cp(int n) {
    require_n(n);
    const std::size_t num_phis = 2 * (n - 1);
    DiagonalGate gate;
    gate.n = n;
    gate.global = PhaseExpression(num_phis);
    const BasisState count = BasisState{1} << n;
    gate.phases.reserve(count);
    for (BasisState s = 0; s < count; ++s) {
        PhaseExpression p(num_phis);
        if (s == all_ones_state(n)) p.pi_coeff = 1;
        const int m = std::min(leading_ones_run(s, n), n - 1);
        for (int j = 1; j <= m; ++j) {
            p.phi_coeffs[2 * j - 2] += 1;
            p.phi_coeffs[2 * j - 1] += 1;
        }
        gate.phases.push_back(std::move(p));
    }
    return gate;
}

DiagonalGate build_u_block(int n, const std::set<int>& blocked) {
    require_n(n);
    if (!blocked.count(n))
        throw Error("build_u_block: the end cavity must be in the blocked set");
    // remaining blocks must form a prefix 1..i with i <= n-2
    int prefix = 0;
    for (int k = 1; k <= n - 1; ++k) {
        if (blocked.count(k))
            prefix = k;
        else
            break;
    }
    if (blocked.size() != static_cast<std::size_t>(prefix) + 1 || prefix > n - 2)
        throw Error("build_u_block: unsupported blocked set (expected {N} plus a prefix {1..i})");

    const std::size_t num_phis = 2 * (n - 1);
    DiagonalGate gate;
    gate.n = n;
    gate.global = PhaseExpression(num_phis);
    const BasisState count = BasisState{1} << n;
    gate.phases.reserve(count);
    for (BasisState s = 0; s < count; ++s) {
        PhaseExpression p(num_phis);
        // run of |1> qubits starting just past the blocked prefix
        int run = 0;
        while (prefix + 1 + run <= n && qubit_bit(s, prefix + 1 + run)) ++run;
        const int last = std::min(prefix + run, n - 1);
        for (int m = prefix + 1; m <= last; ++m) {
            p.phi_coeffs[2 * m - 2] += 1;
            p.phi_coeffs[2 * m - 1] += 1;
        }
        if (last == n - 1 && run >= n - 1 - prefix) p.pi_coeff = 1;
        gate.phases.push_back(std::move(p));
    }
    return gate;
}

DiagonalGate conjugate_by_pulse(const DiagonalGate& gate, const PulseOp& p) {
    if (p.qubit < 1 || p.qubit > gate.n) throw std::invalid_argument("conjugate_by_pulse: bad qubit");
    DiagonalGate out;
    out.n = gate.n;
    out.global = gate.global;
    out.global.pi_coeff += 1;  // Pi_i^2 = e^{i pi}
    out.phases.resize(gate.phases.size());
    for (BasisState s = 0; s < gate.phases.size(); ++s)
        out.phases[s] = gate.phases[flip_qubit(s, p.qubit)];
    return out;
}

std::vector<SequenceOp> dd_sequence(int n) {
    require_n(n);
    std::vector<SequenceOp> seq;
    seq.reserve(3 * n);
    seq.emplace_back(PulseOp{n});
    seq.emplace_back(build_u_cp(n));
    seq.emplace_back(PulseOp{n});
    for (int i = 0; i <= n - 2; ++i) {
        std::set<int> blocked{n};
        for (int k = 1; k <= i; ++k) blocked.insert(k);
        seq.emplace_back(PulseOp{i + 1});
        seq.emplace_back(build_u_block(n, blocked));
        seq.emplace_back(PulseOp{i + 1});
    }
    return seq;
}

RefocusResult verify_refocus(const std::vector<SequenceOp>& seq) {
    int n = 0;
    for (const auto& op : seq)
        if (const auto* g = std::get_if<DiagonalGate>(&op)) {
            n = g->n;
            break;
        }
    if (n == 0) throw Error("verify_refocus: sequence has no diagonal gates");
    const std::size_t num_phis = 2 * (n - 1);
    const BasisState count = BasisState{1} << n;

    std::vector<PhaseExpression> diag(count, PhaseExpression(num_phis));
    PhaseExpression ledger(num_phis);
    BasisState mask = 0;
    int quarter_turns = 0;

    for (const auto& op : seq) {
        if (const auto* pulse = std::get_if<PulseOp>(&op)) {
            if (pulse->qubit < 1 || pulse->qubit > n)
                throw Error("verify_refocus: pulse qubit out of range");
            mask = flip_qubit(mask, pulse->qubit);
            quarter_turns += 1;
        } else {
            const auto& g = std::get<DiagonalGate>(op);
            if (g.n != n) throw Error("verify_refocus: mixed register sizes");
            for (BasisState s = 0; s < count; ++s) diag[s] += g.phase(s ^ mask);
            ledger += g.global;
        }
    }
    if (mask != 0) return {false, PhaseExpression(num_phis)};
    // mask == 0 means every qubit was pulsed an even number of times, so the
    // accumulated i-factors pair into integer multiples of pi.
    ledger.pi_coeff += quarter_turns / 2;

    RefocusResult result;
    result.global_phase = diag[0] + ledger;
    result.refocused = true;
    for (BasisState s = 0; s < count; ++s) {
        PhaseExpression rel = diag[s] - diag[0];
        const int target_pi = s == all_ones_state(n) ? 1 : 0;
        if (rel.has_phi_terms() || ((rel.pi_coeff - target_pi) % 2) != 0) {
            result.refocused = false;
            break;
        }
    }
    return result;
}

namespace {

struct PhotonPass {
    std::set<int> blocked;  // cavities detuned during this pass
    int pulsed_qubit = 0;   // qubit flipped around the pass
};

std::vector<PhotonPass> dd_photon_passes(int n) {
    std::vector<PhotonPass> passes;
    passes.push_back({{}, n});
    for (int i = 0; i <= n - 2; ++i) {
        PhotonPass p;
        p.blocked.insert(n);
        for (int k = 1; k <= i; ++k) p.blocked.insert(k);
        p.pulsed_qubit = i + 1;
        passes.push_back(std::move(p));
    }
    return passes;
}

double composed_dd_fidelity(const NetworkSpec& base, const WavePacket& packet,
                            const std::vector<std::vector<double>>& phis_per_pass,
                            const McOptions& opts) {
    const int n = base.n();
    const BasisState count = BasisState{1} << n;
    std::vector<cplx> composed(count, 1.0);

    const auto passes = dd_photon_passes(n);
    for (std::size_t j = 0; j < passes.size(); ++j) {
        const auto& pass = passes[j];
        const auto& phis = phis_per_pass[j];
        NetworkSpec spec = base;
        spec.set_phi_values(phis);
        for (int k : pass.blocked) {
            auto& cav = spec.cavities[k - 1];
            cav.block_detuning = opts.block_detuning_kappas * cav.kappa;
        }
        OverlapEngine eng(spec, packet, opts.fidelity.model);
        std::vector<cplx> target(count);
        for (BasisState s = 0; s < count; ++s) {
            const double phase = ideal_phase_table(spec, s).eval(phis);
            target[s] = std::exp(cplx(0.0, -phase)) / static_cast<double>(count);
        }
        const auto [xi_star, unused] =
            eng.maximize_xi(target, xi_window_low(spec, opts.fidelity.xi_window_scale),
                            xi_window_high(spec, opts.fidelity.xi_window_scale),
                            xi_tolerance(spec, opts.fidelity.xi_tol_scale), 64);
        for (BasisState s = 0; s < count; ++s)
            composed[s] *= eng.state_overlap(flip_qubit(s, pass.pulsed_qubit), xi_star);
    }

    cplx acc = 0.0;
    for (BasisState s = 0; s < count; ++s)
        acc += static_cast<double>(cp_sign(s, n)) * composed[s];
    return std::norm(acc / static_cast<double>(count));
}

}  // namespace

McResult noisy_fidelity_mc(const NetworkSpec& spec, const WavePacket& packet, double delta,
                           int samples, bool with_dd, std::uint64_t seed, const McOptions& opts) {
    spec.validate();
    if (delta < 0.0) throw std::invalid_argument("noisy_fidelity_mc: delta >= 0");
    if (samples < 1) throw std::invalid_argument("noisy_fidelity_mc: samples >= 1");
    require_n(spec.n());

    const std::size_t num_phis = spec.num_phis();
    double sum = 0.0, sumsq = 0.0;
    for (int idx = 0; idx < samples; ++idx) {
        SplitMix64 rng = SplitMix64::for_sample(seed, static_cast<std::uint64_t>(idx));
        std::vector<double> phis(num_phis);
        for (auto& p : phis) p = delta * rng.next_normal();

        NetworkSpec noisy = spec;
        noisy.set_phi_values(phis);

        double f;
        if (!with_dd) {
            f = gate_fidelity(noisy, packet, opts.fidelity).fidelity;
        } else {
            // quasi-static noise: one draw shared by every photon; the
            // exploratory mode redraws per photon instead
            std::vector<std::vector<double>> per_pass(spec.n(), phis);
            if (opts.resample_per_photon) {
                for (int j = 1; j < spec.n(); ++j)
                    for (auto& p : per_pass[j]) p = delta * rng.next_normal();
            }
            f = composed_dd_fidelity(noisy, packet, per_pass, opts);
        }
        sum += f;
        sumsq += f * f;
    }
    McResult out;
    out.samples = samples;
    out.seed = seed;
    out.mean = sum / samples;
    const double var = std::max(0.0, sumsq / samples - out.mean * out.mean);
    out.stderr_mean = samples > 1 ? std::sqrt(var / (samples - 1)) : 0.0;
    return out;
}

}  // namespace qnet
