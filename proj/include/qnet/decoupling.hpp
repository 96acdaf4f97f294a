#ifndef QNET_DECOUPLING_HPP
#define QNET_DECOUPLING_HPP

#include <cstdint>
#include <set>
#include <variant>
#include <vector>

#include "qnet/fidelity.hpp"
#include "qnet/network.hpp"
#include "qnet/phase.hpp"

namespace qnet {

// Diagonal unitary over the N-qubit register with exact symbolic phases,
// plus a state-independent global ledger that composition never drops.
struct DiagonalGate {
    int n = 0;
    std::vector<PhaseExpression> phases;  // indexed by BasisState
    PhaseExpression global;

    const PhaseExpression& phase(BasisState s) const { return phases[s]; }
    bool same_action(const DiagonalGate& o) const;
};

// pi rotation of one qubit, Pi_i = exp(i pi sigma_x,i / 2) = i sigma_x,i.
struct PulseOp {
    int qubit = 0;  // 1-based
};

using SequenceOp = std::variant<DiagonalGate, PulseOp>;

// The noisy multi-qubit C-PHASE: pi on the all-ones state plus the traversed
// noise phases of each leading-ones prefix.
DiagonalGate build_u_cp(int n);

// Diagonal gate realized by a photon pass with a blocked-cavity set. Supported
// sets are those of the refocusing sequences: {N} together with a prefix
// {1..i}, 0 <= i <= N-2. Anything else throws.
DiagonalGate build_u_block(int n, const std::set<int>& blocked);

// Pi_i U Pi_i for diagonal U: the diagonal permuted by flipping qubit i, with
// the Pi_i^2 = e^{i pi} factor pushed into the global ledger.
DiagonalGate conjugate_by_pulse(const DiagonalGate& gate, const PulseOp& p);

// The refocusing sequence in application order (first element acts first):
//   (Pi_N . U_CP . Pi_N), (Pi_1 . U_B{N} . Pi_1), (Pi_2 . U_B{N,1} . Pi_2),
//   ..., (Pi_{N-1} . U_B{N,N-2..1} . Pi_{N-1})
// N diagonal gates and 2N pulses in total.
std::vector<SequenceOp> dd_sequence(int n);

struct RefocusResult {
    bool refocused = false;
    PhaseExpression global_phase;
};

// Composes the sequence exactly (integer arithmetic, no tolerance) and checks
// that every relative phase is free of noise terms and equals the C-PHASE
// pattern mod 2 pi. Returns the state-independent residue.
RefocusResult verify_refocus(const std::vector<SequenceOp>& seq);

struct McOptions {
    double block_detuning_kappas = 1e3;  // blocked-cavity detuning in units of kappa
    FidelityOptions fidelity;
    bool resample_per_photon = false;  // exploratory mode; quasi-static by default
};

struct McResult {
    double mean = 0.0;
    double stderr_mean = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo gate fidelity under quasi-static path-phase noise
// phi_i ~ Normal(0, delta), phases held fixed across the photons of one
// sequence. Without DD this is one noisy gate evaluation per sample. With DD
// each photon of the refocusing sequence is evaluated through the full
// network model (blocked cavities detuned), each projected on its own
// optimized reference mode; the composed per-state amplitude is the product
// of the per-photon overlaps with the pulse permutations interleaved.
McResult noisy_fidelity_mc(const NetworkSpec& spec, const WavePacket& packet, double delta,
                           int samples, bool with_dd, std::uint64_t seed,
                           const McOptions& opts = {});

}  // namespace qnet

#endif
