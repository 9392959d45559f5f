// Entanglement concentration of two identical partially entangled pairs
// (parties = 2) or GHZ triples (parties = 3):
//
//   1. Rotate every photon of the second copy by 90 degrees.
//   2. Interfere one photon of each copy per remote party on a PBS.
//   3. Keep events with exactly one photon in every output mode; this leaves
//      a 2n-photon GHZ state with probability 2|alpha beta|^2.
//   4. Measure one photon per party in the 45 degree basis (HWP at 45 then
//      H/V detection). An odd number of V outcomes leaves the minus-sign
//      GHZ state, fixed by a pi phase on the V component of one kept photon.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "linopt/elements.hpp"
#include "linopt/entanglement.hpp"
#include "linopt/fock.hpp"
#include "linopt/measurement.hpp"

namespace linopt {

struct ProtocolConfig {
    Amplitude alpha{1.0, 0.0};
    Amplitude beta{0.0, 0.0};
    int parties = 2;
    bool apply_correction = true;
    // Index into the kept modes (canonical order) of the photon that receives
    // the pi correction. 0 is party 1.
    std::size_t correction_party = 0;
};

// Validates and normalizes. Throws InvalidConfig if | |a|^2 + |b|^2 - 1 | >
// 1e-6, UnsupportedPartyCount unless parties is 2 or 3.
ProtocolConfig make_config(Amplitude alpha, Amplitude beta, int parties, bool apply_correction = true);

// Mode labels of the two copies: {1,2},{3,4} or {1,2,3},{4,5,6}.
std::vector<ModeId> first_copy_modes(int parties);
std::vector<ModeId> second_copy_modes(int parties);

// alpha |H...H> + beta |V...V> over `modes`.
StateVector partially_entangled(Amplitude alpha, Amplitude beta, const std::vector<ModeId>& modes);

StateVector build_input(const ProtocolConfig& cfg);

// parties = 2:  HWP(3,90) HWP(4,90) PBS(2,4 -> 2p,4p) HWP(3,45) HWP(4p,45)
// parties = 3:  HWP(4,90) HWP(5,90) HWP(6,90) PBS(2,5 -> 2p,5p)
//               PBS(3,6 -> 3p,6p) HWP(4,45) HWP(5p,45) HWP(6p,45)
Circuit build_concentration_circuit(int parties);

// A concentration circuit split at its last PBS.
struct ConcentrationStages {
    Circuit interference;               // through the last PBS
    Circuit analysis;                   // the 45 degree stage
    std::vector<ModeId> coincidence;    // live modes after interference
    std::vector<ModeId> measured;       // modes rotated in the analysis stage
    std::vector<ModeId> kept;           // coincidence minus measured
};

// Throws InvalidConfig if the circuit has no PBS or its analysis stage
// contains a PBS.
ConcentrationStages split_stages(const Circuit& c);

struct BranchRecord {
    CoincidenceOutcome outcome;
    double probability = 0.0;  // absolute: includes the post-selection probability
    double fidelity_pre = 0.0;
    double fidelity_post = 0.0;
    bool corrected = false;
};

struct ProtocolReport {
    int parties = 2;
    Amplitude alpha;
    Amplitude beta;
    double success_probability = 0.0;
    double predicted_probability = 0.0;
    double intermediate_ghz_fidelity = 0.0;  // 0 when nothing survives post-selection
    std::vector<BranchRecord> branches;
    double input_entropy_ebits = 0.0;
    double output_entropy_ebits = 0.0;
    TargetKind target_kind = TargetKind::BellPhiPlus;
    std::vector<ModeId> kept_modes;
    std::vector<ModeId> measured_modes;
};

ProtocolReport run(const ProtocolConfig& cfg);

// Runs with an alternate wiring. The circuit must declare the input modes
// of `cfg.parties` and end in an analysis stage after its last PBS.
ProtocolReport run(const ProtocolConfig& cfg, const Circuit& scenario);

struct SweepRow {
    double alpha = 0.0;
    double success_probability = 0.0;
    double predicted_probability = 0.0;
    double input_entropy_ebits = 0.0;
    double output_entropy_ebits = 0.0;
};

// beta = sqrt(1 - alpha^2). Throws InvalidConfig if some alpha is outside
// [0, 1].
std::vector<SweepRow> sweep(std::span<const double> alphas, int parties);

}  // namespace linopt
