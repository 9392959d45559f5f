// Ideal photon-number-resolving post-selection and H/V coincidence
// measurement with conditional-state extraction.

#pragma once

#include <map>
#include <utility>
#include <vector>

#include "linopt/fock.hpp"

namespace linopt {

// Required total photon count per mode (summed over polarization).
struct DetectionPattern {
    std::map<ModeId, unsigned> required_counts;
};

// One photon per listed mode.
DetectionPattern one_per_mode(const std::vector<ModeId>& modes);

struct PostSelection {
    double probability = 0.0;
    StateVector conditional;  // normalized; empty when !valid
    bool valid = false;
};

// Keeps the terms matching `p` exactly. Zero probability is a result, not an
// error.
PostSelection post_select_counts(const StateVector& s, const DetectionPattern& p);

// Measured polarization per mode, in the order the modes were measured.
struct CoincidenceOutcome {
    std::vector<std::pair<ModeId, Polarization>> results;

    unsigned v_count() const;
    friend bool operator==(const CoincidenceOutcome&, const CoincidenceOutcome&) = default;
};

struct Branch {
    CoincidenceOutcome outcome;
    double probability = 0.0;
    StateVector conditional;  // normalized, measured modes removed
};

// Branch probabilities below this are treated as unrealizable and omitted.
inline constexpr double kBranchCutoff = 1e-24;

// H/V measurement of single photons in `measured_modes`. Outcomes are
// enumerated H < V, first mode most significant; unrealizable outcomes are
// dropped. Throws NotSinglePhoton if some term does not hold exactly one
// photon in every measured mode.
std::vector<Branch> coincidence_branches(const StateVector& s, const std::vector<ModeId>& measured_modes);

// Direct coincidence filtering of an unselected state: keeps terms with
// exactly one photon in each of `coincidence_modes`, then splits them by the
// polarization found in `measured_modes` (a subset). Probabilities are
// absolute, i.e. they include the coincidence probability.
std::vector<Branch> filtered_coincidence_branches(const StateVector& s, const std::vector<ModeId>& coincidence_modes,
                                                  const std::vector<ModeId>& measured_modes);

}  // namespace linopt
