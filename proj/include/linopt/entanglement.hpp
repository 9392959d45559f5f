#pragma once

#include <vector>

#include "linopt/fock.hpp"

namespace linopt {

// Split of single-photon polarization qubits into two parties.
struct Bipartition {
    std::vector<ModeId> side_a;
    std::vector<ModeId> side_b;
};

// Squared Schmidt coefficients (reduced-state eigenvalues), descending.
struct SchmidtSpectrum {
    std::vector<double> coefficients;
};

// Throws QubitConditionViolated unless the sides are disjoint, cover every
// occupied mode, and each listed mode holds exactly one photon in every term.
// Throws InvariantViolation if the eigenvalues sum to 1 only within > 1e-9
// (the input was not normalized).
SchmidtSpectrum schmidt_spectrum(const StateVector& s, const Bipartition& b);

// Von Neumann entropy in ebits; 0 log 0 = 0.
double entropy(const SchmidtSpectrum& sp);

// |<target|s>|^2
double fidelity(const StateVector& s, const StateVector& target);

enum class TargetKind { BellPhiPlus, BellPhiMinus, GhzPlus, GhzMinus };

// (|H...H> +/- |V...V>)/sqrt(2) over `modes`. Bell kinds need exactly two
// modes, GHZ kinds at least two; otherwise ArityMismatch.
StateVector canonical_state(TargetKind kind, const std::vector<ModeId>& modes);

}  // namespace linopt
