#include "linopt/entanglement.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "linopt/error.hpp"

namespace linopt {

namespace {

constexpr double kRenormalizeDrift = 1e-12;
constexpr double kMaxDrift = 1e-9;

// Bit k (most significant first) set when mode k holds a V photon.
Eigen::Index qubit_index(const FockTerm& t, const std::vector<ModeId>& modes) {
    Eigen::Index idx = 0;
    for (const auto& m : modes) {
        const unsigned h = t.count(m, Polarization::H);
        const unsigned v = t.count(m, Polarization::V);
        if (h + v != 1) {
            throw QubitConditionViolated("mode '" + m.label() + "' does not hold exactly one photon");
        }
        idx = (idx << 1) | (v == 1 ? 1 : 0);
    }
    return idx;
}

}  // namespace

SchmidtSpectrum schmidt_spectrum(const StateVector& s, const Bipartition& b) {
    std::set<ModeId> a_set(b.side_a.begin(), b.side_a.end());
    std::set<ModeId> b_set(b.side_b.begin(), b.side_b.end());
    if (a_set.size() != b.side_a.size() || b_set.size() != b.side_b.size()) {
        throw QubitConditionViolated("bipartition lists a mode twice");
    }
    if (b.side_a.empty() || b.side_b.empty()) throw QubitConditionViolated("bipartition side is empty");
    for (const auto& m : a_set) {
        if (b_set.count(m)) throw QubitConditionViolated("mode '" + m.label() + "' is on both sides");
    }
    for (const auto& m : s.occupied_modes()) {
        if (!a_set.count(m) && !b_set.count(m)) {
            throw QubitConditionViolated("occupied mode '" + m.label() + "' is not in the bipartition");
        }
    }

    const Eigen::Index rows = Eigen::Index{1} << b.side_a.size();
    const Eigen::Index cols = Eigen::Index{1} << b.side_b.size();
    Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(rows, cols);
    for (const auto& [term, amp] : s.terms()) {
        coeff(qubit_index(term, b.side_a), qubit_index(term, b.side_b)) += amp;
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coeff);
    SchmidtSpectrum sp;
    double sum = 0.0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        const double sigma = svd.singularValues()(k);
        const double lambda = std::max(0.0, sigma * sigma);
        sp.coefficients.push_back(lambda);
        sum += lambda;
    }
    const double drift = std::abs(sum - 1.0);
    if (drift > kMaxDrift) {
        throw InvariantViolation("Schmidt coefficients sum to " + std::to_string(sum) + "; state not normalized");
    }
    if (drift > kRenormalizeDrift) {
        for (double& l : sp.coefficients) l /= sum;
    }
    std::sort(sp.coefficients.begin(), sp.coefficients.end(), std::greater<>());
    return sp;
}

double entropy(const SchmidtSpectrum& sp) {
    double h = 0.0;
    for (double l : sp.coefficients) {
        if (l > 0.0) h -= l * std::log2(l);
    }
    return h;
}

double fidelity(const StateVector& s, const StateVector& target) { return std::norm(inner_product(target, s)); }

StateVector canonical_state(TargetKind kind, const std::vector<ModeId>& modes) {
    const bool bell = kind == TargetKind::BellPhiPlus || kind == TargetKind::BellPhiMinus;
    if (bell && modes.size() != 2) throw ArityMismatch("Bell states need exactly two modes");
    if (modes.size() < 2) throw ArityMismatch("GHZ states need at least two modes");
    if (std::set<ModeId>(modes.begin(), modes.end()).size() != modes.size()) {
        throw ArityMismatch("target modes must be distinct");
    }
    const double sign = (kind == TargetKind::BellPhiMinus || kind == TargetKind::GhzMinus) ? -1.0 : 1.0;
    FockTerm::Occupations all_h;
    FockTerm::Occupations all_v;
    for (const auto& m : modes) {
        all_h[{m, Polarization::H}] = 1;
        all_v[{m, Polarization::V}] = 1;
    }
    const double r = 1.0 / std::numbers::sqrt2;
    StateVector s;
    s.accumulate(FockTerm(all_h), {r, 0.0});
    s.accumulate(FockTerm(all_v), {sign * r, 0.0});
    return s;
}

}  // namespace linopt
