#include "linopt/measurement.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "linopt/error.hpp"

namespace linopt {

namespace {

// Polarization of the single photon in `mode`, or nullopt if the mode does
// not hold exactly one photon.
std::optional<Polarization> single_photon_pol(const FockTerm& t, const ModeId& mode) {
    const unsigned h = t.count(mode, Polarization::H);
    const unsigned v = t.count(mode, Polarization::V);
    if (h + v != 1) return std::nullopt;
    return h == 1 ? Polarization::H : Polarization::V;
}

// Outcome bits with the first mode most significant, so numeric order is the
// canonical H < V lexicographic order.
std::size_t outcome_index(const FockTerm& t, const std::vector<ModeId>& modes) {
    std::size_t idx = 0;
    for (const auto& m : modes) {
        idx = (idx << 1) | (*single_photon_pol(t, m) == Polarization::V ? 1u : 0u);
    }
    return idx;
}

CoincidenceOutcome outcome_from_index(std::size_t idx, const std::vector<ModeId>& modes) {
    CoincidenceOutcome o;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const bool v = (idx >> (modes.size() - 1 - k)) & 1u;
        o.results.emplace_back(modes[k], v ? Polarization::V : Polarization::H);
    }
    return o;
}

std::vector<Branch> split_by_outcome(const StateVector& s, const std::vector<ModeId>& measured) {
    std::map<std::size_t, StateVector> parts;
    for (const auto& [term, amp] : s.terms()) {
        FockTerm stripped = term;
        for (const auto& m : measured) stripped = stripped.without_mode(m);
        parts[outcome_index(term, measured)].accumulate(stripped, amp);
    }
    std::vector<Branch> out;
    for (const auto& [idx, part] : parts) {
        const double p = norm_squared(part);
        if (p < kBranchCutoff) continue;
        out.push_back({outcome_from_index(idx, measured), p, normalize(part).state});
    }
    return out;
}

void check_distinct(const std::vector<ModeId>& modes) {
    auto sorted = modes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidConfig("measured modes must be distinct");
    }
}

}  // namespace

DetectionPattern one_per_mode(const std::vector<ModeId>& modes) {
    DetectionPattern p;
    for (const auto& m : modes) p.required_counts[m] = 1;
    return p;
}

unsigned CoincidenceOutcome::v_count() const {
    return static_cast<unsigned>(
        std::count_if(results.begin(), results.end(), [](const auto& r) { return r.second == Polarization::V; }));
}

PostSelection post_select_counts(const StateVector& s, const DetectionPattern& p) {
    StateVector kept;
    for (const auto& [term, amp] : s.terms()) {
        const bool match = std::all_of(p.required_counts.begin(), p.required_counts.end(),
                                       [&](const auto& rc) { return term.mode_count(rc.first) == rc.second; });
        if (match) kept.accumulate(term, amp);
    }
    PostSelection out;
    out.probability = norm_squared(kept);
    if (out.probability < kBranchCutoff) return out;
    out.conditional = normalize(kept).state;
    out.valid = true;
    return out;
}

std::vector<Branch> coincidence_branches(const StateVector& s, const std::vector<ModeId>& measured_modes) {
    check_distinct(measured_modes);
    for (const auto& [term, amp] : s.terms()) {
        for (const auto& m : measured_modes) {
            if (!single_photon_pol(term, m)) {
                throw NotSinglePhoton("mode '" + m.label() + "' does not hold exactly one photon in every term");
            }
        }
    }
    return split_by_outcome(s, measured_modes);
}

std::vector<Branch> filtered_coincidence_branches(const StateVector& s, const std::vector<ModeId>& coincidence_modes,
                                                  const std::vector<ModeId>& measured_modes) {
    check_distinct(measured_modes);
    for (const auto& m : measured_modes) {
        if (std::find(coincidence_modes.begin(), coincidence_modes.end(), m) == coincidence_modes.end()) {
            throw InvalidConfig("measured mode '" + m.label() + "' is not a coincidence mode");
        }
    }
    StateVector coincident;
    for (const auto& [term, amp] : s.terms()) {
        const bool all_single = std::all_of(coincidence_modes.begin(), coincidence_modes.end(),
                                            [&](const ModeId& m) { return single_photon_pol(term, m).has_value(); });
        if (all_single) coincident.accumulate(term, amp);
    }
    return split_by_outcome(coincident, measured_modes);
}

}  // namespace linopt
