#include "linopt/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "linopt/error.hpp"

namespace linopt {

namespace {

constexpr double kConfigTolerance = 1e-6;
constexpr double kProbabilityTolerance = 1e-12;

void check_parties(int parties) {
    if (parties != 2 && parties != 3) {
        throw UnsupportedPartyCount("parties must be 2 or 3, got " + std::to_string(parties));
    }
}

std::vector<ModeId> labels(int first, int count) {
    std::vector<ModeId> out;
    for (int k = 0; k < count; ++k) out.emplace_back(std::to_string(first + k));
    return out;
}

double pair_entropy(const ProtocolConfig& cfg) {
    const auto modes = first_copy_modes(cfg.parties);
    const StateVector pair = partially_entangled(cfg.alpha, cfg.beta, modes);
    Bipartition b{{modes.front()}, {modes.begin() + 1, modes.end()}};
    return entropy(schmidt_spectrum(prune(pair), b));
}

}  // namespace

ProtocolConfig make_config(Amplitude alpha, Amplitude beta, int parties, bool apply_correction) {
    check_parties(parties);
    if (!std::isfinite(std::abs(alpha)) || !std::isfinite(std::abs(beta))) {
        throw InvalidConfig("alpha and beta must be finite");
    }
    const double n = std::norm(alpha) + std::norm(beta);
    if (std::abs(n - 1.0) > kConfigTolerance) {
        throw InvalidConfig("|alpha|^2 + |beta|^2 = " + std::to_string(n) + ", expected 1");
    }
    const double r = 1.0 / std::sqrt(n);
    return ProtocolConfig{alpha * r, beta * r, parties, apply_correction, 0};
}

std::vector<ModeId> first_copy_modes(int parties) {
    check_parties(parties);
    return labels(1, parties);
}

std::vector<ModeId> second_copy_modes(int parties) {
    check_parties(parties);
    return labels(parties + 1, parties);
}

StateVector partially_entangled(Amplitude alpha, Amplitude beta, const std::vector<ModeId>& modes) {
    StateVector h_part = vacuum();
    StateVector v_part = vacuum();
    for (const auto& m : modes) {
        h_part = tensor(h_part, single_photon(m, Polarization::H));
        v_part = tensor(v_part, single_photon(m, Polarization::V));
    }
    return add(scale(h_part, alpha), scale(v_part, beta));
}

StateVector build_input(const ProtocolConfig& cfg) {
    const StateVector first = partially_entangled(cfg.alpha, cfg.beta, first_copy_modes(cfg.parties));
    const StateVector second = partially_entangled(cfg.alpha, cfg.beta, second_copy_modes(cfg.parties));
    return prune(tensor(first, second));
}

Circuit build_concentration_circuit(int parties) {
    check_parties(parties);
    if (parties == 2) {
        return Circuit{{"1", "2", "3", "4"},
                       {Hwp{"3", 90.0}, Hwp{"4", 90.0}, Pbs{"2", "4", "2p", "4p"}, Hwp{"3", 45.0}, Hwp{"4p", 45.0}}};
    }
    return Circuit{{"1", "2", "3", "4", "5", "6"},
                   {Hwp{"4", 90.0}, Hwp{"5", 90.0}, Hwp{"6", 90.0}, Pbs{"2", "5", "2p", "5p"},
                    Pbs{"3", "6", "3p", "6p"}, Hwp{"4", 45.0}, Hwp{"5p", 45.0}, Hwp{"6p", 45.0}}};
}

ConcentrationStages split_stages(const Circuit& c) {
    validate(c);
    std::size_t last_pbs = c.elements.size();
    for (std::size_t i = 0; i < c.elements.size(); ++i) {
        if (std::holds_alternative<Pbs>(c.elements[i])) last_pbs = i;
    }
    if (last_pbs == c.elements.size()) throw InvalidConfig("concentration circuit has no PBS");

    ConcentrationStages st;
    st.interference.modes = c.modes;
    st.interference.elements.assign(c.elements.begin(), c.elements.begin() + static_cast<long>(last_pbs) + 1);
    st.coincidence = live_modes_after(st.interference);
    st.analysis.modes = st.coincidence;
    st.analysis.elements.assign(c.elements.begin() + static_cast<long>(last_pbs) + 1, c.elements.end());

    for (const auto& e : st.analysis.elements) {
        if (const auto* h = std::get_if<Hwp>(&e)) {
            if (std::find(st.measured.begin(), st.measured.end(), h->mode) == st.measured.end()) {
                st.measured.push_back(h->mode);
            }
        }
    }
    if (st.measured.empty()) throw InvalidConfig("concentration circuit has no analysis stage");
    for (const auto& m : st.coincidence) {
        if (std::find(st.measured.begin(), st.measured.end(), m) == st.measured.end()) st.kept.push_back(m);
    }
    return st;
}

ProtocolReport run(const ProtocolConfig& cfg) { return run(cfg, build_concentration_circuit(cfg.parties)); }

ProtocolReport run(const ProtocolConfig& cfg, const Circuit& scenario) {
    check_parties(cfg.parties);
    const ConcentrationStages st = split_stages(scenario);

    auto expected_modes = first_copy_modes(cfg.parties);
    const auto second = second_copy_modes(cfg.parties);
    expected_modes.insert(expected_modes.end(), second.begin(), second.end());
    if (std::set<ModeId>(scenario.modes.begin(), scenario.modes.end()) !=
        std::set<ModeId>(expected_modes.begin(), expected_modes.end())) {
        throw InvalidConfig("scenario must declare exactly the input modes of a " + std::to_string(cfg.parties) +
                            "-party run");
    }
    if (st.kept.size() != static_cast<std::size_t>(cfg.parties) || cfg.correction_party >= st.kept.size()) {
        throw InvalidConfig("scenario must keep one photon per party");
    }

    ProtocolReport rep;
    rep.parties = cfg.parties;
    rep.alpha = cfg.alpha;
    rep.beta = cfg.beta;
    rep.predicted_probability = 2.0 * std::norm(cfg.alpha * cfg.beta);
    rep.target_kind = cfg.parties == 2 ? TargetKind::BellPhiPlus : TargetKind::GhzPlus;
    rep.kept_modes = st.kept;
    rep.measured_modes = st.measured;
    rep.input_entropy_ebits = pair_entropy(cfg);

    const StateVector interfered = apply_circuit(build_input(cfg), st.interference);
    const PostSelection ps = post_select_counts(interfered, one_per_mode(st.coincidence));
    rep.success_probability = ps.probability;
    if (rep.success_probability > 0.5 + kProbabilityTolerance) {
        throw InvariantViolation("success probability exceeds 1/2");
    }
    if (!ps.valid) return rep;

    rep.intermediate_ghz_fidelity = fidelity(ps.conditional, canonical_state(TargetKind::GhzPlus, st.coincidence));

    const StateVector rotated = apply_circuit(ps.conditional, st.analysis);
    const StateVector plus = canonical_state(rep.target_kind, st.kept);
    const Bipartition out_split{{st.kept.front()}, {st.kept.begin() + 1, st.kept.end()}};
    const ModeId& fix_mode = st.kept[cfg.correction_party];

    double total = 0.0;
    double weighted_entropy = 0.0;
    for (const Branch& b : coincidence_branches(rotated, st.measured)) {
        BranchRecord rec;
        rec.outcome = b.outcome;
        rec.probability = ps.probability * b.probability;
        rec.fidelity_pre = fidelity(b.conditional, plus);
        StateVector out = b.conditional;
        if (cfg.apply_correction && b.outcome.v_count() % 2 == 1) {
            out = apply_phase_shift(out, fix_mode, Polarization::V, std::numbers::pi);
            rec.corrected = true;
        }
        rec.fidelity_post = fidelity(out, plus);
        weighted_entropy += b.probability * entropy(schmidt_spectrum(out, out_split));
        total += rec.probability;
        rep.branches.push_back(std::move(rec));
    }
    if (std::abs(total - rep.success_probability) > kProbabilityTolerance) {
        throw InvariantViolation("branch probabilities do not sum to the success probability");
    }
    rep.output_entropy_ebits = weighted_entropy;
    return rep;
}

std::vector<SweepRow> sweep(std::span<const double> alphas, int parties) {
    check_parties(parties);
    std::vector<SweepRow> rows;
    rows.reserve(alphas.size());
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) throw InvalidConfig("alpha out of range");
        const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
        const ProtocolReport rep = run(make_config({a, 0.0}, {b, 0.0}, parties));
        rows.push_back({a, rep.success_probability, rep.predicted_probability, rep.input_entropy_ebits,
                        rep.output_entropy_ebits});
    }
    return rows;
}

}  // namespace linopt
