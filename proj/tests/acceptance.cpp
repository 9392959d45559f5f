// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "json.hpp"
#include "linopt/dense.hpp"
#include "linopt/elements.hpp"
#include "linopt/entanglement.hpp"
#include "linopt/measurement.hpp"
#include "linopt/protocols.hpp"

using namespace linopt;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<double> uniform_alphas(int n) {
    std::vector<double> a;
    for (int k = 0; k < n; ++k) a.push_back(k + 1 == n ? 1.0 : static_cast<double>(k) / (n - 1));
    return a;
}

struct Proc {
    int status = -1;
    std::string out;
};

Proc run_tool(const std::string& args) {
    const std::string cmd = std::string("'") + LINOPT_CLI_PATH + "' " + args + " 2>/dev/null";
    Proc p;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return p;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) p.out.append(buf, n);
    const int raw = pclose(f);
    p.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return p;
}

Outcome probability_law(int parties, double time_limit) {
    const auto t0 = Clock::now();
    const auto rows = sweep(uniform_alphas(101), parties);
    const double elapsed = seconds_since(t0);
    double worst = 0.0;
    for (const auto& r : rows) {
        const double a = r.alpha;
        worst = std::max(worst, std::abs(r.success_probability - 2 * a * a * (1 - a * a)));
    }
    return {rows.size() == 101 && worst < 1e-12 && elapsed < time_limit,
            "max err " + fmt("%.2e", worst) + ", " + fmt("%.2f", elapsed) + " s"};
}

Outcome interference_structure() {
    const ConcentrationStages st = split_stages(build_concentration_circuit(2));
    const StateVector s = apply_circuit(build_input(make_config(0.6, 0.8, 2)), st.interference);
    std::vector<double> moduli;
    int bunched = 0;
    for (const auto& [t, amp] : s.terms()) {
        moduli.push_back(std::abs(amp));
        bool two = false;
        for (const auto& m : t.modes()) two = two || t.mode_count(m) == 2;
        bunched += two;
    }
    std::sort(moduli.begin(), moduli.end());
    const std::vector<double> want{0.36, 0.48, 0.48, 0.64};
    bool ok = moduli.size() == 4 && bunched == 2;
    double worst = 0.0;
    for (std::size_t k = 0; ok && k < 4; ++k) worst = std::max(worst, std::abs(moduli[k] - want[k]));
    ok = ok && worst < 1e-12;
    return {ok, std::to_string(moduli.size()) + " terms, " + std::to_string(bunched) + " bunched, max err " +
                    fmt("%.2e", worst)};
}

Outcome ghz_fidelity() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.02, 0.98), ph(-std::numbers::pi, std::numbers::pi);
    const ConcentrationStages st = split_stages(build_concentration_circuit(2));
    const StateVector ghz = canonical_state(TargetKind::GhzPlus, st.coincidence);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double a = u(rng);
        const ProtocolConfig cfg = make_config(a, std::polar(std::sqrt(1 - a * a), ph(rng)), 2);
        const StateVector s = apply_circuit(build_input(cfg), st.interference);
        const PostSelection ps = post_select_counts(s, one_per_mode(st.coincidence));
        if (!ps.valid) return {false, "post-selection failed"};
        worst = std::max(worst, std::abs(fidelity(ps.conditional, ghz) - 1.0));
    }
    return {worst < 1e-12, "20 inputs, max |F - 1| " + fmt("%.2e", worst)};
}

Outcome branch_table() {
    const std::vector<ModeId> kept{"1", "2p"};
    const StateVector plus = canonical_state(TargetKind::BellPhiPlus, kept);
    const StateVector minus = canonical_state(TargetKind::BellPhiMinus, kept);
    StateVector s = canonical_state(TargetKind::GhzPlus, {"1", "2p", "3", "4p"});
    s = apply_hwp(apply_hwp(s, "3", 45.0), "4p", 45.0);
    const auto branches = coincidence_branches(s, {"3", "4p"});
    if (branches.size() != 4) return {false, std::to_string(branches.size()) + " branches"};
    double worst_p = 0.0, worst_f = 0.0;
    for (const auto& b : branches) {
        worst_p = std::max(worst_p, std::abs(b.probability - 0.25));
        const bool odd = b.outcome.v_count() % 2 == 1;
        worst_f = std::max(worst_f, std::abs(fidelity(b.conditional, odd ? minus : plus) - 1.0));
        const StateVector fixed = odd ? apply_phase_shift(b.conditional, "1", Polarization::V, std::numbers::pi)
                                      : b.conditional;
        worst_f = std::max(worst_f, std::abs(fidelity(fixed, plus) - 1.0));
    }
    return {worst_p < 1e-12 && worst_f < 1e-12,
            "max |p - 0.25| " + fmt("%.2e", worst_p) + ", max |F - 1| " + fmt("%.2e", worst_f)};
}

Outcome unitarity() {
    const auto all = testgen::mode_labels(6);
    double worst = 0.0;
    std::size_t matrices = 0;
    for (std::size_t nm = 1; nm <= 6; ++nm) {
        const std::vector<ModeId> modes(all.begin(), all.begin() + nm);
        std::vector<Element> elements{Hwp{modes[0], 0.0},  Hwp{modes[0], 45.0},
                                      Hwp{modes[0], 90.0}, Hwp{modes[nm - 1], 33.7},
                                      PhaseShift{modes[0], Polarization::V, 1.3}};
        if (nm >= 2) elements.push_back(Pbs{modes[0], modes[nm - 1], "x", "y"});
        for (unsigned n = 0; n <= 4; ++n) {
            const auto basis = dense::enumerate_basis(modes, n);
            for (const auto& e : elements) {
                worst = std::max(worst, dense::unitarity_residual(dense::element_matrix(e, basis)));
                ++matrices;
            }
        }
    }

    // HWP(90) is the exact H <-> V swap on every basis up to 4 photons.
    bool swap_exact = true;
    const std::vector<ModeId> two(all.begin(), all.begin() + 2);
    for (unsigned n = 0; n <= 4; ++n) {
        const auto basis = dense::enumerate_basis(two, n);
        const auto m = dense::element_matrix(Hwp{two[0], 90.0}, basis);
        for (std::size_t c = 0; c < basis.size(); ++c) {
            FockTerm::Occupations occ = basis[c].occupations();
            const unsigned h = basis[c].count(two[0], Polarization::H);
            const unsigned v = basis[c].count(two[0], Polarization::V);
            occ[{two[0], Polarization::H}] = v;
            occ[{two[0], Polarization::V}] = h;
            const FockTerm swapped(occ);
            for (std::size_t r = 0; r < basis.size(); ++r) {
                const Amplitude want = basis[r] == swapped ? Amplitude(1.0) : Amplitude(0.0);
                swap_exact = swap_exact && m.at(r, c) == want;
            }
        }
    }
    swap_exact = swap_exact && apply_hwp(single_photon("3", Polarization::H), "3", 90.0) ==
                                   single_photon("3", Polarization::V);
    swap_exact = swap_exact && apply_hwp(single_photon("3", Polarization::V), "3", 90.0) ==
                                   single_photon("3", Polarization::H);

    // HWP(45): H -> (H + V)/sqrt2, V -> (H - V)/sqrt2.
    const double r = 1.0 / std::numbers::sqrt2;
    const std::vector<ModeId> one{"3"};
    const auto m45 = dense::element_matrix(Hwp{"3", 45.0}, dense::enumerate_basis(one, 1));
    double err45 = std::max({std::abs(m45.at(0, 0) - r), std::abs(m45.at(1, 0) - r), std::abs(m45.at(0, 1) - r),
                             std::abs(m45.at(1, 1) + r)});
    const StateVector h = apply_hwp(single_photon("3", Polarization::H), "3", 45.0);
    const StateVector v = apply_hwp(single_photon("3", Polarization::V), "3", 45.0);
    StateVector want_h, want_v;
    want_h.accumulate(FockTerm({{Slot{"3", Polarization::H}, 1u}}), r);
    want_h.accumulate(FockTerm({{Slot{"3", Polarization::V}, 1u}}), r);
    want_v.accumulate(FockTerm({{Slot{"3", Polarization::H}, 1u}}), r);
    want_v.accumulate(FockTerm({{Slot{"3", Polarization::V}, 1u}}), -r);
    err45 = std::max({err45, testgen::max_amplitude_diff(h, want_h), testgen::max_amplitude_diff(v, want_v)});

    return {worst < 1e-12 && swap_exact && err45 < 1e-15,
            std::to_string(matrices) + " matrices, max residual " + fmt("%.2e", worst) + ", HWP90 swap " +
                (swap_exact ? "exact" : "NOT exact") + ", HWP45 err " + fmt("%.2e", err45)};
}

// Shared randomized corpus for the oracle and conservation checks.
struct Case {
    StateVector input;
    Circuit circuit;
    unsigned photons;
};

std::vector<Case> corpus() {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> nmodes(2, 6), nphot(1, 4), nel(1, 8);
    std::vector<Case> out;
    for (int k = 0; k < 100; ++k) {
        const auto modes = testgen::mode_labels(nmodes(rng));
        const unsigned photons = static_cast<unsigned>(nphot(rng));
        Case c{testgen::random_state(rng, modes, photons, 8), testgen::random_circuit(rng, modes, nel(rng)), photons};
        out.push_back(std::move(c));
    }
    return out;
}

Outcome oracle_equivalence(const std::vector<Case>& cases) {
    double worst = 0.0;
    std::size_t pbs = 0;
    for (const auto& c : cases) {
        for (const auto& e : c.circuit.elements) pbs += std::holds_alternative<Pbs>(e);
        worst = std::max(worst, testgen::max_amplitude_diff(apply_circuit(c.input, c.circuit),
                                                            dense::apply_circuit(c.input, c.circuit)));
    }
    return {worst < 1e-12, std::to_string(cases.size()) + " circuits (" + std::to_string(pbs) +
                               " PBS), max amplitude diff " + fmt("%.2e", worst)};
}

Outcome conservation(const std::vector<Case>& cases) {
    double worst = 0.0;
    bool photons_ok = true;
    std::size_t applications = 0;
    for (const auto& c : cases) {
        StateVector s = c.input;
        for (const auto& e : c.circuit.elements) {
            const double before = norm_squared(s);
            s = apply_element(s, e);
            ++applications;
            worst = std::max(worst, std::abs(std::sqrt(norm_squared(s)) - std::sqrt(before)));
            for (const auto& [t, amp] : s.terms()) photons_ok = photons_ok && total_photons(t) == c.photons;
        }
    }
    return {worst < 1e-12 && photons_ok, std::to_string(applications) + " applications, max norm drift " +
                                             fmt("%.2e", worst) + ", photon number " +
                                             (photons_ok ? "conserved" : "NOT conserved")};
}

Outcome entropy_accounting() {
    double worst_in = 0.0, worst_out = 0.0;
    for (int parties : {2, 3}) {
        for (const auto& r : sweep(uniform_alphas(101), parties)) {
            const double a2 = r.alpha * r.alpha, b2 = 1 - a2;
            double h = 0.0;
            if (a2 > 0) h -= a2 * std::log2(a2);
            if (b2 > 0) h -= b2 * std::log2(b2);
            worst_in = std::max(worst_in, std::abs(r.input_entropy_ebits - h));
            if (r.success_probability > 0) worst_out = std::max(worst_out, std::abs(r.output_entropy_ebits - 1.0));
        }
    }
    return {worst_in < 1e-12 && worst_out < 1e-12,
            "max input err " + fmt("%.2e", worst_in) + ", max output err " + fmt("%.2e", worst_out)};
}

Outcome degenerate_inputs() {
    bool ok = true;
    std::string detail;
    for (int parties : {2, 3}) {
        for (const char* a : {"0", "1"}) {
            const double alpha = std::stod(a);
            const ProtocolReport rep = run(make_config(alpha, std::sqrt(1 - alpha * alpha), parties));
            ok = ok && rep.success_probability == 0.0 && rep.branches.empty();
            const Proc p = run_tool("--format json concentrate --alpha " + std::string(a) + " --parties " +
                                    std::to_string(parties));
            bool cli_ok = p.status == 0 && nlohmann::json::accept(p.out);
            if (cli_ok) {
                const auto j = nlohmann::json::parse(p.out);
                cli_ok = j["success_probability"].get<double>() == 0.0 && j["branches"].empty();
            }
            ok = ok && cli_ok;
            detail += std::string(detail.empty() ? "" : ", ") + "alpha=" + a + "/" + std::to_string(parties) +
                      "p exit " + std::to_string(p.status);
        }
    }
    return {ok, detail};
}

Outcome cli_determinism() {
    const Proc a = run_tool("sweep --start 0 --stop 1 --steps 101");
    const Proc b = run_tool("sweep --start 0 --stop 1 --steps 101");
    const bool sweep_same = a.status == 0 && b.status == 0 && !a.out.empty() && a.out == b.out;

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "linopt_acceptance";
    fs::create_directories(dir);
    const std::string circuit = std::string(LINOPT_SOURCE_DIR) + "/scenarios/concentration_2party.json";
    const std::string empty = (dir / "empty.json").string();
    std::ofstream(empty) << R"({"modes": ["1", "2p", "3", "4p"], "elements": []})";

    // Complex amplitudes with full 17-digit mantissas.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
    const ProtocolConfig cfg = make_config(std::polar(0.6, ph(rng)), std::polar(0.8, ph(rng)), 2);
    const StateVector input = build_input(cfg);
    const std::string in_path = (dir / "in.txt").string();
    std::ofstream(in_path, std::ios::binary) << to_text(input);

    const Proc first = run_tool("simulate --circuit '" + circuit + "' --state '" + in_path + "'");
    const std::string out_path = (dir / "out.txt").string();
    std::ofstream(out_path, std::ios::binary) << first.out;
    const Proc second = run_tool("simulate --circuit '" + empty + "' --state '" + out_path + "'");

    bool bit_exact = first.status == 0 && second.status == 0 && first.out == second.out;
    if (bit_exact) {
        const StateVector expected = apply_circuit(input, parse_circuit_json(R"({"modes": ["1","2","3","4"],
            "elements": [{"kind":"hwp","mode":"3","rotation_deg":90},{"kind":"hwp","mode":"4","rotation_deg":90},
            {"kind":"pbs","in":["2","4"],"out":["2p","4p"]},{"kind":"hwp","mode":"3","rotation_deg":45},
            {"kind":"hwp","mode":"4p","rotation_deg":45}]})"));
        const StateVector parsed = parse_state_text(first.out);
        bit_exact = parsed.size() == expected.size();
        for (const auto& [t, amp] : expected.terms()) {
            const Amplitude got = parsed.amplitude(t);
            bit_exact = bit_exact && std::memcmp(&got, &amp, sizeof(Amplitude)) == 0;
        }
    }
    fs::remove_all(dir);
    return {sweep_same && bit_exact, std::string("sweep ") + (sweep_same ? "byte-identical" : "DIFFERS") +
                                         ", simulate round trip " + (bit_exact ? "bit-exact" : "NOT bit-exact")};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    std::vector<Case> cases;
    const std::vector<Criterion> criteria{
        {1, "probability law, 2 parties", [] { return probability_law(2, 5.0); }},
        {2, "probability law, 3 parties", [] { return probability_law(3, 10.0); }},
        {3, "post-PBS four-term structure", interference_structure},
        {4, "GHZ4 fidelity after post-selection", ghz_fidelity},
        {5, "45 degree branch table and correction", branch_table},
        {6, "element unitarity", unitarity},
        {7, "sparse vs dense oracle", [&] { cases = corpus(); return oracle_equivalence(cases); }},
        {8, "norm and photon-number conservation", [&] { return conservation(cases); }},
        {9, "entropy accounting", entropy_accounting},
        {10, "degenerate inputs", degenerate_inputs},
        {11, "CLI determinism", cli_determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s  %2d  %-40s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
