#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "linopt/report.hpp"

namespace linopt {

namespace {

using ojson = nlohmann::ordered_json;

ojson complex_json(Amplitude a) { return ojson{{"re", a.real()}, {"im", a.imag()}}; }

ojson outcome_json(const CoincidenceOutcome& o) {
    ojson j = ojson::object();
    for (const auto& [mode, pol] : o.results) j[mode.label()] = std::string(1, to_char(pol));
    return j;
}

std::string outcome_string(const CoincidenceOutcome& o) {
    std::string s;
    for (const auto& [mode, pol] : o.results) {
        if (!s.empty()) s += ' ';
        s += mode.label() + ":" + to_char(pol);
    }
    return s;
}

ojson modes_json(const std::vector<ModeId>& modes) {
    ojson j = ojson::array();
    for (const auto& m : modes) j.push_back(m.label());
    return j;
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string target_kind_name(TargetKind kind) {
    switch (kind) {
        case TargetKind::BellPhiPlus:
        case TargetKind::BellPhiMinus: return "bell";
        case TargetKind::GhzPlus:
        case TargetKind::GhzMinus: return "ghz";
    }
    return "unknown";
}

std::string report_to_json(const ProtocolReport& r) {
    ojson branches = ojson::array();
    for (const auto& b : r.branches) {
        branches.push_back({{"outcome", outcome_json(b.outcome)},
                            {"probability", b.probability},
                            {"pre_correction_fidelity", b.fidelity_pre},
                            {"post_correction_fidelity", b.fidelity_post},
                            {"corrected", b.corrected}});
    }
    ojson j{{"parties", r.parties},
            {"alpha", complex_json(r.alpha)},
            {"beta", complex_json(r.beta)},
            {"target_kind", target_kind_name(r.target_kind)},
            {"success_probability", r.success_probability},
            {"predicted_probability", r.predicted_probability},
            {"intermediate_ghz_fidelity", r.intermediate_ghz_fidelity},
            {"kept_modes", modes_json(r.kept_modes)},
            {"measured_modes", modes_json(r.measured_modes)},
            {"branches", branches},
            {"input_entropy_ebits", r.input_entropy_ebits},
            {"output_entropy_ebits", r.output_entropy_ebits}};
    return j.dump(2) + "\n";
}

std::string report_to_text(const ProtocolReport& r) {
    std::ostringstream os;
    os << "parties                    " << r.parties << "\n"
       << "alpha                      " << format_g17(r.alpha.real()) << " " << format_g17(r.alpha.imag()) << "i\n"
       << "beta                       " << format_g17(r.beta.real()) << " " << format_g17(r.beta.imag()) << "i\n"
       << "target                     " << target_kind_name(r.target_kind) << "\n"
       << "success_probability        " << format_g17(r.success_probability) << "\n"
       << "predicted_probability      " << format_g17(r.predicted_probability) << "\n"
       << "intermediate_ghz_fidelity  " << format_g17(r.intermediate_ghz_fidelity) << "\n"
       << "input_entropy_ebits        " << format_g17(r.input_entropy_ebits) << "\n"
       << "output_entropy_ebits       " << format_g17(r.output_entropy_ebits) << "\n"
       << "branches                   " << r.branches.size() << "\n";
    for (const auto& b : r.branches) {
        os << "  [" << outcome_string(b.outcome) << "] p=" << format_g17(b.probability)
           << " F_pre=" << format_g17(b.fidelity_pre) << " F_post=" << format_g17(b.fidelity_post)
           << (b.corrected ? " corrected" : "") << "\n";
    }
    return os.str();
}

std::string report_to_csv(const ProtocolReport& r) {
    std::string out = "outcome,probability,pre_correction_fidelity,post_correction_fidelity,corrected\n";
    for (const auto& b : r.branches) {
        out += outcome_string(b.outcome) + "," + format_g17(b.probability) + "," + format_g17(b.fidelity_pre) + "," +
               format_g17(b.fidelity_post) + "," + (b.corrected ? "1" : "0") + "\n";
    }
    return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "alpha,p_success,p_predicted,input_entropy_ebits,output_entropy_ebits\n";
    for (const auto& r : rows) {
        out += format_g17(r.alpha) + "," + format_g17(r.success_probability) + "," +
               format_g17(r.predicted_probability) + "," + format_g17(r.input_entropy_ebits) + "," +
               format_g17(r.output_entropy_ebits) + "\n";
    }
    return out;
}

std::string sweep_to_json(const std::vector<SweepRow>& rows) {
    ojson j = ojson::array();
    for (const auto& r : rows) {
        j.push_back({{"alpha", r.alpha},
                     {"p_success", r.success_probability},
                     {"p_predicted", r.predicted_probability},
                     {"input_entropy_ebits", r.input_entropy_ebits},
                     {"output_entropy_ebits", r.output_entropy_ebits}});
    }
    return j.dump(2) + "\n";
}

std::string sweep_to_text(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-12s %-22s %-22s %-12s %-12s\n", "alpha", "p_success", "p_predicted",
                  "S_in", "S_out");
    os << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-12.8f %-22.17g %-22.17g %-12.8f %-12.8f\n", r.alpha,
                      r.success_probability, r.predicted_probability, r.input_entropy_ebits,
                      r.output_entropy_ebits);
        os << buf;
    }
    return os.str();
}

std::string branches_to_json(const std::vector<Branch>& branches) {
    ojson j = ojson::array();
    for (const auto& b : branches) {
        j.push_back({{"outcome", outcome_json(b.outcome)},
                     {"probability", b.probability},
                     {"conditional_state", to_text(b.conditional)}});
    }
    return j.dump(2) + "\n";
}

}  // namespace linopt
