#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "linopt/dense.hpp"
#include "linopt/elements.hpp"
#include "linopt/error.hpp"
#include "linopt/measurement.hpp"
#include "linopt/protocols.hpp"
#include "linopt/report.hpp"

namespace linopt::cli {

namespace {

// Usage errors detected after CLI11 parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string format;
    std::string output_path;
    std::optional<std::uint64_t> seed;

    double alpha = 0.0;
    std::optional<double> beta;
    int parties = 2;
    bool no_correction = false;
    std::string scenario_path;

    double start = 0.0;
    double stop = 1.0;
    int steps = 101;

    std::string circuit_path;
    std::string state_path;
    std::optional<unsigned> random_photons;
    std::string pattern;
    std::string measure;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

// "1=1,2p=1,3=1"
DetectionPattern parse_pattern(const std::string& text) {
    DetectionPattern p;
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
            throw ParseError("pattern entry '" + item + "' is not MODE=COUNT");
        }
        unsigned n = 0;
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
            n = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw ParseError("pattern entry '" + item + "' has a bad count");
        }
        if (!p.required_counts.emplace(ModeId(item.substr(0, eq)), n).second) {
            throw ParseError("pattern lists mode '" + item.substr(0, eq) + "' twice");
        }
    }
    if (p.required_counts.empty()) throw ParseError("empty detection pattern");
    return p;
}

std::string default_format(const std::string& command) {
    if (const char* env = std::getenv("LINOPT_FORMAT")) {
        const std::string f = env;
        if (f == "json" || f == "csv" || f == "text") return f;
    }
    return command == "sweep" ? "csv" : "text";
}

StateVector random_state(const std::vector<ModeId>& modes, unsigned photons, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVector s;
    for (const auto& t : dense::enumerate_basis(modes, photons)) s.accumulate(t, {gauss(rng), gauss(rng)});
    return normalize(s).state;
}

std::string cmd_concentrate(const Options& o, const std::string& format) {
    if (!(o.alpha >= 0.0 && o.alpha <= 1.0)) throw UsageError("alpha out of range");
    const double beta = o.beta ? *o.beta : std::sqrt(std::max(0.0, 1.0 - o.alpha * o.alpha));
    if (!std::isfinite(beta)) throw UsageError("beta must be finite");
    const ProtocolConfig cfg = make_config({o.alpha, 0.0}, {beta, 0.0}, o.parties, !o.no_correction);
    const ProtocolReport rep =
        o.scenario_path.empty() ? run(cfg) : run(cfg, parse_circuit_json(read_file(o.scenario_path)));
    if (format == "json") return report_to_json(rep);
    if (format == "csv") return report_to_csv(rep);
    return report_to_text(rep);
}

std::string cmd_sweep(const Options& o, const std::string& format) {
    if (!(o.start >= 0.0 && o.start <= o.stop && o.stop <= 1.0)) {
        throw UsageError("sweep range must satisfy 0 <= start <= stop <= 1");
    }
    if (o.steps < 2) throw UsageError("steps must be at least 2");
    std::vector<double> alphas;
    for (int k = 0; k < o.steps; ++k) {
        alphas.push_back(k + 1 == o.steps ? o.stop : o.start + (o.stop - o.start) * k / (o.steps - 1));
    }
    const auto rows = sweep(alphas, o.parties);
    if (format == "json") return sweep_to_json(rows);
    if (format == "text") return sweep_to_text(rows);
    return sweep_to_csv(rows);
}

std::string cmd_simulate(const Options& o, const std::string& format) {
    const Circuit circuit = parse_circuit_json(read_file(o.circuit_path));
    StateVector input;
    if (!o.state_path.empty()) {
        input = parse_state_text(read_file(o.state_path));
    } else if (o.random_photons) {
        input = random_state(circuit.modes, *o.random_photons, o.seed.value_or(0));
    } else {
        throw UsageError("simulate needs --state or --random-photons");
    }

    const StateVector out = apply_circuit(input, circuit);
    std::optional<PostSelection> ps;
    if (!o.pattern.empty()) ps = post_select_counts(out, parse_pattern(o.pattern));

    std::optional<std::vector<Branch>> branches;
    if (!o.measure.empty()) {
        std::vector<ModeId> modes;
        for (const auto& m : split(o.measure, ',')) modes.emplace_back(m);
        if (!ps) {
            branches = coincidence_branches(out, modes);
        } else if (ps->valid) {
            branches = coincidence_branches(ps->conditional, modes);
        } else {
            branches.emplace();
        }
    }

    if (format == "json") {
        nlohmann::ordered_json j;
        j["state"] = to_text(out);
        if (ps) {
            j["post_selection"] = {{"probability", ps->probability},
                                   {"valid", ps->valid},
                                   {"conditional_state", to_text(ps->conditional)}};
        }
        if (branches) j["branches"] = nlohmann::ordered_json::parse(branches_to_json(*branches));
        return j.dump(2) + "\n";
    }
    if (format == "csv") throw UsageError("simulate supports --format text or json");

    std::string text = to_text(out);
    if (ps) {
        text += "# post-selection probability " + format_g17(ps->probability) + "\n";
        text += "# conditional state\n";
        std::istringstream lines(to_text(ps->conditional));
        for (std::string line; std::getline(lines, line);) text += "# " + line + "\n";
    }
    if (branches) {
        std::istringstream lines(branches_to_json(*branches));
        text += "# branches\n";
        for (std::string line; std::getline(lines, line);) text += "# " + line + "\n";
    }
    return text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Exact simulator of polarization-encoded linear-optical entanglement concentration", "linopt"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.add_option("--format", o.format, "Output format (json, csv, text); default from LINOPT_FORMAT")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--output", o.output_path, "Write output to this file instead of stdout");
    app.add_option("--seed", o.seed, "Seed for randomized demo states");

    auto* conc = app.add_subcommand("concentrate", "Run the concentration protocol once");
    conc->add_option("--alpha", o.alpha, "Amplitude of |H...H> in each input copy")->required();
    conc->add_option("--beta", o.beta, "Amplitude of |V...V>; default sqrt(1 - alpha^2)");
    conc->add_option("--parties", o.parties, "2 (Bell pair) or 3 (GHZ triple)")->check(CLI::IsMember({2, 3}));
    conc->add_flag("--no-correction", o.no_correction, "Skip the conditional pi phase correction");
    conc->add_option("--scenario", o.scenario_path, "Circuit JSON with an alternate wiring");

    auto* sw = app.add_subcommand("sweep", "Success probability and entropies over a range of alpha");
    sw->add_option("--start", o.start, "First alpha")->required();
    sw->add_option("--stop", o.stop, "Last alpha")->required();
    sw->add_option("--steps", o.steps, "Number of alpha values")->required();
    sw->add_option("--parties", o.parties, "2 or 3")->check(CLI::IsMember({2, 3}));

    auto* sim = app.add_subcommand("simulate", "Apply a circuit file to a state file");
    sim->add_option("--circuit", o.circuit_path, "Circuit JSON")->required();
    sim->add_option("--state", o.state_path, "Input state in canonical text form");
    sim->add_option("--random-photons", o.random_photons, "Use a random normalized input with this many photons");
    sim->add_option("--pattern", o.pattern, "Post-selection pattern MODE=COUNT[,MODE=COUNT...]");
    sim->add_option("--measure", o.measure, "Comma-separated modes to measure in H/V after post-selection");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const std::string format = o.format.empty() ? default_format(command) : o.format;

    std::string result;
    try {
        if (command == "concentrate") {
            result = cmd_concentrate(o, format);
        } else if (command == "sweep") {
            result = cmd_sweep(o, format);
        } else {
            result = cmd_simulate(o, format);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvariantViolation& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }

    if (o.output_path.empty()) {
        out << result;
    } else {
        std::ofstream f(o.output_path, std::ios::binary);
        if (!f || !(f << result)) {
            err << "error: cannot write '" << o.output_path << "'\n";
            return kExitUsage;
        }
    }
    return kExitOk;
}

}  // namespace linopt::cli
