#include "linopt/fock.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "linopt/error.hpp"

namespace linopt {

namespace {

constexpr double kZeroNormSquared = 1e-24;

bool valid_label_char(char c) {
    return c != ':' && c != '|' && c != '#' && c != '"' && !std::isspace(static_cast<unsigned char>(c));
}

double factorial(unsigned n) {
    double f = 1.0;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

void append_double(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

double parse_double(std::string_view tok, std::size_t line) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line) + ": bad amplitude '" + std::string(tok) + "'");
    }
    return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

ModeId::ModeId(std::string label) : label_(std::move(label)) {
    if (label_.empty() || !std::all_of(label_.begin(), label_.end(), valid_label_char)) {
        throw ParseError("invalid mode label '" + label_ + "'");
    }
}

char to_char(Polarization p) noexcept { return p == Polarization::H ? 'H' : 'V'; }

Polarization polarization_from_char(char c) {
    switch (c) {
        case 'H': return Polarization::H;
        case 'V': return Polarization::V;
        default: throw ParseError(std::string("unknown polarization '") + c + "'");
    }
}

FockTerm::FockTerm(const Occupations& occ) {
    for (const auto& [slot, n] : occ) {
        if (n != 0) occ_.emplace(slot, n);
    }
}

FockTerm::FockTerm(std::initializer_list<std::pair<const Slot, unsigned>> occ)
    : FockTerm(Occupations(occ)) {}

unsigned FockTerm::count(const Slot& s) const {
    auto it = occ_.find(s);
    return it == occ_.end() ? 0u : it->second;
}

unsigned FockTerm::mode_count(const ModeId& mode) const {
    return count(Slot{mode, Polarization::H}) + count(Slot{mode, Polarization::V});
}

std::vector<ModeId> FockTerm::modes() const {
    std::vector<ModeId> out;
    for (const auto& [slot, n] : occ_) {
        if (out.empty() || out.back() != slot.mode) out.push_back(slot.mode);
    }
    return out;
}

FockTerm FockTerm::with(const Slot& s, unsigned n) const {
    FockTerm t = *this;
    if (n == 0) {
        t.occ_.erase(s);
    } else {
        t.occ_[s] = n;
    }
    return t;
}

FockTerm FockTerm::without_mode(const ModeId& mode) const {
    FockTerm t = *this;
    t.occ_.erase(Slot{mode, Polarization::H});
    t.occ_.erase(Slot{mode, Polarization::V});
    return t;
}

unsigned total_photons(const FockTerm& t) {
    unsigned n = 0;
    for (const auto& [slot, c] : t.occupations()) n += c;
    return n;
}

Amplitude StateVector::amplitude(const FockTerm& t) const {
    auto it = terms_.find(t);
    return it == terms_.end() ? Amplitude{} : it->second;
}

void StateVector::accumulate(const FockTerm& t, Amplitude amp) {
    if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) {
        throw InvariantViolation("non-finite amplitude");
    }
    auto [it, inserted] = terms_.try_emplace(t, amp);
    if (!inserted) it->second += amp;
}

std::vector<ModeId> StateVector::occupied_modes() const {
    std::set<ModeId> modes;
    for (const auto& [term, amp] : terms_) {
        for (const auto& [slot, n] : term.occupations()) modes.insert(slot.mode);
    }
    return {modes.begin(), modes.end()};
}

StateVector single_photon(const ModeId& mode, Polarization pol) {
    StateVector s;
    s.accumulate(FockTerm{{Slot{mode, pol}, 1u}}, Amplitude{1.0, 0.0});
    return s;
}

StateVector vacuum() {
    StateVector s;
    s.accumulate(FockTerm{}, Amplitude{1.0, 0.0});
    return s;
}

StateVector prune(const StateVector& s, double tolerance) {
    StateVector::Terms kept;
    for (const auto& [term, amp] : s.terms()) {
        if (std::abs(amp) >= tolerance) kept.emplace_hint(kept.end(), term, amp);
    }
    return StateVector(std::move(kept));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    StateVector out;
    for (const auto& [ta, aa] : a.terms()) {
        for (const auto& [tb, ab] : b.terms()) {
            FockTerm::Occupations occ = ta.occupations();
            double bosonic = 1.0;
            for (const auto& [slot, nb] : tb.occupations()) {
                unsigned& n = occ[slot];
                if (n != 0) {
                    bosonic *= std::sqrt(factorial(n + nb) / (factorial(n) * factorial(nb)));
                }
                n += nb;
            }
            out.accumulate(FockTerm(occ), aa * ab * bosonic);
        }
    }
    return out;
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
    Amplitude sum{};
    for (const auto& [term, amp] : a.terms()) {
        auto it = b.terms().find(term);
        if (it != b.terms().end()) sum += std::conj(amp) * it->second;
    }
    return sum;
}

double norm_squared(const StateVector& s) {
    double sum = 0.0;
    for (const auto& [term, amp] : s.terms()) sum += std::norm(amp);
    return sum;
}

Normalized normalize(const StateVector& s) {
    const double n2 = norm_squared(s);
    if (n2 < kZeroNormSquared) throw ZeroState("cannot normalize a zero state");
    const double norm = std::sqrt(n2);
    return {scale(s, Amplitude{1.0 / norm, 0.0}), norm};
}

StateVector scale(const StateVector& s, Amplitude factor) {
    StateVector::Terms out;
    for (const auto& [term, amp] : s.terms()) out.emplace_hint(out.end(), term, amp * factor);
    return StateVector(std::move(out));
}

StateVector add(const StateVector& a, const StateVector& b) {
    StateVector out = a;
    for (const auto& [term, amp] : b.terms()) out.accumulate(term, amp);
    return out;
}

bool is_photon_number_homogeneous(const StateVector& s) {
    if (s.empty()) return true;
    const unsigned n = total_photons(s.terms().begin()->first);
    return std::all_of(s.terms().begin(), s.terms().end(),
                       [n](const auto& kv) { return total_photons(kv.first) == n; });
}

std::string to_text(const StateVector& s) {
    std::string out;
    for (const auto& [term, amp] : s.terms()) {
        append_double(out, amp.real());
        out += ' ';
        append_double(out, amp.imag());
        out += " |";
        for (const auto& [slot, n] : term.occupations()) {
            out += ' ';
            out += slot.mode.label();
            out += ':';
            out += to_char(slot.pol);
            out += ':';
            out += std::to_string(n);
        }
        out += '\n';
    }
    return out;
}

StateVector parse_state_text(std::string_view text) {
    StateVector s;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        auto toks = split_ws(line);
        if (toks.empty() || toks.front().front() == '#') continue;
        const std::string where = "line " + std::to_string(line_no);
        if (toks.size() < 3 || toks[2] != "|") {
            throw ParseError(where + ": expected '<re> <im> | <mode>:<pol>:<count> ...'");
        }
        const Amplitude amp{parse_double(toks[0], line_no), parse_double(toks[1], line_no)};
        FockTerm::Occupations occ;
        for (std::size_t i = 3; i < toks.size(); ++i) {
            std::string_view tok = toks[i];
            const auto c2 = tok.rfind(':');
            const auto c1 = c2 == std::string_view::npos ? c2 : tok.rfind(':', c2 - 1);
            if (c1 == std::string_view::npos || c1 == 0 || c2 - c1 != 2) {
                throw ParseError(where + ": bad slot '" + std::string(tok) + "'");
            }
            unsigned n = 0;
            auto cnt = tok.substr(c2 + 1);
            auto res = std::from_chars(cnt.data(), cnt.data() + cnt.size(), n);
            if (res.ec != std::errc{} || res.ptr != cnt.data() + cnt.size() || n == 0) {
                throw ParseError(where + ": bad photon count in '" + std::string(tok) + "'");
            }
            Slot slot{ModeId(std::string(tok.substr(0, c1))), polarization_from_char(tok[c1 + 1])};
            if (!occ.emplace(slot, n).second) {
                throw ParseError(where + ": slot repeated in '" + std::string(tok) + "'");
            }
        }
        FockTerm term(occ);
        if (s.terms().count(term)) throw ParseError(where + ": duplicate term");
        s.accumulate(term, amp);
    }
    return s;
}

}  // namespace linopt
