#include "linopt/elements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "linopt/error.hpp"

namespace linopt {

namespace {

double factorial(unsigned n) {
    double f = 1.0;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

double binomial(unsigned n, unsigned k) {
    double b = 1.0;
    for (unsigned i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

double ipow(double x, unsigned n) {
    double r = 1.0;
    for (unsigned i = 0; i < n; ++i) r *= x;
    return r;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

CosSin cos_sin_deg(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0) r += 360.0;
    const double q = r / 45.0;
    if (q == std::floor(q)) {
        constexpr double h = std::numbers::sqrt2 / 2.0;
        static constexpr CosSin table[8] = {{1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h}};
        return table[static_cast<int>(q) % 8];
    }
    const double rad = r * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

StateVector apply_hwp(const StateVector& s, const ModeId& mode, double rotation_deg, const ApplyOptions& opt) {
    if (!std::isfinite(rotation_deg)) throw InvalidCircuit("HWP rotation must be finite");
    const auto [c, sn] = cos_sin_deg(rotation_deg);
    const Slot h{mode, Polarization::H};
    const Slot v{mode, Polarization::V};

    StateVector out;
    for (const auto& [term, amp] : s.terms()) {
        const unsigned nh = term.count(h);
        const unsigned nv = term.count(v);
        if (nh == 0 && nv == 0) {
            out.accumulate(term, amp);
            continue;
        }
        // (c a_H + s a_V)^nh (s a_H - c a_V)^nv, expanded binomially.
        const FockTerm rest = term.without_mode(mode);
        const double in_norm = std::sqrt(factorial(nh) * factorial(nv));
        for (unsigned j = 0; j <= nh; ++j) {
            const double from_h = binomial(nh, j) * ipow(c, j) * ipow(sn, nh - j);
            if (from_h == 0.0) continue;
            for (unsigned k = 0; k <= nv; ++k) {
                const double from_v = binomial(nv, k) * ipow(sn, k) * ipow(-c, nv - k);
                if (from_v == 0.0) continue;
                const unsigned p = j + k;
                const unsigned q = nh + nv - p;
                const double out_norm = std::sqrt(factorial(p) * factorial(q));
                out.accumulate(rest.with(h, p).with(v, q), amp * (from_h * from_v * out_norm / in_norm));
            }
        }
    }
    return prune(out, opt.drop_tolerance);
}

StateVector apply_pbs(const StateVector& s, const ModeId& in_a, const ModeId& in_b, const ModeId& out_a,
                      const ModeId& out_b, const ApplyOptions& opt) {
    if (in_a == in_b) throw InvalidCircuit("PBS inputs must be distinct");
    if (out_a == out_b) throw InvalidCircuit("PBS outputs must be distinct");
    auto consumed = [&](const ModeId& m) { return m == in_a || m == in_b; };

    StateVector out;
    for (const auto& [term, amp] : s.terms()) {
        for (const ModeId* o : {&out_a, &out_b}) {
            if (!consumed(*o) && term.mode_count(*o) != 0) {
                throw ModeCollision("PBS output mode '" + o->label() + "' is already occupied");
            }
        }
        FockTerm moved = term.without_mode(in_a).without_mode(in_b);
        auto place = [&](const Slot& from, const Slot& to) {
            if (unsigned n = term.count(from)) moved = moved.with(to, moved.count(to) + n);
        };
        place({in_a, Polarization::H}, {out_b, Polarization::H});
        place({in_b, Polarization::H}, {out_a, Polarization::H});
        place({in_a, Polarization::V}, {out_a, Polarization::V});
        place({in_b, Polarization::V}, {out_b, Polarization::V});
        out.accumulate(moved, amp);
    }
    return prune(out, opt.drop_tolerance);
}

StateVector apply_phase_shift(const StateVector& s, const ModeId& mode, Polarization pol, double phase_rad,
                              const ApplyOptions& opt) {
    if (!std::isfinite(phase_rad)) throw InvalidCircuit("phase must be finite");
    const Slot slot{mode, pol};
    StateVector out;
    for (const auto& [term, amp] : s.terms()) {
        const unsigned n = term.count(slot);
        out.accumulate(term, n == 0 ? amp : amp * std::polar(1.0, phase_rad * n));
    }
    return prune(out, opt.drop_tolerance);
}

StateVector apply_element(const StateVector& s, const Element& e, const ApplyOptions& opt) {
    return std::visit(overloaded{
                          [&](const Hwp& h) { return apply_hwp(s, h.mode, h.rotation_deg, opt); },
                          [&](const Pbs& p) { return apply_pbs(s, p.in_a, p.in_b, p.out_a, p.out_b, opt); },
                          [&](const PhaseShift& p) { return apply_phase_shift(s, p.mode, p.pol, p.phase_rad, opt); },
                      },
                      e);
}

namespace {

// Walks the circuit, checking each element against the live mode set.
std::vector<ModeId> walk_live_modes(const Circuit& c) {
    std::vector<ModeId> live;
    for (const auto& m : c.modes) {
        if (std::find(live.begin(), live.end(), m) != live.end()) {
            throw InvalidCircuit("mode '" + m.label() + "' declared twice");
        }
        live.push_back(m);
    }
    auto is_live = [&](const ModeId& m) { return std::find(live.begin(), live.end(), m) != live.end(); };

    for (std::size_t i = 0; i < c.elements.size(); ++i) {
        const std::string where = "element " + std::to_string(i) + " (" + describe(c.elements[i]) + ")";
        std::visit(overloaded{
                       [&](const Hwp& h) {
                           if (!is_live(h.mode)) throw InvalidCircuit(where + ": mode not live");
                           if (!std::isfinite(h.rotation_deg)) throw InvalidCircuit(where + ": rotation not finite");
                       },
                       [&](const PhaseShift& p) {
                           if (!is_live(p.mode)) throw InvalidCircuit(where + ": mode not live");
                           if (!std::isfinite(p.phase_rad)) throw InvalidCircuit(where + ": phase not finite");
                       },
                       [&](const Pbs& p) {
                           if (p.in_a == p.in_b) throw InvalidCircuit(where + ": inputs must be distinct");
                           if (p.out_a == p.out_b) throw InvalidCircuit(where + ": outputs must be distinct");
                           if (!is_live(p.in_a) || !is_live(p.in_b)) throw InvalidCircuit(where + ": input not live");
                           std::erase(live, p.in_a);
                           std::erase(live, p.in_b);
                           if (is_live(p.out_a) || is_live(p.out_b)) {
                               throw InvalidCircuit(where + ": output collides with a live mode");
                           }
                           live.push_back(p.out_a);
                           live.push_back(p.out_b);
                       },
                   },
                   c.elements[i]);
    }
    return live;
}

}  // namespace

std::vector<ModeId> live_modes_after(const Circuit& c) {
    auto live = walk_live_modes(c);
    std::sort(live.begin(), live.end());
    return live;
}

void validate(const Circuit& c) { walk_live_modes(c); }

StateVector apply_circuit(const StateVector& s, const Circuit& c, const ApplyOptions& opt) {
    validate(c);
    StateVector cur = s;
    for (const auto& e : c.elements) cur = apply_element(cur, e, opt);
    return cur;
}

std::string describe(const Element& e) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Hwp& h) { os << "hwp " << h.mode.label() << " " << h.rotation_deg << "deg"; },
                   [&](const Pbs& p) {
                       os << "pbs " << p.in_a.label() << "," << p.in_b.label() << "->" << p.out_a.label() << ","
                          << p.out_b.label();
                   },
                   [&](const PhaseShift& p) {
                       os << "phase " << p.mode.label() << ":" << to_char(p.pol) << " " << p.phase_rad << "rad";
                   },
               },
               e);
    return os.str();
}

}  // namespace linopt
