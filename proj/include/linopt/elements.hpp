// Linear-optical elements acting on sparse Fock states.
//
// Conventions:
//   HWP(theta): a+_H -> cos t a+_H + sin t a+_V,  a+_V -> sin t a+_H - cos t a+_V,
//     where theta is the polarization rotation the plate induces (90 swaps
//     H and V, 45 maps to the diagonal basis). At theta = 0 the plate
//     flips the sign of V.
//   PBS(in_a, in_b -> out_a, out_b): H is transmitted across
//     (in_a -> out_b, in_b -> out_a), V is reflected straight
//     (in_a -> out_a, in_b -> out_b). Both with phase +1.
//   PhaseShift(mode, pol, phi): multiplies a term by exp(i phi n), n the
//     occupation of (mode, pol).

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "linopt/fock.hpp"

namespace linopt {

struct Hwp {
    ModeId mode;
    double rotation_deg = 0.0;
    friend bool operator==(const Hwp&, const Hwp&) = default;
};

struct Pbs {
    ModeId in_a;
    ModeId in_b;
    ModeId out_a;
    ModeId out_b;
    friend bool operator==(const Pbs&, const Pbs&) = default;
};

struct PhaseShift {
    ModeId mode;
    Polarization pol = Polarization::H;
    double phase_rad = 0.0;
    friend bool operator==(const PhaseShift&, const PhaseShift&) = default;
};

using Element = std::variant<Hwp, Pbs, PhaseShift>;

struct Circuit {
    std::vector<ModeId> modes;
    std::vector<Element> elements;
    friend bool operator==(const Circuit&, const Circuit&) = default;
};

struct ApplyOptions {
    double drop_tolerance = kDefaultDropTolerance;
};

// cos/sin of an angle in degrees; exact at multiples of 45 degrees.
struct CosSin {
    double c;
    double s;
};
CosSin cos_sin_deg(double deg);

StateVector apply_hwp(const StateVector& s, const ModeId& mode, double rotation_deg,
                      const ApplyOptions& opt = {});

// Throws ModeCollision if an output label (other than a consumed input) is
// already occupied, InvalidCircuit for repeated labels.
StateVector apply_pbs(const StateVector& s, const ModeId& in_a, const ModeId& in_b,
                      const ModeId& out_a, const ModeId& out_b, const ApplyOptions& opt = {});

StateVector apply_phase_shift(const StateVector& s, const ModeId& mode, Polarization pol,
                              double phase_rad, const ApplyOptions& opt = {});

StateVector apply_element(const StateVector& s, const Element& e, const ApplyOptions& opt = {});

// Modes that are live after the whole circuit: declared modes, with each
// PBS replacing its inputs by its outputs.
std::vector<ModeId> live_modes_after(const Circuit& c);

// Throws InvalidCircuit when an element references an undeclared or
// consumed mode, a PBS repeats labels, or a PBS output collides with a live
// mode, or an angle/phase is not finite.
void validate(const Circuit& c);

StateVector apply_circuit(const StateVector& s, const Circuit& c, const ApplyOptions& opt = {});

// Circuit JSON:
//   {"modes": [...], "elements": [
//      {"kind":"hwp","mode":"3","rotation_deg":90},
//      {"kind":"pbs","in":["2","4"],"out":["2p","4p"]},
//      {"kind":"phase","mode":"1","pol":"V","phase_rad":3.14159...}]}
// Parse failures throw ParseError with the byte position or element index.
Circuit parse_circuit_json(std::string_view text);
std::string to_json(const Circuit& c);

std::string describe(const Element& e);

}  // namespace linopt
