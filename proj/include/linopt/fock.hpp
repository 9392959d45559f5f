// Sparse multi-photon polarization Fock states.
//
// A state is a superposition of occupation-number kets over (spatial mode,
// polarization) slots. Kets are orthonormal number states, so the inner
// product is a plain sparse dot product; all bosonic sqrt(n!) factors are
// produced by the operations that build or transform states.

#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace linopt {

using Amplitude = std::complex<double>;

inline constexpr double kDefaultDropTolerance = 1e-12;

// Label of a spatial mode ("1", "2p", ...). Compared as an exact string.
class ModeId {
public:
    ModeId() = default;
    ModeId(std::string label);
    ModeId(const char* label) : ModeId(std::string(label)) {}

    const std::string& label() const noexcept { return label_; }

    friend bool operator==(const ModeId&, const ModeId&) = default;
    friend std::strong_ordering operator<=>(const ModeId& a, const ModeId& b) {
        return a.label_.compare(b.label_) <=> 0;
    }

private:
    std::string label_;
};

enum class Polarization : unsigned char { H = 0, V = 1 };

char to_char(Polarization p) noexcept;
Polarization polarization_from_char(char c);

struct Slot {
    ModeId mode;
    Polarization pol = Polarization::H;

    friend bool operator==(const Slot&, const Slot&) = default;
    friend auto operator<=>(const Slot&, const Slot&) = default;
};

// One occupation-number basis ket. Zero counts are never stored, so two
// terms compare equal iff they describe the same ket.
class FockTerm {
public:
    using Occupations = std::map<Slot, unsigned>;

    FockTerm() = default;
    explicit FockTerm(const Occupations& occ);
    FockTerm(std::initializer_list<std::pair<const Slot, unsigned>> occ);

    const Occupations& occupations() const noexcept { return occ_; }
    unsigned count(const Slot& s) const;
    unsigned count(const ModeId& mode, Polarization pol) const { return count(Slot{mode, pol}); }
    // Photons in `mode` summed over polarization.
    unsigned mode_count(const ModeId& mode) const;
    std::vector<ModeId> modes() const;
    bool empty() const noexcept { return occ_.empty(); }

    FockTerm with(const Slot& s, unsigned n) const;
    FockTerm without_mode(const ModeId& mode) const;

    friend bool operator==(const FockTerm&, const FockTerm&) = default;
    friend auto operator<=>(const FockTerm& a, const FockTerm& b) { return a.occ_ <=> b.occ_; }

private:
    Occupations occ_;
};

unsigned total_photons(const FockTerm& t);

class StateVector {
public:
    using Terms = std::map<FockTerm, Amplitude>;

    StateVector() = default;
    explicit StateVector(Terms terms) : terms_(std::move(terms)) {}

    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    Amplitude amplitude(const FockTerm& t) const;

    // Adds `amp` to the coefficient of `t`. Used by builders; finished states
    // are treated as immutable values.
    void accumulate(const FockTerm& t, Amplitude amp);

    // Modes holding at least one photon in some term, canonical order.
    std::vector<ModeId> occupied_modes() const;

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    Terms terms_;
};

StateVector single_photon(const ModeId& mode, Polarization pol);
StateVector vacuum();

// Removes terms whose |amplitude| falls below `tolerance`.
StateVector prune(const StateVector& s, double tolerance = kDefaultDropTolerance);

// Product state. Photons sharing a slot combine with the bosonic factor
// sqrt((na+nb)! / (na! nb!)).
StateVector tensor(const StateVector& a, const StateVector& b);

// <a|b>, conjugate-linear in `a`.
Amplitude inner_product(const StateVector& a, const StateVector& b);
double norm_squared(const StateVector& s);

struct Normalized {
    StateVector state;
    double norm = 0.0;
};

// Throws ZeroState when <s|s> < 1e-24.
Normalized normalize(const StateVector& s);

StateVector scale(const StateVector& s, Amplitude factor);
StateVector add(const StateVector& a, const StateVector& b);

// True when every term carries the same total photon number.
bool is_photon_number_homogeneous(const StateVector& s);

// Canonical text form: one line per term,
//   <re> <im> | <mode>:<pol>:<count> ...
// with shortest round-trip decimal amplitudes. Parsing skips blank lines and
// lines starting with '#'.
std::string to_text(const StateVector& s);
StateVector parse_state_text(std::string_view text);

}  // namespace linopt
