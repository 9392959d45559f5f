#include "linopt/dense.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "linopt/error.hpp"

namespace linopt::dense {

namespace {

constexpr double kClosureTolerance = 1e-14;

double factorial(unsigned n) {
    double f = 1.0;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

// All ways to place `photons` into `bins` bins.
void distributions(unsigned photons, std::size_t bins, std::vector<unsigned>& cur,
                   std::vector<std::vector<unsigned>>& out) {
    if (cur.size() + 1 == bins) {
        cur.push_back(photons);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (unsigned n = photons + 1; n-- > 0;) {
        cur.push_back(n);
        distributions(photons - n, bins, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<unsigned>> distributions(unsigned photons, std::size_t bins) {
    std::vector<std::vector<unsigned>> out;
    if (bins == 0) {
        if (photons == 0) out.emplace_back();
        return out;
    }
    std::vector<unsigned> cur;
    distributions(photons, bins, cur, out);
    return out;
}

// Row/column index lists with each slot repeated by its occupation.
std::vector<std::size_t> expand(const std::vector<unsigned>& occ) {
    std::vector<std::size_t> idx;
    for (std::size_t s = 0; s < occ.size(); ++s) idx.insert(idx.end(), occ[s], s);
    return idx;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), re_(rows * cols, 0.0), im_(rows * cols, 0.0) {}

Amplitude Matrix::at(std::size_t r, std::size_t c) const { return {re_[c * rows_ + r], im_[c * rows_ + r]}; }

void Matrix::set(std::size_t r, std::size_t c, Amplitude v) {
    re_[c * rows_ + r] = v.real();
    im_[c * rows_ + r] = v.imag();
}

std::vector<FockTerm> enumerate_basis(std::span<const ModeId> modes, unsigned photons) {
    std::vector<Slot> slots;
    for (const auto& m : modes) {
        slots.push_back({m, Polarization::H});
        slots.push_back({m, Polarization::V});
    }
    std::vector<FockTerm> basis;
    for (const auto& d : distributions(photons, slots.size())) {
        FockTerm::Occupations occ;
        for (std::size_t s = 0; s < slots.size(); ++s) occ[slots[s]] = d[s];
        basis.emplace_back(occ);
    }
    std::sort(basis.begin(), basis.end());
    return basis;
}

Amplitude permanent(const std::vector<std::vector<Amplitude>>& a) {
    const std::size_t n = a.size();
    if (n == 0) return {1.0, 0.0};
    Amplitude total{};
    for (std::size_t subset = 1; subset < (std::size_t{1} << n); ++subset) {
        Amplitude prod{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            Amplitude row{};
            for (std::size_t j = 0; j < n; ++j) {
                if (subset & (std::size_t{1} << j)) row += a[i][j];
            }
            prod *= row;
        }
        const int bits = __builtin_popcountll(subset);
        total += ((n - bits) % 2 == 0) ? prod : -prod;
    }
    return total;
}

LocalTransfer local_transfer(const Element& e) {
    LocalTransfer t;
    if (const auto* h = std::get_if<Hwp>(&e)) {
        const auto [c, s] = cos_sin_deg(h->rotation_deg);
        t.slots = {{h->mode, Polarization::H}, {h->mode, Polarization::V}};
        // Jones matrix [[c, s], [s, -c]], u[out][in].
        t.u = {{{c, 0}, {s, 0}}, {{s, 0}, {-c, 0}}};
    } else if (const auto* p = std::get_if<Pbs>(&e)) {
        // Relabelled frame: H swaps between the two ports, V stays put.
        t.slots = {{p->in_a, Polarization::H}, {p->in_b, Polarization::H}};
        t.u = {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}};
    } else if (const auto* ph = std::get_if<PhaseShift>(&e)) {
        t.slots = {{ph->mode, ph->pol}};
        t.u = {{std::polar(1.0, ph->phase_rad)}};
    }
    return t;
}

Matrix element_matrix(const Element& e, std::span<const FockTerm> basis) {
    const LocalTransfer lt = local_transfer(e);
    std::map<FockTerm, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);

    Matrix m(basis.size(), basis.size());
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const FockTerm& in = basis[col];
        std::vector<unsigned> in_occ;
        FockTerm rest = in;
        unsigned local = 0;
        for (const auto& s : lt.slots) {
            in_occ.push_back(in.count(s));
            local += in_occ.back();
            rest = rest.with(s, 0);
        }
        const auto cols = expand(in_occ);
        double in_fact = 1.0;
        for (unsigned n : in_occ) in_fact *= factorial(n);

        for (const auto& out_occ : distributions(local, lt.slots.size())) {
            const auto rows = expand(out_occ);
            std::vector<std::vector<Amplitude>> sub(rows.size(), std::vector<Amplitude>(cols.size()));
            for (std::size_t r = 0; r < rows.size(); ++r) {
                for (std::size_t c = 0; c < cols.size(); ++c) sub[r][c] = lt.u[rows[r]][cols[c]];
            }
            double out_fact = 1.0;
            for (unsigned n : out_occ) out_fact *= factorial(n);
            const Amplitude amp = permanent(sub) / std::sqrt(in_fact * out_fact);

            FockTerm image = rest;
            for (std::size_t s = 0; s < lt.slots.size(); ++s) image = image.with(lt.slots[s], out_occ[s]);
            auto it = index.find(image);
            if (it == index.end()) {
                if (std::abs(amp) > kClosureTolerance) {
                    throw BasisNotClosed("element " + describe(e) + " maps a basis ket outside the basis");
                }
                continue;
            }
            m.set(it->second, col, amp);
        }
    }
    return m;
}

std::vector<FockTerm> relabel_through(const Pbs& p, std::span<const FockTerm> basis) {
    std::vector<FockTerm> out;
    out.reserve(basis.size());
    for (const auto& t : basis) {
        FockTerm::Occupations occ;
        for (const auto& [slot, n] : t.occupations()) {
            Slot s = slot;
            if (s.mode == p.in_a) {
                s.mode = p.out_a;
            } else if (s.mode == p.in_b) {
                s.mode = p.out_b;
            }
            occ[s] += n;
        }
        out.emplace_back(occ);
    }
    return out;
}

SplitVector to_dense(const StateVector& s, std::span<const FockTerm> basis) {
    std::map<FockTerm, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
    SplitVector v(basis.size());
    for (const auto& [term, amp] : s.terms()) {
        auto it = index.find(term);
        if (it == index.end()) throw BasisNotClosed("state term lies outside the dense basis");
        v.re[it->second] = amp.real();
        v.im[it->second] = amp.imag();
    }
    return v;
}

StateVector from_dense(const SplitVector& v, std::span<const FockTerm> basis) {
    StateVector s;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (v.re[i] != 0.0 || v.im[i] != 0.0) s.accumulate(basis[i], v.at(i));
    }
    return s;
}

SplitVector matvec(const Matrix& m, const SplitVector& x, const simd::KernelTable& k) {
    SplitVector y(m.rows());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (x.re[c] == 0.0 && x.im[c] == 0.0) continue;
        k.caxpy({x.re[c], x.im[c]}, m.col_re(c), m.col_im(c), y.re.data(), y.im.data(), m.rows());
    }
    return y;
}

double unitarity_residual(const Matrix& m, const simd::KernelTable& k) {
    // Blocked over column groups so a group stays cache resident while the
    // remaining columns stream past it once.
    constexpr std::size_t kBlock = 32;
    const std::size_t n = m.cols();
    double worst = 0.0;
    for (std::size_t ib = 0; ib < n; ib += kBlock) {
        const std::size_t ie = std::min(ib + kBlock, n);
        for (std::size_t j = ib; j < n; ++j) {
            for (std::size_t i = ib; i < ie && i <= j; ++i) {
                simd::Cplx d = k.cdot(m.col_re(i), m.col_im(i), m.col_re(j), m.col_im(j), m.rows());
                if (i == j) d.re -= 1.0;
                worst = std::max(worst, std::hypot(d.re, d.im));
            }
        }
    }
    return worst;
}

StateVector apply_circuit(const StateVector& s, const Circuit& c, const simd::KernelTable& k) {
    validate(c);
    for (const auto& m : s.occupied_modes()) {
        if (std::find(c.modes.begin(), c.modes.end(), m) == c.modes.end()) {
            throw InvalidCircuit("state occupies undeclared mode '" + m.label() + "'");
        }
    }
    std::set<unsigned> photon_numbers;
    for (const auto& [term, amp] : s.terms()) photon_numbers.insert(total_photons(term));

    std::vector<FockTerm> basis;
    for (unsigned n : photon_numbers) {
        auto b = enumerate_basis(c.modes, n);
        basis.insert(basis.end(), b.begin(), b.end());
    }
    SplitVector v = to_dense(s, basis);
    for (const auto& e : c.elements) {
        v = matvec(element_matrix(e, basis), v, k);
        if (const auto* p = std::get_if<Pbs>(&e)) basis = relabel_through(*p, basis);
    }
    return from_dense(v, basis);
}

}  // namespace linopt::dense
