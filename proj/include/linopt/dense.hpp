// Dense-matrix oracle for the sparse element implementations.
//
// Element matrices are built from each element's single-particle transfer
// matrix u via the bosonic permanent rule
//   <m| U |n> = per(u[m, n]) / sqrt(prod n_k! prod m_k!),
// which shares no code with the creation-operator rewriting in elements.cpp.
// The PBS is expressed in the relabelled frame (outputs renamed back to
// their inputs) so that every element matrix is square over one basis.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "linopt/elements.hpp"
#include "linopt/fock.hpp"
#include "linopt/simd/kernels.hpp"

namespace linopt::dense {

// Column-major split-complex matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Amplitude at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, Amplitude v);

    const double* col_re(std::size_t c) const { return re_.data() + c * rows_; }
    const double* col_im(std::size_t c) const { return im_.data() + c * rows_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> re_;
    std::vector<double> im_;
};

struct SplitVector {
    std::vector<double> re;
    std::vector<double> im;

    explicit SplitVector(std::size_t n = 0) : re(n, 0.0), im(n, 0.0) {}
    std::size_t size() const noexcept { return re.size(); }
    Amplitude at(std::size_t k) const { return {re[k], im[k]}; }
};

// Every ket with exactly `photons` photons over modes x {H, V}, canonical order.
std::vector<FockTerm> enumerate_basis(std::span<const ModeId> modes, unsigned photons);

// Ryser's formula. Intended for the small matrices of the permanent rule.
Amplitude permanent(const std::vector<std::vector<Amplitude>>& a);

struct LocalTransfer {
    std::vector<Slot> slots;                   // slots the element acts on
    std::vector<std::vector<Amplitude>> u;     // u[out][in] over `slots`
};

// Single-particle transfer matrix of an element, PBS in the relabelled frame.
LocalTransfer local_transfer(const Element& e);

// M[j][i] = <basis_j| e |basis_i>. Throws BasisNotClosed if an image term
// with non-negligible amplitude lies outside the basis.
Matrix element_matrix(const Element& e, std::span<const FockTerm> basis);

// Renames the PBS inputs to its outputs in every basis ket.
std::vector<FockTerm> relabel_through(const Pbs& p, std::span<const FockTerm> basis);

SplitVector to_dense(const StateVector& s, std::span<const FockTerm> basis);
StateVector from_dense(const SplitVector& v, std::span<const FockTerm> basis);

SplitVector matvec(const Matrix& m, const SplitVector& x, const simd::KernelTable& k = simd::active());

// max_ij |(M^dagger M - I)_ij|
double unitarity_residual(const Matrix& m, const simd::KernelTable& k = simd::active());

// Applies the circuit by dense matrix products over the full basis of
// every photon number present in `s`, spanning the circuit's declared modes.
StateVector apply_circuit(const StateVector& s, const Circuit& c, const simd::KernelTable& k = simd::active());

}  // namespace linopt::dense
