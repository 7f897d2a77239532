// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Fock-basis states of n fermionic modes and ladder-operator algebra.
 *
 * Basis states are occupation bitmasks with mode 1 in the least significant
 * bit. A basis ket with occupied modes m1 < m2 < ... < mi is the canonically
 * ordered product b†_{m1} b†_{m2} ... b†_{mi} |0>. Dense vectors and matrices
 * over the Fock space are indexed by the mask value.
 *
 * Mode indices are 1-based at every public entry point.
 */

#pragma once

#include <Eigen/Dense>

#include <bit>
#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace fermiqi {

using Complex = std::complex<double>;
using Mask = std::uint32_t;

/// Hard upper bound imposed by the 32-bit occupation mask.
inline constexpr int kMaxMaskModes = 30;

/// Amplitudes with magnitude below this are dropped after operator application.
inline constexpr double kPruneTolerance = 1e-14;

[[nodiscard]] constexpr Mask mode_bit(int mode) noexcept { return Mask{1} << (mode - 1); }

[[nodiscard]] constexpr int popcount(Mask m) noexcept { return std::popcount(m); }

/// Number of set bits strictly below 1-based `mode`.
[[nodiscard]] constexpr int occupied_below(Mask m, int mode) noexcept {
    return std::popcount(m & (mode_bit(mode) - 1));
}

/// Mask covering the 1-based modes in `modes`.
[[nodiscard]] Mask mask_of(std::span<const int> modes);

/// Ascending list of 1-based modes set in `m`.
[[nodiscard]] std::vector<int> modes_of(Mask m);

/// Packs the bits of `z` selected by `select` into the low bits, keeping their order.
[[nodiscard]] Mask extract_bits(Mask z, Mask select) noexcept;
/// Inverse of extract_bits: spreads the low bits of `packed` onto `select`.
[[nodiscard]] Mask deposit_bits(Mask packed, Mask select) noexcept;

/// Occupation pattern of n modes in canonical ascending order.
class FockBasisState {
public:
    FockBasisState() = default;

    /// Throws std::invalid_argument when `occ` has bits at or above mode n.
    FockBasisState(int n, Mask occ);

    /// `occupied` must be strictly increasing and within 1..n.
    static FockBasisState from_modes(int n, std::span<const int> occupied);
    static FockBasisState vacuum(int n) { return {n, 0}; }

    [[nodiscard]] int modes() const noexcept { return n_; }
    [[nodiscard]] Mask mask() const noexcept { return occ_; }
    [[nodiscard]] std::size_t index() const noexcept { return occ_; }
    [[nodiscard]] bool occupied(int mode) const noexcept { return (occ_ & mode_bit(mode)) != 0; }
    [[nodiscard]] int particle_count() const noexcept { return popcount(occ_); }
    [[nodiscard]] bool even() const noexcept { return particle_count() % 2 == 0; }
    [[nodiscard]] std::vector<int> occupied_modes() const { return modes_of(occ_); }

    auto operator<=>(const FockBasisState&) const = default;

private:
    int n_ = 0;
    Mask occ_ = 0;
};

/// Result of applying a single ladder operator to a basis state.
struct SignedBasisState {
    FockBasisState basis;
    int sign = 0;  ///< +1 or -1; 0 means the state was annihilated

    [[nodiscard]] bool vanished() const noexcept { return sign == 0; }
};

/// b†_k |basis>, picking up (-1)^(occupied modes below k).
[[nodiscard]] SignedBasisState create(const FockBasisState& basis, int k);
/// b_k |basis>, picking up (-1)^(occupied modes below k).
[[nodiscard]] SignedBasisState annihilate(const FockBasisState& basis, int k);

/// Pure state as a dense amplitude vector over the 2^n Fock basis.
class FermionicState {
public:
    FermionicState() = default;
    explicit FermionicState(int n);  // zero vector
    FermionicState(int n, Eigen::VectorXcd amplitudes);

    static FermionicState vacuum(int n);
    static FermionicState basis(const FockBasisState& b);

    [[nodiscard]] int modes() const noexcept { return n_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(amps_.size()); }
    [[nodiscard]] const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }

    [[nodiscard]] Complex amplitude(const FockBasisState& b) const;
    [[nodiscard]] Complex amplitude(Mask occ) const { return amps_[static_cast<Eigen::Index>(occ)]; }
    void set_amplitude(const FockBasisState& b, Complex value);
    void add_amplitude(const FockBasisState& b, Complex value);

    [[nodiscard]] double norm() const { return amps_.norm(); }
    [[nodiscard]] bool is_zero(double tol = kPruneTolerance) const;
    [[nodiscard]] bool is_normalized(double tol = 1e-12) const;
    /// Throws std::domain_error for the zero vector.
    [[nodiscard]] FermionicState normalized() const;

    /// Basis states with |amplitude| > tol, in mask order.
    [[nodiscard]] std::vector<FockBasisState> support(double tol = 1e-12) const;

    /// Drops amplitudes with magnitude below kPruneTolerance.
    void prune();

private:
    int n_ = 0;
    Eigen::VectorXcd amps_;
};

[[nodiscard]] FermionicState apply_creation(const FermionicState& state, int k);
[[nodiscard]] FermionicState apply_annihilation(const FermionicState& state, int k);

/// <a|b>; throws std::invalid_argument on mode-count mismatch.
[[nodiscard]] Complex inner_product(const FermionicState& a, const FermionicState& b);
/// |a><b| in mask ordering.
[[nodiscard]] Eigen::MatrixXcd outer_product(const FermionicState& a, const FermionicState& b);

/// Dense 2^n x 2^n matrices of b†_k and b_k.
[[nodiscard]] Eigen::MatrixXcd creation_matrix(int n, int k);
[[nodiscard]] Eigen::MatrixXcd annihilation_matrix(int n, int k);

/// Throws std::invalid_argument unless 1 <= n <= kMaxMaskModes.
void check_mode_count(int n);
/// Throws std::out_of_range unless 1 <= k <= n.
void check_mode_index(int n, int k);

}  // namespace fermiqi
