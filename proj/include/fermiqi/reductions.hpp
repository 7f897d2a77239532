// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file reductions.hpp
 * @brief Fermionic partial trace and the consistency-condition oracle.
 *
 * `partial_trace` implements the outside-in rule: every traced-mode creation
 * operator is anticommuted next to the vacuum projector before removal. For a
 * matrix element |x><y| the ket and the bra each pick up the parity of the
 * stable sort that moves their traced modes to the right of the kept ones.
 *
 * `reduced_state_oracle` derives the same marginal without that rule: it
 * evaluates every kept-mode monomial observable on the global state through
 * ladder-operator products and solves the linear system that makes local and
 * global expectation values agree.
 */

#pragma once

#include "fermiqi/fock.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

namespace fermiqi {

/// Default cap on dense density-operator mode counts (16384 x 16384 entries).
inline constexpr int kDefaultMaxModes = 14;

/// Density matrix over the Fock basis of an ascending list of modes.
/// Local bit j of a row/column index refers to `modes[j]`.
struct DensityOperator {
    std::vector<int> modes;
    Eigen::MatrixXcd mat;

    [[nodiscard]] int mode_count() const noexcept { return static_cast<int>(modes.size()); }
    [[nodiscard]] Eigen::Index dimension() const noexcept { return mat.rows(); }

    /// Checks shape, ascending modes, Hermiticity, unit trace and
    /// eigenvalues >= -1e-10. Throws std::invalid_argument.
    void validate(double tol = 1e-12) const;

    /// |psi><psi| over modes 1..n.
    static DensityOperator from_pure(const FermionicState& psi, int max_modes = kDefaultMaxModes);
    /// Convex mixture of pure states; weights must be non-negative and sum to 1.
    static DensityOperator mixture(std::span<const FermionicState> states, std::span<const double> weights,
                                   int max_modes = kDefaultMaxModes);
};

/// Ordered pair of disjoint mode sets covering 1..n.
class ModePartition {
public:
    ModePartition() = default;
    /// Both sides are sorted; throws std::invalid_argument unless they are
    /// disjoint, nonempty and cover 1..n.
    ModePartition(int n, std::vector<int> kept, std::vector<int> traced);

    [[nodiscard]] int modes() const noexcept { return n_; }
    [[nodiscard]] const std::vector<int>& kept() const noexcept { return kept_; }
    [[nodiscard]] const std::vector<int>& traced() const noexcept { return traced_; }
    [[nodiscard]] ModePartition swapped() const { return {n_, traced_, kept_}; }

    /// "1,2|3,4"
    [[nodiscard]] std::string label() const;

    bool operator==(const ModePartition&) const = default;

private:
    int n_ = 0;
    std::vector<int> kept_;
    std::vector<int> traced_;
};

/// All 2^(n-1) - 1 bipartitions whose first side contains mode 1, in mask order.
[[nodiscard]] std::vector<ModePartition> all_bipartitions(int n);

/// Parity sign of the stable sort of the set bits of `z` into (bits outside
/// `traced`, then bits inside `traced`).
[[nodiscard]] int block_sort_sign(Mask z, Mask traced) noexcept;

/// Traces out `traced` (1-based, subset of rho.modes). Throws
/// std::invalid_argument when a mode is not present in rho.
[[nodiscard]] DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> traced);

/// Keeps `kept` and traces out every other mode of rho.
[[nodiscard]] DensityOperator reduce_to(const DensityOperator& rho, std::span<const int> kept);

/// Marginal of a pure state on `kept`.
[[nodiscard]] DensityOperator reduce_pure(const FermionicState& psi, std::span<const int> kept);

/// Action of the monomial b†_{x...} P_region b_{...y} on a basis state, where
/// x and y are occupation masks inside `region`, creation operators are in
/// ascending order, and P_region projects every mode of `region` onto vacuum.
[[nodiscard]] SignedBasisState apply_monomial(Mask creators, Mask annihilators, Mask region,
                                              const FockBasisState& z);

/// Embeds an operator on the Fock space of `subset` (ascending 1-based modes)
/// into the Fock space of modes 1..n, monomial by monomial.
[[nodiscard]] Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& op, std::span<const int> subset, int n);

/// Tr(rho M) for M = |x><y| on the modes `kept`, with x and y given as masks
/// over the local bits of `kept` and M embedded through apply_monomial.
[[nodiscard]] Complex monomial_expectation(const DensityOperator& rho, std::span<const int> kept, Mask x, Mask y);

/// Consistency-condition solver for marginals on a fixed number of modes.
/// The coefficient matrix depends only on that number, so one instance can
/// serve many states.
class ConsistencyOracle {
public:
    explicit ConsistencyOracle(int kept_count);
    ~ConsistencyOracle();
    ConsistencyOracle(ConsistencyOracle&&) noexcept;
    ConsistencyOracle& operator=(ConsistencyOracle&&) noexcept;

    struct Result {
        DensityOperator marginal;
        double residual = 0.0;  ///< relative least-squares residual
    };

    /// Throws std::runtime_error when the residual exceeds `max_residual`.
    [[nodiscard]] Result solve(const DensityOperator& rho, std::span<const int> kept,
                               double max_residual = 1e-10) const;

    [[nodiscard]] int kept_count() const noexcept { return kept_count_; }

private:
    struct Impl;
    int kept_count_ = 0;
    std::unique_ptr<Impl> impl_;
};

[[nodiscard]] DensityOperator reduced_state_oracle(const DensityOperator& rho, std::span<const int> kept);

}  // namespace fermiqi
