// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file qubit_map.hpp
 * @brief Occupation-preserving maps from fermionic modes to qubits and the
 *        faithfulness analysis for even four-mode states.
 *
 * A map sends each Fock basis pattern z to e^{iφ_z}|z> on qubits, bit for bit.
 * Faithfulness asks that every marginal keeps its diagonal exactly and its
 * off-diagonal magnitudes. For the pair marginals of an even four-mode state
 * each off-diagonal element is a sum of two products α_a α_b^*; matching its
 * magnitude for all amplitudes fixes a relative phase, giving one congruence
 * per element. The resulting integer system is decided exactly.
 */

#pragma once

#include "fermiqi/congruence.hpp"
#include "fermiqi/fock.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fermiqi {

/// Computational-basis state; bit i of an index is qubit i+1 (mode i+1).
struct QubitState {
    int n = 0;
    Eigen::VectorXcd amps;
};

/// "1100" style label, qubit 1 leftmost.
[[nodiscard]] std::string qubit_label(Mask bits, int n);

/// Phase angle per occupation pattern.
using PhaseAssignment = std::map<FockBasisState, double>;

/// Amplitude of pattern z becomes e^{iφ_z}·amp_z. Every pattern with
/// |amp| > 1e-12 needs a phase; throws std::invalid_argument otherwise.
[[nodiscard]] QubitState jw_map(const FermionicState& psi, const PhaseAssignment& phases);

/// Tensor-product partial trace over 1-based `traced` qubits; the result is
/// indexed by the remaining qubits in ascending order.
[[nodiscard]] Eigen::MatrixXcd qubit_partial_trace(const Eigen::MatrixXcd& rho, int n, std::span<const int> traced);

[[nodiscard]] Eigen::MatrixXcd qubit_density(const QubitState& q);

/// Which off-diagonal element of a two-mode marginal ρ_{i,j}.
enum class PairElement {
    VacuumPair,     ///< <0|ρ_{i,j}|1_i 1_j>
    SingleSingle,   ///< <1_i|ρ_{i,j}|1_j>
};

/// sign · α_ket · conj(α_bra)
struct ProductTerm {
    int sign = 1;
    FockBasisState ket;
    FockBasisState bra;

    bool operator==(const ProductTerm&) const = default;
};

struct OffDiagonalEntry {
    int i = 0;
    int j = 0;
    PairElement element = PairElement::VacuumPair;
    std::vector<ProductTerm> terms;

    [[nodiscard]] std::string label() const;
};

using SignTable = std::vector<OffDiagonalEntry>;

/// Pair order used by the sign table: (1,2),(3,4),(1,3),(2,4),(1,4),(2,3).
[[nodiscard]] std::vector<std::array<int, 2>> four_mode_pairs();

/// The 8 even patterns of four modes: 0, 12, 13, 14, 23, 24, 34, 1234.
[[nodiscard]] std::vector<FockBasisState> even_four_mode_patterns();

/// Builds the even four-mode state from α in the order
/// (α0, α12, α13, α14, α23, α24, α34, α1234).
[[nodiscard]] FermionicState even_four_mode_state(std::span<const Complex> alpha);

/// Symbolic off-diagonals of every pair marginal of an even four-mode state,
/// derived from the outside-in sign rule. Vacuum-pair entries for all pairs
/// come first, then single-single entries, each in four_mode_pairs() order.
[[nodiscard]] SignTable derive_pair_sign_table();

[[nodiscard]] Complex evaluate(const OffDiagonalEntry& entry, const FermionicState& psi);

/// Numeric (<0|ρ_{i,j}|1_i 1_j>, <1_i|ρ_{i,j}|1_j>) through the fermionic partial trace.
/// Requires a four-mode state; throws std::invalid_argument otherwise.
[[nodiscard]] std::array<Complex, 2> pair_offdiagonals(const FermionicState& psi, int i, int j);

struct PhaseConstraint {
    intlin::IntVector coeffs;          ///< one integer per variable
    int parity = 0;                    ///< right-hand side r·π
    std::string label;                 ///< roman numeral in order of first appearance
    std::vector<std::string> sources;  ///< table entries producing this congruence
};

struct PhaseConstraintSystem {
    std::vector<FockBasisState> variables;
    std::vector<PhaseConstraint> rows;

    [[nodiscard]] intlin::IntMatrix matrix() const;
    [[nodiscard]] std::vector<int> parities() const;
    /// "φ12 + φ34 - φ0 - φ1234 ≡ 0 (mod 2π)"
    [[nodiscard]] std::string describe(std::size_t row) const;
};

/// "φ0", "φ12", "φ1234"
[[nodiscard]] std::string phase_name(const FockBasisState& pattern);

/// Generic system: every entry constrains the relative phase of its terms.
/// Throws std::invalid_argument on malformed tables.
[[nodiscard]] PhaseConstraintSystem build_phase_constraints(const SignTable& table);

/// Concrete system for one state: rows survive only when some source entry has
/// both interfering products above `tol`; variables are restricted to the support.
[[nodiscard]] PhaseConstraintSystem build_phase_constraints(const SignTable& table, const FermionicState& psi,
                                                            double tol = 1e-12);

enum class Verdict { Solvable, Contradiction };

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;

struct SolvabilityWitness {
    Verdict verdict = Verdict::Solvable;
    intlin::IntVector combination;  ///< row multipliers u when contradictory
    PhaseAssignment phases;         ///< one solution in [0, 2π) when solvable
};

/// Exact decision. A contradiction witness prefers the form "odd row minus a
/// combination of earlier parity-0 rows" and is normalised so that its first
/// nonzero multiplier is positive.
[[nodiscard]] SolvabilityWitness decide_solvability(const PhaseConstraintSystem& sys);

/// Max |(Σ c_i φ_i - r π) mod 2π| over rows, folded into [0, π].
[[nodiscard]] double congruence_residual(const PhaseConstraintSystem& sys, const PhaseAssignment& phases);

enum class ActivationMode { Generic, Concrete };

struct MarginalDeviation {
    double max_diag_error = 0.0;
    double max_offdiag_error = 0.0;
};

/// Compares every fermionic marginal over the mode subsets in `subsets` with
/// the qubit marginal of jw_map(psi, phases).
[[nodiscard]] MarginalDeviation compare_marginals(const FermionicState& psi, const PhaseAssignment& phases,
                                                  std::span<const std::vector<int>> subsets);

/// Every nonempty subset of 1..n, including the full set.
[[nodiscard]] std::vector<std::vector<int>> all_mode_subsets(int n);

[[nodiscard]] PhaseAssignment zero_phases(const FermionicState& psi);

struct FaithfulnessReport {
    Verdict verdict = Verdict::Solvable;
    ActivationMode mode = ActivationMode::Concrete;
    PhaseConstraintSystem system;
    std::vector<std::string> activated_rows;
    intlin::IntVector witness;
    PhaseAssignment phases;
    std::optional<double> max_offdiag_error;
    std::optional<double> max_diag_error;
    bool verified = false;  ///< solvable and the qubit route reproduces every marginal within 1e-10
};

/// Requires an even four-mode pure state.
[[nodiscard]] FaithfulnessReport faithfulness_check(const FermionicState& psi,
                                                    ActivationMode mode = ActivationMode::Concrete);

}  // namespace fermiqi
