// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ssr.hpp
 * @brief Parity-superselection predicates, spectra, entropies and the
 *        spectral mismatch between the two marginals of a pure state.
 *
 * Entropies are in nats.
 */

#pragma once

#include "fermiqi/fock.hpp"
#include "fermiqi/reductions.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fermiqi {

enum class ParityClass {
    Even,
    Odd,
    Mixed,           ///< coherent superposition of even and odd sectors
    BlockDiagonal,   ///< density operator populating both sectors without coherence
};

[[nodiscard]] std::string_view to_string(ParityClass p) noexcept;

/// Amplitude support tolerance used by the parity predicates.
inline constexpr double kParityTolerance = 1e-12;

[[nodiscard]] ParityClass parity_check(const FermionicState& psi, double tol = kParityTolerance);
[[nodiscard]] ParityClass density_parity_check(const DensityOperator& rho, double tol = kParityTolerance);

struct Spectrum {
    std::vector<double> eigenvalues;  ///< descending
    int dim = 0;

    /// Eigenvalues above `cutoff`, descending.
    [[nodiscard]] std::vector<double> nonzero(double cutoff = 1e-10) const;
};

/// Throws std::invalid_argument when rho deviates from Hermitian by more than 1e-10.
[[nodiscard]] Spectrum spectrum(const DensityOperator& rho);
[[nodiscard]] Spectrum spectrum(const Eigen::MatrixXcd& hermitian);

/// -sum λ ln λ. Eigenvalues in (-1e-10, 0) are clipped to 0 and those below
/// 1e-12 contribute nothing; more negative eigenvalues throw std::domain_error.
[[nodiscard]] double entropy_of(const Spectrum& s);
[[nodiscard]] double von_neumann_entropy(const DensityOperator& rho);

/// S(rho_A) + S(rho_B) - S(rho_AB); the cut must cover rho.modes.
[[nodiscard]] double mutual_information(const DensityOperator& rho, const ModePartition& cut);

/// l1 distance between the nonzero eigenvalue multisets (above 1e-10),
/// zero-padded to equal length and sorted descending.
[[nodiscard]] double spectral_distance(const Spectrum& a, const Spectrum& b);

/// Both marginals of a pure state across a cut.
struct CutMarginals {
    DensityOperator kept;
    DensityOperator traced;
};
[[nodiscard]] CutMarginals cut_marginals(const FermionicState& psi, const ModePartition& cut);

[[nodiscard]] double spectral_mismatch(const FermionicState& psi, const ModePartition& cut);

/// Thrown when a pure state's marginals disagree, so that its entropy of
/// entanglement is not well defined.
class AmbiguousEntanglement : public std::runtime_error {
public:
    AmbiguousEntanglement(double entropy_kept, double entropy_traced, double mismatch);
    [[nodiscard]] double entropy_kept() const noexcept { return entropy_kept_; }
    [[nodiscard]] double entropy_traced() const noexcept { return entropy_traced_; }
    [[nodiscard]] double mismatch() const noexcept { return mismatch_; }

private:
    double entropy_kept_;
    double entropy_traced_;
    double mismatch_;
};

inline constexpr double kMismatchTolerance = 1e-9;

/// S(rho_A) when the two marginals share a spectrum, else throws AmbiguousEntanglement.
[[nodiscard]] double entanglement_entropy(const FermionicState& psi, const ModePartition& cut,
                                          double tol = kMismatchTolerance);

/// Everything reported for a pure state and one cut.
struct CutAnalysis {
    ModePartition cut;
    ParityClass parity = ParityClass::Even;
    Spectrum spectrum_kept;
    Spectrum spectrum_traced;
    double mismatch = 0.0;
    double entropy_kept = 0.0;
    double entropy_traced = 0.0;
    double mutual_information = 0.0;
};

[[nodiscard]] CutAnalysis analyze_cut(const FermionicState& psi, const ModePartition& cut);

}  // namespace fermiqi
