// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/ssr.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>

namespace fermiqi {

std::string_view to_string(ParityClass p) noexcept {
    switch (p) {
        case ParityClass::Even: return "even";
        case ParityClass::Odd: return "odd";
        case ParityClass::Mixed: return "mixed";
        case ParityClass::BlockDiagonal: return "mixed-sectors-no-coherence";
    }
    return "unknown";
}

ParityClass parity_check(const FermionicState& psi, double tol) {
    bool even = false;
    bool odd = false;
    for (Mask m = 0; m < static_cast<Mask>(psi.dimension()); ++m) {
        if (std::abs(psi.amplitude(m)) <= tol) continue;
        (popcount(m) % 2 == 0 ? even : odd) = true;
    }
    if (even && odd) return ParityClass::Mixed;
    return odd ? ParityClass::Odd : ParityClass::Even;
}

ParityClass density_parity_check(const DensityOperator& rho, double tol) {
    bool even = false;
    bool odd = false;
    bool coherent = false;
    for (Eigen::Index i = 0; i < rho.mat.rows(); ++i) {
        const bool ei = popcount(static_cast<Mask>(i)) % 2 == 0;
        for (Eigen::Index j = 0; j < rho.mat.cols(); ++j) {
            if (std::abs(rho.mat(i, j)) <= tol) continue;
            const bool ej = popcount(static_cast<Mask>(j)) % 2 == 0;
            if (ei != ej) {
                coherent = true;
            } else {
                (ei ? even : odd) = true;
            }
        }
    }
    if (coherent) return ParityClass::Mixed;
    if (even && odd) return ParityClass::BlockDiagonal;
    return odd ? ParityClass::Odd : ParityClass::Even;
}

std::vector<double> Spectrum::nonzero(double cutoff) const {
    std::vector<double> out;
    for (double v : eigenvalues) {
        if (v > cutoff) out.push_back(v);
    }
    return out;
}

Spectrum spectrum(const Eigen::MatrixXcd& hermitian) {
    if (hermitian.rows() != hermitian.cols()) throw std::invalid_argument("spectrum of a non-square matrix");
    if (hermitian.size() > 0 && (hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("spectrum requires a Hermitian matrix");
    }
    Spectrum s;
    s.dim = static_cast<int>(hermitian.rows());
    if (s.dim == 0) return s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver did not converge");
    s.eigenvalues.assign(es.eigenvalues().begin(), es.eigenvalues().end());
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
    return s;
}

Spectrum spectrum(const DensityOperator& rho) { return spectrum(rho.mat); }

double entropy_of(const Spectrum& s) {
    double h = 0.0;
    for (double v : s.eigenvalues) {
        if (v < -1e-10) throw std::domain_error("density operator has a negative eigenvalue " + std::to_string(v));
        if (v < 1e-12) continue;
        h -= v * std::log(v);
    }
    return h;
}

double von_neumann_entropy(const DensityOperator& rho) { return entropy_of(spectrum(rho)); }

double mutual_information(const DensityOperator& rho, const ModePartition& cut) {
    std::vector<int> covered;
    std::merge(cut.kept().begin(), cut.kept().end(), cut.traced().begin(), cut.traced().end(),
               std::back_inserter(covered));
    if (covered != rho.modes) throw std::invalid_argument("partition does not cover the density operator's modes");
    const double sa = von_neumann_entropy(partial_trace(rho, cut.traced()));
    const double sb = von_neumann_entropy(partial_trace(rho, cut.kept()));
    return sa + sb - von_neumann_entropy(rho);
}

double spectral_distance(const Spectrum& a, const Spectrum& b) {
    std::vector<double> x = a.nonzero();
    std::vector<double> y = b.nonzero();
    const std::size_t len = std::max(x.size(), y.size());
    x.resize(len, 0.0);
    y.resize(len, 0.0);
    double d = 0.0;
    for (std::size_t i = 0; i < len; ++i) d += std::abs(x[i] - y[i]);
    return d;
}

CutMarginals cut_marginals(const FermionicState& psi, const ModePartition& cut) {
    if (cut.modes() != psi.modes()) throw std::invalid_argument("partition mode count differs from state");
    return {reduce_pure(psi, cut.kept()), reduce_pure(psi, cut.traced())};
}

double spectral_mismatch(const FermionicState& psi, const ModePartition& cut) {
    const CutMarginals m = cut_marginals(psi, cut);
    return spectral_distance(spectrum(m.kept), spectrum(m.traced));
}

AmbiguousEntanglement::AmbiguousEntanglement(double entropy_kept, double entropy_traced, double mismatch)
    : std::runtime_error("entanglement entropy is ambiguous: marginal entropies " + std::to_string(entropy_kept) +
                         " and " + std::to_string(entropy_traced) + " (spectral mismatch " +
                         std::to_string(mismatch) + ")"),
      entropy_kept_(entropy_kept),
      entropy_traced_(entropy_traced),
      mismatch_(mismatch) {}

double entanglement_entropy(const FermionicState& psi, const ModePartition& cut, double tol) {
    const CutMarginals m = cut_marginals(psi, cut);
    const Spectrum sa = spectrum(m.kept);
    const Spectrum sb = spectrum(m.traced);
    const double mismatch = spectral_distance(sa, sb);
    if (!(mismatch < tol)) throw AmbiguousEntanglement(entropy_of(sa), entropy_of(sb), mismatch);
    return entropy_of(sa);
}

CutAnalysis analyze_cut(const FermionicState& psi, const ModePartition& cut) {
    CutAnalysis r;
    r.cut = cut;
    r.parity = parity_check(psi);
    const CutMarginals m = cut_marginals(psi, cut);
    r.spectrum_kept = spectrum(m.kept);
    r.spectrum_traced = spectrum(m.traced);
    r.mismatch = spectral_distance(r.spectrum_kept, r.spectrum_traced);
    r.entropy_kept = entropy_of(r.spectrum_kept);
    r.entropy_traced = entropy_of(r.spectrum_traced);
    // Global state is pure, so S(rho_AB) vanishes.
    r.mutual_information = r.entropy_kept + r.entropy_traced;
    return r;
}

}  // namespace fermiqi
