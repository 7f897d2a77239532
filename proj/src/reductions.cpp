// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/reductions.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseQR>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fermiqi {

namespace {

void require_ascending(std::span<const int> modes, const char* what) {
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] < 1) throw std::invalid_argument(std::string(what) + ": mode indices are 1-based");
        if (i > 0 && modes[i] <= modes[i - 1]) {
            throw std::invalid_argument(std::string(what) + ": modes must be strictly increasing");
        }
    }
}

// Mask over the local bits of `rho_modes` selecting `subset`.
Mask local_mask(std::span<const int> rho_modes, std::span<const int> subset) {
    Mask m = 0;
    for (int k : subset) {
        auto it = std::find(rho_modes.begin(), rho_modes.end(), k);
        if (it == rho_modes.end()) {
            throw std::invalid_argument("mode " + std::to_string(k) + " is not part of the operator's modes");
        }
        const Mask bit = Mask{1} << (it - rho_modes.begin());
        if (m & bit) throw std::invalid_argument("duplicate mode " + std::to_string(k));
        m |= bit;
    }
    return m;
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw std::invalid_argument("duplicate mode in set");
    return v;
}

}  // namespace

void DensityOperator::validate(double tol) const {
    require_ascending(modes, "density operator");
    const Eigen::Index dim = Eigen::Index{1} << modes.size();
    if (mat.rows() != dim || mat.cols() != dim) {
        throw std::invalid_argument("density matrix dimension must be 2^(mode count)");
    }
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("density matrix not Hermitian");
    if (std::abs(mat.trace() - Complex(1.0)) > tol) throw std::invalid_argument("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw std::invalid_argument("density matrix has negative eigenvalues");
}

DensityOperator DensityOperator::from_pure(const FermionicState& psi, int max_modes) {
    if (psi.modes() > max_modes) {
        throw std::invalid_argument("mode count " + std::to_string(psi.modes()) + " exceeds dense cap " +
                                    std::to_string(max_modes));
    }
    DensityOperator rho;
    rho.modes.resize(static_cast<std::size_t>(psi.modes()));
    std::iota(rho.modes.begin(), rho.modes.end(), 1);
    rho.mat = outer_product(psi, psi);
    return rho;
}

DensityOperator DensityOperator::mixture(std::span<const FermionicState> states, std::span<const double> weights,
                                         int max_modes) {
    if (states.empty() || states.size() != weights.size()) {
        throw std::invalid_argument("mixture needs one weight per state");
    }
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("mixture weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
    DensityOperator rho = from_pure(states[0], max_modes);
    rho.mat *= weights[0];
    for (std::size_t i = 1; i < states.size(); ++i) {
        if (states[i].modes() != states[0].modes()) throw std::invalid_argument("mixture mode count mismatch");
        rho.mat += weights[i] * outer_product(states[i], states[i]);
    }
    return rho;
}

ModePartition::ModePartition(int n, std::vector<int> kept, std::vector<int> traced)
    : n_(n), kept_(sorted_unique(std::move(kept))), traced_(sorted_unique(std::move(traced))) {
    check_mode_count(n);
    if (kept_.empty() || traced_.empty()) throw std::invalid_argument("both sides of a bipartition must be nonempty");
    std::vector<int> all;
    std::merge(kept_.begin(), kept_.end(), traced_.begin(), traced_.end(), std::back_inserter(all));
    for (int i = 0; i < static_cast<int>(all.size()); ++i) {
        if (all[static_cast<std::size_t>(i)] != i + 1 || static_cast<int>(all.size()) != n) {
            throw std::invalid_argument("bipartition must cover modes 1.." + std::to_string(n) + " exactly once");
        }
    }
}

std::string ModePartition::label() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < kept_.size(); ++i) os << (i ? "," : "") << kept_[i];
    os << '|';
    for (std::size_t i = 0; i < traced_.size(); ++i) os << (i ? "," : "") << traced_[i];
    return os.str();
}

std::vector<ModePartition> all_bipartitions(int n) {
    check_mode_count(n);
    std::vector<ModePartition> cuts;
    const Mask full = (Mask{1} << n) - 1;
    for (Mask kept = 1; kept < full; kept += 2) {
        cuts.emplace_back(n, modes_of(kept), modes_of(full & ~kept));
    }
    return cuts;
}

int block_sort_sign(Mask z, Mask traced) noexcept {
    // Each traced bit must hop over every kept bit above it.
    int hops = 0;
    Mask t = z & traced;
    const Mask kept = z & ~traced;
    while (t != 0) {
        const Mask low = t & (~t + 1);
        hops += popcount(kept & ~((low << 1) - 1));
        t &= t - 1;
    }
    return hops % 2 == 0 ? 1 : -1;
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> traced) {
    require_ascending(rho.modes, "density operator");
    const int m = rho.mode_count();
    const Mask full = m == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << m) - 1);
    const Mask tmask = local_mask(rho.modes, traced);
    const Mask kmask = full & ~tmask;

    DensityOperator out;
    for (std::size_t j = 0; j < rho.modes.size(); ++j) {
        if (!(tmask & (Mask{1} << j))) out.modes.push_back(rho.modes[j]);
    }
    const Eigen::Index kdim = Eigen::Index{1} << out.modes.size();
    out.mat = Eigen::MatrixXcd::Zero(kdim, kdim);

    const Mask tdim = Mask{1} << popcount(tmask);
    for (Mask t = 0; t < tdim; ++t) {
        const Mask tz = deposit_bits(t, tmask);
        for (Mask a = 0; a < static_cast<Mask>(kdim); ++a) {
            const Mask x = deposit_bits(a, kmask) | tz;
            const int sx = block_sort_sign(x, tmask);
            for (Mask b = 0; b < static_cast<Mask>(kdim); ++b) {
                const Mask y = deposit_bits(b, kmask) | tz;
                const int s = sx * block_sort_sign(y, tmask);
                out.mat(a, b) += static_cast<double>(s) * rho.mat(x, y);
            }
        }
    }
    return out;
}

DensityOperator reduce_to(const DensityOperator& rho, std::span<const int> kept) {
    const Mask kmask = local_mask(rho.modes, kept);
    std::vector<int> traced;
    for (std::size_t j = 0; j < rho.modes.size(); ++j) {
        if (!(kmask & (Mask{1} << j))) traced.push_back(rho.modes[j]);
    }
    return partial_trace(rho, traced);
}

DensityOperator reduce_pure(const FermionicState& psi, std::span<const int> kept) {
    // Same sign rule as partial_trace, without materialising |psi><psi|.
    const int n = psi.modes();
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 1);
    const Mask kmask = local_mask(all, kept);
    const Mask tmask = ((Mask{1} << n) - 1) & ~kmask;
    const Eigen::Index kdim = Eigen::Index{1} << popcount(kmask);
    const Eigen::Index tdim = Eigen::Index{1} << popcount(tmask);

    Eigen::MatrixXcd coeff(kdim, tdim);
    for (Eigen::Index a = 0; a < kdim; ++a) {
        for (Eigen::Index t = 0; t < tdim; ++t) {
            const Mask z = deposit_bits(static_cast<Mask>(a), kmask) | deposit_bits(static_cast<Mask>(t), tmask);
            coeff(a, t) = static_cast<double>(block_sort_sign(z, tmask)) * psi.amplitude(z);
        }
    }
    DensityOperator out;
    out.modes = modes_of(kmask);
    out.mat = coeff * coeff.adjoint();
    return out;
}

SignedBasisState apply_monomial(Mask creators, Mask annihilators, Mask region, const FockBasisState& z) {
    SignedBasisState cur{z, 1};
    // b_{y1} acts first: the adjoint of b†_{y1} ... b†_{yj} is b_{yj} ... b_{y1}.
    for (int k : modes_of(annihilators)) {
        const SignedBasisState r = annihilate(cur.basis, k);
        if (r.vanished()) return {z, 0};
        cur = {r.basis, cur.sign * r.sign};
    }
    if (cur.basis.mask() & region) return {z, 0};
    const std::vector<int> cr = modes_of(creators);
    for (auto it = cr.rbegin(); it != cr.rend(); ++it) {
        const SignedBasisState r = create(cur.basis, *it);
        if (r.vanished()) return {z, 0};
        cur = {r.basis, cur.sign * r.sign};
    }
    return cur;
}

Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& op, std::span<const int> subset, int n) {
    check_mode_count(n);
    require_ascending(subset, "embedding subset");
    for (int k : subset) check_mode_index(n, k);
    const Eigen::Index ldim = Eigen::Index{1} << subset.size();
    if (op.rows() != ldim || op.cols() != ldim) throw std::invalid_argument("operator dimension must be 2^|subset|");

    const Mask region = mask_of(subset);
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index p = 0; p < ldim; ++p) {
        for (Eigen::Index q = 0; q < ldim; ++q) {
            const Complex c = op(p, q);
            if (c == 0.0) continue;
            const Mask x = deposit_bits(static_cast<Mask>(p), region);
            const Mask y = deposit_bits(static_cast<Mask>(q), region);
            for (Mask z = 0; z < static_cast<Mask>(dim); ++z) {
                const SignedBasisState r = apply_monomial(x, y, region, FockBasisState(n, z));
                if (!r.vanished()) out(static_cast<Eigen::Index>(r.basis.index()), z) += static_cast<double>(r.sign) * c;
            }
        }
    }
    return out;
}

Complex monomial_expectation(const DensityOperator& rho, std::span<const int> kept, Mask x, Mask y) {
    const int m = rho.mode_count();
    const Mask region = local_mask(rho.modes, kept);
    const Mask gx = deposit_bits(x, region);
    const Mask gy = deposit_bits(y, region);
    // Tr(rho M) = sum_z rho(w, z) * s  for M|z> = s|w>.
    Complex acc = 0.0;
    for (Mask z = 0; z < (Mask{1} << m); ++z) {
        const SignedBasisState r = apply_monomial(gx, gy, region, FockBasisState(std::max(m, 1), z));
        if (!r.vanished()) acc += static_cast<double>(r.sign) * rho.mat(z, static_cast<Eigen::Index>(r.basis.index()));
    }
    return acc;
}

struct ConsistencyOracle::Impl {
    using Sparse = Eigen::SparseMatrix<Complex>;
    Sparse system;
    Eigen::SparseQR<Sparse, Eigen::COLAMDOrdering<int>> qr;
};

ConsistencyOracle::ConsistencyOracle(int kept_count) : kept_count_(kept_count), impl_(std::make_unique<Impl>()) {
    check_mode_count(kept_count);
    const Mask dim = Mask{1} << kept_count;
    const Mask region = dim - 1;
    const Eigen::Index unknowns = Eigen::Index{dim} * dim;

    // Row (x, y): Tr(rho_A |x><y|) expressed through the unknown entries of rho_A,
    // with the local monomial evaluated by the same ladder algebra.
    std::vector<Eigen::Triplet<Complex>> entries;
    for (Mask x = 0; x < dim; ++x) {
        for (Mask y = 0; y < dim; ++y) {
            const Eigen::Index row = Eigen::Index{x} * dim + y;
            for (Mask q = 0; q < dim; ++q) {
                const SignedBasisState r = apply_monomial(x, y, region, FockBasisState(kept_count, q));
                if (r.vanished()) continue;
                const Eigen::Index col = static_cast<Eigen::Index>(q) * dim + static_cast<Eigen::Index>(r.basis.index());
                entries.emplace_back(row, col, static_cast<double>(r.sign));
            }
        }
    }
    impl_->system.resize(unknowns, unknowns);
    impl_->system.setFromTriplets(entries.begin(), entries.end());
    impl_->system.makeCompressed();
    impl_->qr.compute(impl_->system);
    if (impl_->qr.info() != Eigen::Success) throw std::runtime_error("consistency system factorization failed");
}

ConsistencyOracle::~ConsistencyOracle() = default;
ConsistencyOracle::ConsistencyOracle(ConsistencyOracle&&) noexcept = default;
ConsistencyOracle& ConsistencyOracle::operator=(ConsistencyOracle&&) noexcept = default;

ConsistencyOracle::Result ConsistencyOracle::solve(const DensityOperator& rho, std::span<const int> kept,
                                                   double max_residual) const {
    if (static_cast<int>(kept.size()) != kept_count_) {
        throw std::invalid_argument("oracle built for " + std::to_string(kept_count_) + " kept modes");
    }
    require_ascending(kept, "kept modes");
    const Mask dim = Mask{1} << kept_count_;
    Eigen::VectorXcd rhs(Eigen::Index{dim} * dim);
    for (Mask x = 0; x < dim; ++x) {
        for (Mask y = 0; y < dim; ++y) rhs[Eigen::Index{x} * dim + y] = monomial_expectation(rho, kept, x, y);
    }
    const Eigen::VectorXcd sol = impl_->qr.solve(rhs);
    if (impl_->qr.info() != Eigen::Success) throw std::runtime_error("consistency system solve failed");
    const double residual = (impl_->system * sol - rhs).norm() / std::max(1.0, rhs.norm());
    if (!(residual < max_residual)) {
        throw std::runtime_error("consistency system is singular or inconsistent (residual " +
                                 std::to_string(residual) + ")");
    }
    Result res;
    res.residual = residual;
    res.marginal.modes.assign(kept.begin(), kept.end());
    res.marginal.mat.resize(dim, dim);
    for (Mask p = 0; p < dim; ++p) {
        for (Mask q = 0; q < dim; ++q) res.marginal.mat(p, q) = sol[Eigen::Index{p} * dim + q];
    }
    return res;
}

DensityOperator reduced_state_oracle(const DensityOperator& rho, std::span<const int> kept) {
    return ConsistencyOracle(static_cast<int>(kept.size())).solve(rho, kept).marginal;
}

}  // namespace fermiqi
