// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/fock.hpp"

#include <stdexcept>
#include <string>

namespace fermiqi {

void check_mode_count(int n) {
    if (n < 1 || n > kMaxMaskModes) {
        throw std::invalid_argument("mode count " + std::to_string(n) + " outside 1.." +
                                    std::to_string(kMaxMaskModes));
    }
}

void check_mode_index(int n, int k) {
    if (k < 1 || k > n) {
        throw std::out_of_range("mode index " + std::to_string(k) + " outside 1.." + std::to_string(n));
    }
}

Mask mask_of(std::span<const int> modes) {
    Mask m = 0;
    for (int k : modes) {
        if (k < 1 || k > kMaxMaskModes) throw std::out_of_range("mode index " + std::to_string(k));
        m |= mode_bit(k);
    }
    return m;
}

std::vector<int> modes_of(Mask m) {
    std::vector<int> out;
    while (m != 0) {
        out.push_back(std::countr_zero(m) + 1);
        m &= m - 1;
    }
    return out;
}

Mask extract_bits(Mask z, Mask select) noexcept {
    Mask out = 0;
    for (int pos = 0; select != 0; ++pos, select &= select - 1) {
        if (z & select & (~select + 1)) out |= Mask{1} << pos;
    }
    return out;
}

Mask deposit_bits(Mask packed, Mask select) noexcept {
    Mask out = 0;
    for (int pos = 0; select != 0; ++pos, select &= select - 1) {
        if (packed & (Mask{1} << pos)) out |= select & (~select + 1);
    }
    return out;
}

FockBasisState::FockBasisState(int n, Mask occ) : n_(n), occ_(occ) {
    check_mode_count(n);
    if ((occ >> n) != 0) throw std::invalid_argument("occupation pattern exceeds mode count");
}

FockBasisState FockBasisState::from_modes(int n, std::span<const int> occupied) {
    check_mode_count(n);
    Mask m = 0;
    int prev = 0;
    for (int k : occupied) {
        check_mode_index(n, k);
        if (k <= prev) throw std::invalid_argument("occupied modes must be strictly increasing");
        prev = k;
        m |= mode_bit(k);
    }
    return {n, m};
}

SignedBasisState create(const FockBasisState& basis, int k) {
    check_mode_index(basis.modes(), k);
    if (basis.occupied(k)) return {basis, 0};
    const int sign = occupied_below(basis.mask(), k) % 2 == 0 ? 1 : -1;
    return {FockBasisState(basis.modes(), basis.mask() | mode_bit(k)), sign};
}

SignedBasisState annihilate(const FockBasisState& basis, int k) {
    check_mode_index(basis.modes(), k);
    if (!basis.occupied(k)) return {basis, 0};
    const int sign = occupied_below(basis.mask(), k) % 2 == 0 ? 1 : -1;
    return {FockBasisState(basis.modes(), basis.mask() & ~mode_bit(k)), sign};
}

FermionicState::FermionicState(int n) : n_(n) {
    check_mode_count(n);
    amps_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
}

FermionicState::FermionicState(int n, Eigen::VectorXcd amplitudes) : n_(n), amps_(std::move(amplitudes)) {
    check_mode_count(n);
    if (amps_.size() != (Eigen::Index{1} << n)) {
        throw std::invalid_argument("amplitude vector length must be 2^n");
    }
}

FermionicState FermionicState::vacuum(int n) {
    FermionicState s(n);
    s.amps_[0] = 1.0;
    return s;
}

FermionicState FermionicState::basis(const FockBasisState& b) {
    FermionicState s(b.modes());
    s.amps_[static_cast<Eigen::Index>(b.index())] = 1.0;
    return s;
}

Complex FermionicState::amplitude(const FockBasisState& b) const {
    if (b.modes() != n_) throw std::invalid_argument("basis state mode count mismatch");
    return amps_[static_cast<Eigen::Index>(b.index())];
}

void FermionicState::set_amplitude(const FockBasisState& b, Complex value) {
    if (b.modes() != n_) throw std::invalid_argument("basis state mode count mismatch");
    amps_[static_cast<Eigen::Index>(b.index())] = value;
}

void FermionicState::add_amplitude(const FockBasisState& b, Complex value) {
    if (b.modes() != n_) throw std::invalid_argument("basis state mode count mismatch");
    amps_[static_cast<Eigen::Index>(b.index())] += value;
}

bool FermionicState::is_zero(double tol) const {
    return amps_.size() == 0 || amps_.cwiseAbs().maxCoeff() < tol;
}

bool FermionicState::is_normalized(double tol) const { return std::abs(amps_.squaredNorm() - 1.0) <= tol; }

FermionicState FermionicState::normalized() const {
    const double nrm = norm();
    if (nrm < kPruneTolerance) throw std::domain_error("cannot normalize the zero vector");
    return {n_, amps_ / nrm};
}

std::vector<FockBasisState> FermionicState::support(double tol) const {
    std::vector<FockBasisState> out;
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
        if (std::abs(amps_[i]) > tol) out.emplace_back(n_, static_cast<Mask>(i));
    }
    return out;
}

void FermionicState::prune() {
    for (auto& a : amps_) {
        if (std::abs(a) < kPruneTolerance) a = 0.0;
    }
}

namespace {

template <typename Ladder>
FermionicState apply_ladder(const FermionicState& state, int k, Ladder ladder) {
    const int n = state.modes();
    check_mode_index(n, k);
    FermionicState out(n);
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
        const Complex a = state.amplitude(m);
        if (a == 0.0) continue;
        const SignedBasisState r = ladder(FockBasisState(n, m), k);
        if (!r.vanished()) out.add_amplitude(r.basis, static_cast<double>(r.sign) * a);
    }
    out.prune();
    return out;
}

template <typename Ladder>
Eigen::MatrixXcd ladder_matrix(int n, int k, Ladder ladder) {
    check_mode_count(n);
    check_mode_index(n, k);
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (Mask m = 0; m < static_cast<Mask>(dim); ++m) {
        const SignedBasisState r = ladder(FockBasisState(n, m), k);
        if (!r.vanished()) out(static_cast<Eigen::Index>(r.basis.index()), m) = static_cast<double>(r.sign);
    }
    return out;
}

void require_same_modes(const FermionicState& a, const FermionicState& b) {
    if (a.modes() != b.modes()) throw std::invalid_argument("mode count mismatch");
}

}  // namespace

FermionicState apply_creation(const FermionicState& state, int k) { return apply_ladder(state, k, create); }

FermionicState apply_annihilation(const FermionicState& state, int k) {
    return apply_ladder(state, k, annihilate);
}

Complex inner_product(const FermionicState& a, const FermionicState& b) {
    require_same_modes(a, b);
    return a.amplitudes().dot(b.amplitudes());  // conjugates the left operand
}

Eigen::MatrixXcd outer_product(const FermionicState& a, const FermionicState& b) {
    require_same_modes(a, b);
    return a.amplitudes() * b.amplitudes().adjoint();
}

Eigen::MatrixXcd creation_matrix(int n, int k) { return ladder_matrix(n, k, create); }

Eigen::MatrixXcd annihilation_matrix(int n, int k) { return ladder_matrix(n, k, annihilate); }

}  // namespace fermiqi
