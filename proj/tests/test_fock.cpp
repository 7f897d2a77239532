// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/fock.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace fermiqi {
namespace {

using testing::max_abs;
using testing::random_state;

TEST(FockBasis, FromModesBuildsMask) {
    const std::vector<int> occ = {1, 3};
    const FockBasisState b = FockBasisState::from_modes(4, occ);
    EXPECT_EQ(b.mask(), 0b0101u);
    EXPECT_EQ(b.particle_count(), 2);
    EXPECT_TRUE(b.even());
    EXPECT_TRUE(b.occupied(3));
    EXPECT_FALSE(b.occupied(2));
    EXPECT_EQ(b.occupied_modes(), occ);
}

TEST(FockBasis, FromModesRejectsBadInput) {
    EXPECT_THROW(FockBasisState::from_modes(3, std::vector<int>{2, 1}), std::invalid_argument);
    EXPECT_THROW(FockBasisState::from_modes(3, std::vector<int>{1, 1}), std::invalid_argument);
    EXPECT_THROW(FockBasisState::from_modes(3, std::vector<int>{4}), std::out_of_range);
    EXPECT_THROW(FockBasisState::from_modes(3, std::vector<int>{0}), std::out_of_range);
    EXPECT_THROW(FockBasisState(2, 0b100), std::invalid_argument);
    EXPECT_THROW(FockBasisState(0, 0), std::invalid_argument);
}

TEST(FockBasis, ExtractAndDepositAreInverse) {
    const Mask select = 0b101101;
    for (Mask packed = 0; packed < 16; ++packed) {
        const Mask spread = deposit_bits(packed, select);
        EXPECT_EQ(spread & ~select, 0u);
        EXPECT_EQ(extract_bits(spread, select), packed);
    }
}

TEST(Ladder, CreationSignCountsLowerModes) {
    const FockBasisState b = FockBasisState::from_modes(4, std::vector<int>{1, 3});
    const SignedBasisState r = create(b, 4);
    EXPECT_EQ(r.sign, 1);
    EXPECT_EQ(r.basis.mask(), 0b1101u);
    const SignedBasisState s = create(b, 2);
    EXPECT_EQ(s.sign, -1);
    EXPECT_TRUE(create(b, 3).vanished());
    EXPECT_TRUE(annihilate(b, 2).vanished());
    EXPECT_EQ(annihilate(b, 3).sign, -1);
}

TEST(Ladder, CanonicalOrderSign) {
    // b†_1 b†_2 |0> is the canonical |1_1 1_2>; b†_2 b†_1 |0> is its negative.
    const FermionicState vac = FermionicState::vacuum(2);
    const FermionicState ordered = apply_creation(apply_creation(vac, 2), 1);
    const FermionicState reversed = apply_creation(apply_creation(vac, 1), 2);
    EXPECT_EQ(ordered.amplitude(0b11), Complex(1.0));
    EXPECT_EQ(reversed.amplitude(0b11), Complex(-1.0));
}

TEST(Ladder, OutOfRangeModeThrows) {
    const FermionicState vac = FermionicState::vacuum(3);
    EXPECT_THROW((void)apply_creation(vac, 0), std::out_of_range);
    EXPECT_THROW((void)apply_annihilation(vac, 4), std::out_of_range);
}

TEST(Ladder, AnticommutationRelationsAsMatrices) {
    for (int n = 1; n <= 6; ++n) {
        const Eigen::Index dim = Eigen::Index{1} << n;
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
        for (int k = 1; k <= n; ++k) {
            const Eigen::MatrixXcd bk = annihilation_matrix(n, k);
            const Eigen::MatrixXcd bkd = creation_matrix(n, k);
            EXPECT_LT(max_abs(bkd - bk.adjoint()), 1e-15);
            for (int j = 1; j <= n; ++j) {
                const Eigen::MatrixXcd bj = annihilation_matrix(n, j);
                const Eigen::MatrixXcd bjd = creation_matrix(n, j);
                EXPECT_LT(max_abs(bk * bj + bj * bk), 1e-15) << "n=" << n << " k=" << k << " j=" << j;
                const Eigen::MatrixXcd expected = k == j ? id : Eigen::MatrixXcd::Zero(dim, dim);
                EXPECT_LT(max_abs(bk * bjd + bjd * bk - expected), 1e-15) << "n=" << n << " k=" << k << " j=" << j;
            }
        }
    }
}

TEST(Ladder, StateActionMatchesMatrix) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 5;
        const FermionicState psi = random_state(n, rng);
        for (int k = 1; k <= n; ++k) {
            const Eigen::VectorXcd up = creation_matrix(n, k) * psi.amplitudes();
            const Eigen::VectorXcd down = annihilation_matrix(n, k) * psi.amplitudes();
            EXPECT_LT((apply_creation(psi, k).amplitudes() - up).norm(), 1e-13);
            EXPECT_LT((apply_annihilation(psi, k).amplitudes() - down).norm(), 1e-13);
        }
    }
}

TEST(Ladder, DoubleCreationVanishes) {
    std::mt19937_64 rng(12);
    for (int n = 1; n <= 5; ++n) {
        const FermionicState psi = random_state(n, rng);
        for (int k = 1; k <= n; ++k) EXPECT_TRUE(apply_creation(apply_creation(psi, k), k).is_zero());
    }
}

TEST(FermionicState, InnerProductIsOrthonormalOnBasis) {
    const FermionicState a = FermionicState::basis(FockBasisState(3, 0b011));
    const FermionicState b = FermionicState::basis(FockBasisState(3, 0b101));
    EXPECT_EQ(inner_product(a, a), Complex(1.0));
    EXPECT_EQ(inner_product(a, b), Complex(0.0));
    EXPECT_THROW((void)inner_product(a, FermionicState::vacuum(2)), std::invalid_argument);
}

TEST(FermionicState, InnerProductConjugatesLeft) {
    FermionicState a(1);
    a.set_amplitude(FockBasisState(1, 1), Complex(0.0, 1.0));
    FermionicState b(1);
    b.set_amplitude(FockBasisState(1, 1), 1.0);
    EXPECT_EQ(inner_product(a, b), Complex(0.0, -1.0));
}

TEST(FermionicState, OuterProductOfPlusState) {
    FermionicState plus(1);
    plus.set_amplitude(FockBasisState(1, 0), 1.0 / std::numbers::sqrt2);
    plus.set_amplitude(FockBasisState(1, 1), 1.0 / std::numbers::sqrt2);
    const Eigen::MatrixXcd m = outer_product(plus, plus);
    EXPECT_LT(max_abs(m - Eigen::MatrixXcd::Constant(2, 2, 0.5)), 1e-15);
}

TEST(FermionicState, OuterProductOfUniformTwoModeState) {
    FermionicState psi(2);
    for (Mask z = 0; z < 4; ++z) psi.set_amplitude(FockBasisState(2, z), 0.5);
    EXPECT_LT(max_abs(outer_product(psi, psi) - Eigen::MatrixXcd::Constant(4, 4, 0.25)), 1e-15);
}

TEST(FermionicState, NormalizeAndSupport) {
    FermionicState psi(2);
    psi.set_amplitude(FockBasisState(2, 0), 3.0);
    psi.set_amplitude(FockBasisState(2, 3), Complex(0.0, 4.0));
    EXPECT_FALSE(psi.is_normalized());
    const FermionicState u = psi.normalized();
    EXPECT_TRUE(u.is_normalized());
    EXPECT_NEAR(std::abs(u.amplitude(FockBasisState(2, 3))), 0.8, 1e-15);
    ASSERT_EQ(u.support().size(), 2u);
    EXPECT_EQ(u.support()[1].mask(), 3u);
    EXPECT_THROW((void)FermionicState(2).normalized(), std::domain_error);
    EXPECT_THROW(FermionicState(2, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
}

}  // namespace
}  // namespace fermiqi
