// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/reductions.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

namespace fermiqi {
namespace {

using testing::complement;
using testing::dense_monomial;
using testing::max_abs;
using testing::random_mixture;
using testing::random_state;
using testing::random_subset;

std::vector<int> modes_in(Mask local, const std::vector<int>& region) {
    std::vector<int> out;
    for (std::size_t j = 0; j < region.size(); ++j) {
        if (local & (Mask{1} << j)) out.push_back(region[j]);
    }
    return out;
}

TEST(BlockSortSign, MatchesHandCounts) {
    // |1_1 1_2> with mode 1 traced: mode 1 hops over mode 2.
    EXPECT_EQ(block_sort_sign(0b11, 0b01), -1);
    EXPECT_EQ(block_sort_sign(0b11, 0b10), 1);
    EXPECT_EQ(block_sort_sign(0b111, 0b001), 1);
    EXPECT_EQ(block_sort_sign(0b101, 0b001), -1);
    EXPECT_EQ(block_sort_sign(0, 0b111), 1);
}

TEST(Bipartitions, CountAndCoverage) {
    for (int n = 2; n <= 6; ++n) {
        const auto cuts = all_bipartitions(n);
        EXPECT_EQ(cuts.size(), (std::size_t{1} << (n - 1)) - 1);
        for (const auto& c : cuts) {
            EXPECT_EQ(c.kept().front(), 1);
            EXPECT_EQ(c.kept().size() + c.traced().size(), static_cast<std::size_t>(n));
        }
    }
    EXPECT_EQ(all_bipartitions(4)[0].label(), "1|2,3,4");
    EXPECT_THROW(ModePartition(3, {1}, {2}), std::invalid_argument);
    EXPECT_THROW(ModePartition(3, {}, {1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(ModePartition(3, {1, 2}, {2, 3}), std::invalid_argument);
}

TEST(PartialTrace, TwoModeUniformExample) {
    FermionicState psi(2);
    for (Mask z = 0; z < 4; ++z) psi.set_amplitude(FockBasisState(2, z), 0.5);
    const DensityOperator rho = DensityOperator::from_pure(psi);
    const std::vector<int> t2 = {2};
    const std::vector<int> t1 = {1};
    const DensityOperator r1 = partial_trace(rho, t2);
    const DensityOperator r2 = partial_trace(rho, t1);
    EXPECT_LT(max_abs(r1.mat - Eigen::MatrixXcd::Constant(2, 2, 0.5)), 1e-15);
    EXPECT_EQ(r1.modes, std::vector<int>{1});
    Eigen::MatrixXcd expected2(2, 2);
    expected2 << 0.5, 0.0, 0.0, 0.5;
    EXPECT_LT(max_abs(r2.mat - expected2), 1e-15);
}

TEST(PartialTrace, EmptyTraceIsIdentity) {
    std::mt19937_64 rng(3);
    const DensityOperator rho = random_mixture(3, 2, rng);
    const DensityOperator same = partial_trace(rho, std::vector<int>{});
    EXPECT_EQ(same.modes, rho.modes);
    EXPECT_EQ(max_abs(same.mat - rho.mat), 0.0);
}

TEST(PartialTrace, FullTraceGivesTrace) {
    std::mt19937_64 rng(4);
    const DensityOperator rho = random_mixture(3, 3, rng);
    const DensityOperator scalar = partial_trace(rho, std::vector<int>{1, 2, 3});
    ASSERT_EQ(scalar.dimension(), 1);
    EXPECT_NEAR(std::abs(scalar.mat(0, 0) - 1.0), 0.0, 1e-13);
}

TEST(PartialTrace, RejectsUnknownModes) {
    const DensityOperator rho = DensityOperator::from_pure(FermionicState::vacuum(2));
    EXPECT_THROW((void)partial_trace(rho, std::vector<int>{3}), std::invalid_argument);
}

TEST(PartialTrace, PreservesTraceAndHermiticity) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 4;
        const DensityOperator rho = random_mixture(n, 1 + trial % 3, rng);
        const std::vector<int> traced = random_subset(n, rng);
        const DensityOperator r = partial_trace(rho, traced);
        EXPECT_NEAR(std::abs(r.mat.trace() - 1.0), 0.0, 1e-12);
        EXPECT_LT(max_abs(r.mat - r.mat.adjoint()), 1e-13);
        EXPECT_NO_THROW(r.validate(1e-10));
    }
}

TEST(PartialTrace, MatchesMonomialExpectationsOfDenseOperators) {
    // Tr(rho_A |x><y|) = Tr(rho b†_x P_A b_y): the reduced state reproduces every
    // local monomial, evaluated here with dense ladder matrices only.
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 3;
        const DensityOperator rho = random_mixture(n, 2, rng);
        std::vector<int> kept = random_subset(n, rng);
        if (kept.empty()) kept = {1 + trial % n};
        const DensityOperator r = reduce_to(rho, kept);
        const Mask dim = Mask{1} << kept.size();
        for (Mask x = 0; x < dim; ++x) {
            for (Mask y = 0; y < dim; ++y) {
                const Eigen::MatrixXcd m = dense_monomial(n, modes_in(x, kept), modes_in(y, kept), kept);
                const Complex lhs = (rho.mat * m).trace();
                EXPECT_LT(std::abs(lhs - r.mat(y, x)), 1e-12) << "n=" << n << " x=" << x << " y=" << y;
            }
        }
    }
}

TEST(PartialTrace, AgreesWithConsistencyOracleOnRandomMixtures) {
    std::mt19937_64 rng(7);
    int compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 4;
        const DensityOperator rho = random_mixture(n, 1 + trial % 4, rng);
        for (const ModePartition& cut : all_bipartitions(n)) {
            for (const ModePartition& side : {cut, cut.swapped()}) {
                const DensityOperator fast = reduce_to(rho, side.kept());
                const DensityOperator slow = reduced_state_oracle(rho, side.kept());
                ASSERT_EQ(fast.modes, slow.modes);
                EXPECT_LT(max_abs(fast.mat - slow.mat), 1e-10) << "trial " << trial << " cut " << side.label();
                ++compared;
            }
        }
    }
    EXPECT_GT(compared, 1000);
}

TEST(PartialTrace, SequentialTracingMatchesJointTrace) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + trial % 3;
        const DensityOperator rho = random_mixture(n, 2, rng);
        const std::vector<int> traced = random_subset(n, rng);
        DensityOperator step = rho;
        for (auto it = traced.rbegin(); it != traced.rend(); ++it) step = partial_trace(step, std::vector<int>{*it});
        const DensityOperator joint = partial_trace(rho, traced);
        EXPECT_LT(max_abs(step.mat - joint.mat), 1e-13);
        EXPECT_EQ(step.modes, joint.modes);
    }
}

TEST(ReducePure, MatchesDensityRoute) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 80; ++trial) {
        const int n = 2 + trial % 5;
        const FermionicState psi = random_state(n, rng);
        std::vector<int> kept = random_subset(n, rng);
        const DensityOperator a = reduce_pure(psi, kept);
        const DensityOperator b = partial_trace(DensityOperator::from_pure(psi), complement(n, kept));
        EXPECT_EQ(a.modes, b.modes);
        EXPECT_LT(max_abs(a.mat - b.mat), 1e-13);
    }
}

TEST(EmbedOperator, LocalProjectorMatchesDenseMonomial) {
    std::mt19937_64 rng(10);
    const int n = 4;
    const std::vector<int> subset = {2, 4};
    for (Mask x = 0; x < 4; ++x) {
        for (Mask y = 0; y < 4; ++y) {
            Eigen::MatrixXcd local = Eigen::MatrixXcd::Zero(4, 4);
            local(x, y) = 1.0;
            const Eigen::MatrixXcd embedded = embed_operator(local, subset, n);
            const Eigen::MatrixXcd dense = dense_monomial(n, modes_in(x, subset), modes_in(y, subset), subset);
            EXPECT_LT(max_abs(embedded - dense), 1e-15);
        }
    }
    const DensityOperator rho = random_mixture(n, 2, rng);
    for (Mask x = 0; x < 4; ++x) {
        for (Mask y = 0; y < 4; ++y) {
            const Eigen::MatrixXcd dense = dense_monomial(n, modes_in(x, subset), modes_in(y, subset), subset);
            EXPECT_LT(std::abs(monomial_expectation(rho, subset, x, y) - (rho.mat * dense).trace()), 1e-13);
        }
    }
}

TEST(DensityOperator, MixtureValidation) {
    const FermionicState a = FermionicState::vacuum(2);
    const FermionicState b = FermionicState::basis(FockBasisState(2, 3));
    const std::vector<FermionicState> states = {a, b};
    const std::vector<double> bad = {0.5, 0.6};
    EXPECT_THROW((void)DensityOperator::mixture(states, bad), std::invalid_argument);
    const std::vector<double> good = {0.25, 0.75};
    const DensityOperator rho = DensityOperator::mixture(states, good);
    EXPECT_NEAR(rho.mat(3, 3).real(), 0.75, 1e-15);
    EXPECT_NO_THROW(rho.validate());
    EXPECT_THROW((void)DensityOperator::from_pure(FermionicState::vacuum(5), 4), std::invalid_argument);
}

}  // namespace
}  // namespace fermiqi
