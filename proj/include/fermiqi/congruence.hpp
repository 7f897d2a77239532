// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file congruence.hpp
 * @brief Exact integer linear algebra for phase congruences
 *        A·φ ≡ r·π (mod 2π), with φ real and r ∈ {0,1}.
 *
 * Dividing by π turns the system into A·θ = r + 2n for real θ and integer n.
 * It is unsolvable exactly when some integer u with u·A = 0 has u·r odd.
 * The left null lattice is read off a unimodular row reduction T·A = H, so
 * the basis it yields is saturated and checking its vectors is sufficient.
 */

#pragma once

#include <cstdint>
#include <vector>

namespace fermiqi::intlin {

using Integer = std::int64_t;
using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;

/// T·A = H with T unimodular and H in row echelon form; rows rank..m-1 of H vanish.
struct RowEchelon {
    IntMatrix echelon;
    IntMatrix transform;
    std::vector<int> pivot_columns;
    int rank = 0;
};

/// Fraction-free reduction using gcd row operations. All rows of `a` must
/// have `cols` entries. Throws std::overflow_error on 64-bit overflow.
[[nodiscard]] RowEchelon unimodular_row_reduce(const IntMatrix& a, int cols);

/// Saturated integer basis of {u : u·A = 0}.
[[nodiscard]] IntMatrix left_null_basis(const IntMatrix& a, int cols);

[[nodiscard]] IntVector left_multiply(const IntVector& u, const IntMatrix& a, int cols);
[[nodiscard]] Integer dot(const IntVector& u, const std::vector<int>& parity);

struct ParityCongruenceResult {
    bool solvable = false;
    IntVector witness;              ///< u with u·A = 0 and u·r odd, when unsolvable
    std::vector<double> solution;   ///< θ in units of π, free variables 0, when solvable
};

/// Decides A·θ ≡ r (mod 2) over real θ.
[[nodiscard]] ParityCongruenceResult solve_parity_congruences(const IntMatrix& a, const std::vector<int>& parity,
                                                              int cols);

}  // namespace fermiqi::intlin
