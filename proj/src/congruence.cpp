// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/congruence.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace fermiqi::intlin {

namespace {

Integer checked_mul(Integer a, Integer b) {
    Integer out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("integer overflow in congruence solver");
    return out;
}

Integer checked_sub(Integer a, Integer b) {
    Integer out = 0;
    if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("integer overflow in congruence solver");
    return out;
}

Integer checked_add(Integer a, Integer b) {
    Integer out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("integer overflow in congruence solver");
    return out;
}

// row_dst -= q * row_src
void axpy(IntVector& dst, const IntVector& src, Integer q) {
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = checked_sub(dst[k], checked_mul(q, src[k]));
}

void negate(IntVector& v) {
    for (Integer& x : v) x = checked_sub(0, x);
}

void check_shape(const IntMatrix& a, int cols) {
    if (cols < 0) throw std::invalid_argument("negative column count");
    for (const IntVector& row : a) {
        if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("ragged coefficient matrix");
    }
}

}  // namespace

RowEchelon unimodular_row_reduce(const IntMatrix& a, int cols) {
    check_shape(a, cols);
    const int m = static_cast<int>(a.size());
    RowEchelon re;
    re.echelon = a;
    re.transform.assign(static_cast<std::size_t>(m), IntVector(static_cast<std::size_t>(m), 0));
    for (int i = 0; i < m; ++i) re.transform[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;

    auto& h = re.echelon;
    auto& t = re.transform;
    int r = 0;
    for (int c = 0; c < cols && r < m; ++c) {
        const auto col = static_cast<std::size_t>(c);
        while (true) {
            int best = -1;
            for (int i = r; i < m; ++i) {
                const Integer v = h[static_cast<std::size_t>(i)][col];
                if (v != 0 && (best < 0 || std::llabs(v) < std::llabs(h[static_cast<std::size_t>(best)][col]))) best = i;
            }
            if (best < 0) break;
            std::swap(h[static_cast<std::size_t>(r)], h[static_cast<std::size_t>(best)]);
            std::swap(t[static_cast<std::size_t>(r)], t[static_cast<std::size_t>(best)]);
            const auto pr = static_cast<std::size_t>(r);
            bool cleared = true;
            for (int i = r + 1; i < m; ++i) {
                const auto ri = static_cast<std::size_t>(i);
                if (h[ri][col] == 0) continue;
                const Integer q = h[ri][col] / h[pr][col];
                axpy(h[ri], h[pr], q);
                axpy(t[ri], t[pr], q);
                if (h[ri][col] != 0) cleared = false;
            }
            if (cleared) break;
        }
        const auto pr = static_cast<std::size_t>(r);
        if (h[pr][col] == 0) continue;
        if (h[pr][col] < 0) {
            negate(h[pr]);
            negate(t[pr]);
        }
        re.pivot_columns.push_back(c);
        ++r;
    }
    re.rank = r;
    return re;
}

IntMatrix left_null_basis(const IntMatrix& a, int cols) {
    const RowEchelon re = unimodular_row_reduce(a, cols);
    return {re.transform.begin() + re.rank, re.transform.end()};
}

IntVector left_multiply(const IntVector& u, const IntMatrix& a, int cols) {
    check_shape(a, cols);
    if (u.size() != a.size()) throw std::invalid_argument("multiplier length differs from row count");
    IntVector out(static_cast<std::size_t>(cols), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = checked_add(out[k], checked_mul(u[i], a[i][k]));
    }
    return out;
}

Integer dot(const IntVector& u, const std::vector<int>& parity) {
    if (u.size() != parity.size()) throw std::invalid_argument("multiplier length differs from row count");
    Integer s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) s = checked_add(s, checked_mul(u[i], parity[i]));
    return s;
}

ParityCongruenceResult solve_parity_congruences(const IntMatrix& a, const std::vector<int>& parity, int cols) {
    if (parity.size() != a.size()) throw std::invalid_argument("one parity bit per congruence required");
    for (int p : parity) {
        if (p != 0 && p != 1) throw std::invalid_argument("parity bits must be 0 or 1");
    }
    const RowEchelon re = unimodular_row_reduce(a, cols);
    const int m = static_cast<int>(a.size());

    // b = T·r
    IntVector b(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) b[static_cast<std::size_t>(i)] = dot(re.transform[static_cast<std::size_t>(i)], parity);

    ParityCongruenceResult res;
    for (int i = re.rank; i < m; ++i) {
        if (b[static_cast<std::size_t>(i)] % 2 != 0) {
            res.witness = re.transform[static_cast<std::size_t>(i)];
            return res;
        }
    }

    // H_top·θ = b_top by back substitution, free variables at zero.
    res.solvable = true;
    res.solution.assign(static_cast<std::size_t>(cols), 0.0);
    for (int i = re.rank - 1; i >= 0; --i) {
        const auto ri = static_cast<std::size_t>(i);
        const auto pc = static_cast<std::size_t>(re.pivot_columns[ri]);
        double acc = static_cast<double>(b[ri]);
        for (std::size_t k = pc + 1; k < static_cast<std::size_t>(cols); ++k) {
            acc -= static_cast<double>(re.echelon[ri][k]) * res.solution[k];
        }
        res.solution[pc] = acc / static_cast<double>(re.echelon[ri][pc]);
    }
    return res;
}

}  // namespace fermiqi::intlin
