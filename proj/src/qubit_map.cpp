// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/qubit_map.hpp"

#include "fermiqi/reductions.hpp"
#include "fermiqi/ssr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fermiqi {

namespace {

constexpr int kFourModes = 4;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Particle number first, then lexicographic mode lists.
bool pattern_order(const FockBasisState& a, const FockBasisState& b) {
    if (a.particle_count() != b.particle_count()) return a.particle_count() < b.particle_count();
    return a.occupied_modes() < b.occupied_modes();
}

std::string roman(std::size_t k) {
    static const char* const numerals[] = {"i",   "ii",   "iii", "iv", "v",   "vi",   "vii",
                                           "viii", "ix", "x",   "xi", "xii", "xiii", "xiv"};
    if (k < std::size(numerals)) return numerals[k];
    return "r" + std::to_string(k + 1);
}

std::string pattern_digits(const FockBasisState& p) {
    std::string s;
    for (int k : p.occupied_modes()) s += std::to_string(k);
    return s.empty() ? "0" : s;
}

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

struct SourceRef {
    std::size_t entry = 0;
    std::size_t first = 0;
    std::size_t second = 0;
};

struct RawSystem {
    PhaseConstraintSystem sys;
    std::vector<std::vector<SourceRef>> refs;
};

void validate_table(const SignTable& table) {
    int n = -1;
    for (const OffDiagonalEntry& e : table) {
        for (std::size_t t = 0; t < e.terms.size(); ++t) {
            const ProductTerm& term = e.terms[t];
            if (term.sign != 1 && term.sign != -1) throw std::invalid_argument("sign table: signs must be +1 or -1");
            if (term.ket.modes() == 0 || term.ket.modes() != term.bra.modes()) {
                throw std::invalid_argument("sign table: inconsistent mode counts");
            }
            if (n >= 0 && term.ket.modes() != n) throw std::invalid_argument("sign table: inconsistent mode counts");
            n = term.ket.modes();
            for (std::size_t u = 0; u < t; ++u) {
                if (e.terms[u].ket == term.ket && e.terms[u].bra == term.bra) {
                    throw std::invalid_argument("sign table: duplicate product in " + e.label());
                }
            }
        }
    }
}

RawSystem build_raw(const SignTable& table) {
    validate_table(table);
    RawSystem raw;
    auto& vars = raw.sys.variables;
    for (const OffDiagonalEntry& e : table) {
        for (const ProductTerm& t : e.terms) {
            for (const FockBasisState& p : {t.ket, t.bra}) {
                if (std::find(vars.begin(), vars.end(), p) == vars.end()) vars.push_back(p);
            }
        }
    }
    std::sort(vars.begin(), vars.end(), pattern_order);
    auto var_index = [&](const FockBasisState& p) {
        return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), p) - vars.begin());
    };

    for (std::size_t ei = 0; ei < table.size(); ++ei) {
        const OffDiagonalEntry& e = table[ei];
        for (std::size_t j = 1; j < e.terms.size(); ++j) {
            const ProductTerm& s = e.terms[0];
            const ProductTerm& t = e.terms[j];
            // Qubit side: e^{i(φa-φb)} α_a α_b^* + e^{i(φc-φd)} α_c α_d^*. Matching the
            // magnitude for all α forces φb + φc - φa - φd ≡ 0 or π.
            intlin::IntVector c(vars.size(), 0);
            c[var_index(s.bra)] += 1;
            c[var_index(t.ket)] += 1;
            c[var_index(s.ket)] -= 1;
            c[var_index(t.bra)] -= 1;
            const int parity = s.sign == t.sign ? 0 : 1;
            if (std::all_of(c.begin(), c.end(), [](auto v) { return v == 0; })) {
                if (parity == 1) {
                    throw std::invalid_argument("sign table: entry " + e.label() + " cancels identically");
                }
                continue;
            }
            intlin::IntVector neg(c.size());
            std::transform(c.begin(), c.end(), neg.begin(), [](auto v) { return -v; });

            const SourceRef ref{ei, 0, j};
            auto& rows = raw.sys.rows;
            auto it = std::find_if(rows.begin(), rows.end(), [&](const PhaseConstraint& r) {
                return r.parity == parity && (r.coeffs == c || r.coeffs == neg);
            });
            if (it != rows.end()) {
                it->sources.push_back(e.label());
                raw.refs[static_cast<std::size_t>(it - rows.begin())].push_back(ref);
            } else {
                rows.push_back({std::move(c), parity, roman(rows.size()), {e.label()}});
                raw.refs.push_back({ref});
            }
        }
    }
    return raw;
}

}  // namespace

std::string qubit_label(Mask bits, int n) {
    std::string s;
    for (int q = 1; q <= n; ++q) s += (bits & mode_bit(q)) ? '1' : '0';
    return s;
}

QubitState jw_map(const FermionicState& psi, const PhaseAssignment& phases) {
    QubitState q{psi.modes(), psi.amplitudes()};
    for (Mask z = 0; z < static_cast<Mask>(psi.dimension()); ++z) {
        const Complex a = psi.amplitude(z);
        const auto it = phases.find(FockBasisState(psi.modes(), z));
        if (it == phases.end()) {
            if (std::abs(a) > 1e-12) {
                throw std::invalid_argument("no phase given for supported pattern " +
                                            phase_name(FockBasisState(psi.modes(), z)));
            }
            continue;
        }
        if (!std::isfinite(it->second)) throw std::invalid_argument("phase angles must be finite");
        q.amps[z] = std::polar(1.0, it->second) * a;
    }
    return q;
}

Eigen::MatrixXcd qubit_density(const QubitState& q) { return q.amps * q.amps.adjoint(); }

Eigen::MatrixXcd qubit_partial_trace(const Eigen::MatrixXcd& rho, int n, std::span<const int> traced) {
    check_mode_count(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("qubit density must be 2^n x 2^n");
    Mask tmask = 0;
    for (int q : traced) {
        check_mode_index(n, q);
        if (tmask & mode_bit(q)) throw std::invalid_argument("duplicate traced qubit");
        tmask |= mode_bit(q);
    }
    const Mask kmask = static_cast<Mask>(dim - 1) & ~tmask;
    const Mask kdim = Mask{1} << popcount(kmask);
    const Mask tdim = Mask{1} << popcount(tmask);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kdim, kdim);
    for (Mask t = 0; t < tdim; ++t) {
        const Mask tz = deposit_bits(t, tmask);
        for (Mask a = 0; a < kdim; ++a) {
            for (Mask b = 0; b < kdim; ++b) out(a, b) += rho(deposit_bits(a, kmask) | tz, deposit_bits(b, kmask) | tz);
        }
    }
    return out;
}

std::string OffDiagonalEntry::label() const {
    std::ostringstream os;
    os << '(' << i << ',' << j << ") ";
    if (element == PairElement::VacuumPair) {
        os << "<0|rho|1_" << i << " 1_" << j << '>';
    } else {
        os << "<1_" << i << "|rho|1_" << j << '>';
    }
    return os.str();
}

std::vector<std::array<int, 2>> four_mode_pairs() { return {{1, 2}, {3, 4}, {1, 3}, {2, 4}, {1, 4}, {2, 3}}; }

std::vector<FockBasisState> even_four_mode_patterns() {
    std::vector<FockBasisState> out;
    for (Mask m = 0; m < 16; ++m) {
        if (popcount(m) % 2 == 0) out.emplace_back(kFourModes, m);
    }
    std::sort(out.begin(), out.end(), pattern_order);
    return out;
}

FermionicState even_four_mode_state(std::span<const Complex> alpha) {
    if (alpha.size() != 8) throw std::invalid_argument("expected 8 even-sector coefficients");
    FermionicState psi(kFourModes);
    const auto patterns = even_four_mode_patterns();
    for (std::size_t i = 0; i < patterns.size(); ++i) psi.set_amplitude(patterns[i], alpha[i]);
    return psi;
}

SignTable derive_pair_sign_table() {
    const auto patterns = even_four_mode_patterns();
    SignTable table;
    for (PairElement element : {PairElement::VacuumPair, PairElement::SingleSingle}) {
        for (const auto& [i, j] : four_mode_pairs()) {
            const Mask pair = mode_bit(i) | mode_bit(j);
            const Mask traced = 0xFu & ~pair;
            const Mask want_ket = element == PairElement::VacuumPair ? 0 : mode_bit(i);
            const Mask want_bra = element == PairElement::VacuumPair ? pair : mode_bit(j);
            OffDiagonalEntry entry{i, j, element, {}};
            for (const FockBasisState& x : patterns) {
                for (const FockBasisState& y : patterns) {
                    if ((x.mask() & traced) != (y.mask() & traced)) continue;
                    if ((x.mask() & pair) != want_ket || (y.mask() & pair) != want_bra) continue;
                    const int sign = block_sort_sign(x.mask(), traced) * block_sort_sign(y.mask(), traced);
                    entry.terms.push_back({sign, x, y});
                }
            }
            std::stable_sort(entry.terms.begin(), entry.terms.end(),
                             [](const ProductTerm& a, const ProductTerm& b) { return a.sign > b.sign; });
            table.push_back(std::move(entry));
        }
    }
    return table;
}

Complex evaluate(const OffDiagonalEntry& entry, const FermionicState& psi) {
    Complex acc = 0.0;
    for (const ProductTerm& t : entry.terms) {
        acc += static_cast<double>(t.sign) * psi.amplitude(t.ket) * std::conj(psi.amplitude(t.bra));
    }
    return acc;
}

std::array<Complex, 2> pair_offdiagonals(const FermionicState& psi, int i, int j) {
    if (psi.modes() != kFourModes) throw std::invalid_argument("pair off-diagonals need a four-mode state");
    check_mode_index(kFourModes, i);
    check_mode_index(kFourModes, j);
    if (i >= j) throw std::invalid_argument("pair must satisfy i < j");
    const std::vector<int> kept{i, j};
    const DensityOperator m = reduce_to(DensityOperator::from_pure(psi), kept);
    // Local basis: 0 -> |0>, 1 -> |1_i>, 2 -> |1_j>, 3 -> |1_i 1_j>.
    return {m.mat(0, 3), m.mat(1, 2)};
}

intlin::IntMatrix PhaseConstraintSystem::matrix() const {
    intlin::IntMatrix a;
    a.reserve(rows.size());
    for (const PhaseConstraint& r : rows) a.push_back(r.coeffs);
    return a;
}

std::vector<int> PhaseConstraintSystem::parities() const {
    std::vector<int> p;
    p.reserve(rows.size());
    for (const PhaseConstraint& r : rows) p.push_back(r.parity);
    return p;
}

std::string phase_name(const FockBasisState& pattern) { return "φ" + pattern_digits(pattern); }

std::string PhaseConstraintSystem::describe(std::size_t row) const {
    const PhaseConstraint& r = rows.at(row);
    std::ostringstream os;
    bool first = true;
    // Positive terms first, the way the congruences are usually written.
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t v = 0; v < variables.size(); ++v) {
            const intlin::Integer c = r.coeffs[v];
            if (c == 0 || (pass == 0) != (c > 0)) continue;
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            const intlin::Integer mag = c > 0 ? c : -c;
            if (mag != 1) os << mag;
            os << phase_name(variables[v]);
            first = false;
        }
    }
    if (first) os << "0";
    os << " ≡ " << (r.parity ? "π" : "0") << " (mod 2π)";
    return os.str();
}

PhaseConstraintSystem build_phase_constraints(const SignTable& table) { return build_raw(table).sys; }

PhaseConstraintSystem build_phase_constraints(const SignTable& table, const FermionicState& psi, double tol) {
    RawSystem raw = build_raw(table);
    auto active = [&](const SourceRef& ref) {
        const OffDiagonalEntry& e = table[ref.entry];
        for (std::size_t k : {ref.first, ref.second}) {
            const ProductTerm& t = e.terms[k];
            if (std::abs(psi.amplitude(t.ket) * std::conj(psi.amplitude(t.bra))) <= tol) return false;
        }
        return true;
    };

    const std::vector<FockBasisState> support = psi.support(tol);
    std::vector<std::size_t> keep_vars;
    for (std::size_t v = 0; v < raw.sys.variables.size(); ++v) {
        if (std::find(support.begin(), support.end(), raw.sys.variables[v]) != support.end()) keep_vars.push_back(v);
    }

    PhaseConstraintSystem out;
    for (std::size_t v : keep_vars) out.variables.push_back(raw.sys.variables[v]);
    // Supported patterns that never enter the table still need a phase.
    for (const FockBasisState& p : support) {
        if (std::find(out.variables.begin(), out.variables.end(), p) == out.variables.end()) out.variables.push_back(p);
    }
    std::sort(out.variables.begin(), out.variables.end(), pattern_order);

    for (std::size_t r = 0; r < raw.sys.rows.size(); ++r) {
        const PhaseConstraint& row = raw.sys.rows[r];
        PhaseConstraint kept{{}, row.parity, row.label, {}};
        for (std::size_t s = 0; s < raw.refs[r].size(); ++s) {
            if (active(raw.refs[r][s])) kept.sources.push_back(row.sources[s]);
        }
        if (kept.sources.empty()) continue;
        kept.coeffs.assign(out.variables.size(), 0);
        for (std::size_t v = 0; v < raw.sys.variables.size(); ++v) {
            if (row.coeffs[v] == 0) continue;
            auto it = std::find(out.variables.begin(), out.variables.end(), raw.sys.variables[v]);
            if (it == out.variables.end()) throw std::logic_error("active congruence refers to an unsupported pattern");
            kept.coeffs[static_cast<std::size_t>(it - out.variables.begin())] = row.coeffs[v];
        }
        out.rows.push_back(std::move(kept));
    }
    return out;
}

std::string_view to_string(Verdict v) noexcept { return v == Verdict::Solvable ? "solvable" : "contradiction"; }

namespace {

void normalise_sign(intlin::IntVector& u) {
    for (intlin::Integer x : u) {
        if (x == 0) continue;
        if (x < 0) std::transform(u.begin(), u.end(), u.begin(), [](auto v) { return -v; });
        return;
    }
}

// Looks for an odd row whose left side is an integer combination of earlier
// parity-0 rows; that combination is the most readable contradiction.
std::optional<intlin::IntVector> derivation_witness(const PhaseConstraintSystem& sys) {
    const int cols = static_cast<int>(sys.variables.size());
    for (std::size_t o = 0; o < sys.rows.size(); ++o) {
        if (sys.rows[o].parity == 0) continue;
        std::vector<std::size_t> idx;
        for (std::size_t e = 0; e < o; ++e) {
            if (sys.rows[e].parity == 0) idx.push_back(e);
        }
        idx.push_back(o);
        intlin::IntMatrix sub;
        for (std::size_t k : idx) sub.push_back(sys.rows[k].coeffs);
        for (const intlin::IntVector& u : intlin::left_null_basis(sub, cols)) {
            if (u.back() % 2 == 0) continue;
            intlin::IntVector full(sys.rows.size(), 0);
            for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = u[k];
            return full;
        }
    }
    return std::nullopt;
}

}  // namespace

SolvabilityWitness decide_solvability(const PhaseConstraintSystem& sys) {
    const int cols = static_cast<int>(sys.variables.size());
    const intlin::IntMatrix a = sys.matrix();
    const std::vector<int> r = sys.parities();
    const intlin::ParityCongruenceResult res = intlin::solve_parity_congruences(a, r, cols);

    SolvabilityWitness w;
    if (res.solvable) {
        w.verdict = Verdict::Solvable;
        for (std::size_t v = 0; v < sys.variables.size(); ++v) {
            w.phases[sys.variables[v]] = wrap_angle(std::numbers::pi * res.solution[v]);
        }
        return w;
    }
    w.verdict = Verdict::Contradiction;
    w.combination = derivation_witness(sys).value_or(res.witness);
    normalise_sign(w.combination);
    const intlin::IntVector zero = intlin::left_multiply(w.combination, a, cols);
    if (std::any_of(zero.begin(), zero.end(), [](auto v) { return v != 0; }) ||
        intlin::dot(w.combination, r) % 2 == 0) {
        throw std::logic_error("contradiction witness failed verification");
    }
    return w;
}

double congruence_residual(const PhaseConstraintSystem& sys, const PhaseAssignment& phases) {
    double worst = 0.0;
    for (const PhaseConstraint& row : sys.rows) {
        double v = -row.parity * std::numbers::pi;
        for (std::size_t k = 0; k < sys.variables.size(); ++k) {
            if (row.coeffs[k] == 0) continue;
            v += static_cast<double>(row.coeffs[k]) * phases.at(sys.variables[k]);
        }
        worst = std::max(worst, std::abs(std::remainder(v, kTwoPi)));
    }
    return worst;
}

std::vector<std::vector<int>> all_mode_subsets(int n) {
    check_mode_count(n);
    std::vector<std::vector<int>> out;
    for (Mask m = 1; m < (Mask{1} << n); ++m) out.push_back(modes_of(m));
    return out;
}

PhaseAssignment zero_phases(const FermionicState& psi) {
    PhaseAssignment p;
    for (const FockBasisState& b : psi.support()) p[b] = 0.0;
    return p;
}

MarginalDeviation compare_marginals(const FermionicState& psi, const PhaseAssignment& phases,
                                    std::span<const std::vector<int>> subsets) {
    const int n = psi.modes();
    const Eigen::MatrixXcd qrho = qubit_density(jw_map(psi, phases));
    const Mask full = (Mask{1} << n) - 1;
    MarginalDeviation dev;
    for (const std::vector<int>& kept : subsets) {
        const DensityOperator f = reduce_pure(psi, kept);
        const std::vector<int> traced = modes_of(full & ~mask_of(kept));
        const Eigen::MatrixXcd q = qubit_partial_trace(qrho, n, traced);
        for (Eigen::Index a = 0; a < q.rows(); ++a) {
            for (Eigen::Index b = 0; b < q.cols(); ++b) {
                if (a == b) {
                    dev.max_diag_error = std::max(dev.max_diag_error, std::abs(f.mat(a, b) - q(a, b)));
                } else {
                    dev.max_offdiag_error =
                        std::max(dev.max_offdiag_error, std::abs(std::abs(f.mat(a, b)) - std::abs(q(a, b))));
                }
            }
        }
    }
    return dev;
}

FaithfulnessReport faithfulness_check(const FermionicState& psi, ActivationMode mode) {
    if (psi.modes() != kFourModes) throw std::invalid_argument("faithfulness check needs a four-mode state");
    if (!psi.is_normalized(1e-10)) throw std::invalid_argument("faithfulness check needs a normalized state");
    if (parity_check(psi) != ParityClass::Even) throw std::invalid_argument("faithfulness check needs an even state");

    const SignTable table = derive_pair_sign_table();
    FaithfulnessReport rep;
    rep.mode = mode;
    rep.system = mode == ActivationMode::Generic ? build_phase_constraints(table) : build_phase_constraints(table, psi);
    for (const PhaseConstraint& row : rep.system.rows) rep.activated_rows.push_back(row.label);

    const SolvabilityWitness w = decide_solvability(rep.system);
    rep.verdict = w.verdict;
    if (w.verdict == Verdict::Contradiction) {
        rep.witness = w.combination;
        return rep;
    }
    rep.phases = w.phases;
    const auto subsets = all_mode_subsets(kFourModes);
    const MarginalDeviation dev = compare_marginals(psi, rep.phases, subsets);
    rep.max_diag_error = dev.max_diag_error;
    rep.max_offdiag_error = dev.max_offdiag_error;
    rep.verified = dev.max_diag_error <= 1e-10 && dev.max_offdiag_error <= 1e-10;
    return rep;
}

}  // namespace fermiqi
