// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/verifier.hpp"

#include "fermiqi/io.hpp"
#include "fermiqi/qubit_map.hpp"
#include "fermiqi/ssr.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace fermiqi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

unsigned worker_count(unsigned requested, int trials) {
    unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return std::min<unsigned>(w, static_cast<unsigned>(trials));
}

// Runs body(trial) for every trial on `workers` threads. The first exception in
// trial order is rethrown after all threads have joined.
template <typename Body>
void run_trials(int trials, unsigned workers, Body body) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
    std::atomic<int> next{0};
    auto loop = [&] {
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
            try {
                body(t);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        loop();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(loop);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<ModePartition> campaign_cuts(const CampaignConfig& cfg) {
    if (cfg.cuts.empty()) return all_bipartitions(cfg.n);
    for (const ModePartition& c : cfg.cuts) {
        if (c.modes() != cfg.n) throw std::invalid_argument("cut " + c.label() + " does not cover the campaign modes");
    }
    return cfg.cuts;
}

// Worst cut of one state. Ties keep the first cut in list order.
TrialResult score(const FermionicState& psi, const std::vector<ModePartition>& cuts, int trial) {
    TrialResult r{trial, -1.0, {}};
    for (const ModePartition& cut : cuts) {
        const double m = spectral_mismatch(psi, cut);
        if (m > r.max_mismatch) {
            r.max_mismatch = m;
            r.worst_cut = cut.label();
        }
    }
    return r;
}

Spectrum oracle_spectrum(const FermionicState& psi, const std::vector<int>& kept) {
    const DensityOperator rho = DensityOperator::from_pure(psi, kMaxMaskModes);
    return spectrum(reduced_state_oracle(rho, kept));
}

}  // namespace

std::string_view to_string(Sector s) noexcept {
    switch (s) {
        case Sector::Even: return "even";
        case Sector::Odd: return "odd";
        case Sector::Unrestricted: return "unrestricted";
    }
    return "?";
}

Sector parse_sector(std::string_view s) {
    if (s == "even") return Sector::Even;
    if (s == "odd") return Sector::Odd;
    if (s == "unrestricted") return Sector::Unrestricted;
    throw std::invalid_argument("sector must be even, odd or unrestricted, got \"" + std::string(s) + "\"");
}

void CampaignConfig::validate() const {
    if (n < 2) throw std::invalid_argument("campaigns need at least 2 modes");
    if (n > kMaxMaskModes) throw std::invalid_argument("mode count exceeds " + std::to_string(kMaxMaskModes));
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) throw std::invalid_argument("tolerance must be positive");
}

std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
    const auto t = static_cast<std::uint64_t>(trial);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    return std::mt19937_64(seq);
}

FermionicState sample_pure(int n, Sector sector, std::mt19937_64& rng) {
    check_mode_count(n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
    for (Eigen::Index z = 0; z < amps.size(); ++z) {
        const bool even = popcount(static_cast<Mask>(z)) % 2 == 0;
        if ((sector == Sector::Even && !even) || (sector == Sector::Odd && even)) continue;
        const double re = gauss(rng);
        const double im = gauss(rng);
        amps[z] = {re, im};
    }
    return FermionicState(n, std::move(amps)).normalized();
}

double oracle_mismatch(const FermionicState& psi, const ModePartition& cut) {
    return spectral_distance(oracle_spectrum(psi, cut.kept()), oracle_spectrum(psi, cut.traced()));
}

TheoremViolation::TheoremViolation(std::string state_json, std::string cut, double mismatch)
    : std::runtime_error("spectral mismatch " + format_number(mismatch) + " across cut " + cut +
                         " for a parity-definite state"),
      state_json_(std::move(state_json)),
      cut_(std::move(cut)),
      mismatch_(mismatch) {}

CampaignReport verify_theorem(const CampaignConfig& cfg) {
    cfg.validate();
    if (cfg.sector == Sector::Unrestricted) {
        throw std::invalid_argument("theorem campaigns need sector even or odd");
    }
    const auto t0 = Clock::now();
    const std::vector<ModePartition> cuts = campaign_cuts(cfg);

    CampaignReport rep;
    rep.n = cfg.n;
    rep.trials = cfg.trials;
    rep.seed = cfg.seed;
    rep.tolerance = cfg.tolerance;
    rep.sector = cfg.sector;
    rep.cut_count = cuts.size();
    rep.per_trial.resize(static_cast<std::size_t>(cfg.trials));
    std::vector<char> noise(static_cast<std::size_t>(cfg.trials), 0);

    run_trials(cfg.trials, worker_count(cfg.threads, cfg.trials), [&](int t) {
        auto rng = trial_rng(cfg.seed, t);
        const FermionicState psi = sample_pure(cfg.n, cfg.sector, rng);
        TrialResult r = score(psi, cuts, t);
        if (r.max_mismatch >= cfg.tolerance) {
            // Re-check every flagged cut on the oracle route before reporting.
            for (const ModePartition& cut : cuts) {
                if (spectral_mismatch(psi, cut) < cfg.tolerance) continue;
                const double m = oracle_mismatch(psi, cut);
                if (m >= cfg.tolerance) throw TheoremViolation(state_to_json(psi).dump(), cut.label(), m);
            }
            noise[static_cast<std::size_t>(t)] = 1;
        }
        rep.per_trial[static_cast<std::size_t>(t)] = std::move(r);
    });

    rep.max_mismatch = -1.0;
    for (const TrialResult& r : rep.per_trial) {
        if (r.max_mismatch > rep.max_mismatch) {
            rep.max_mismatch = r.max_mismatch;
            rep.worst_trial = r.trial;
            rep.worst_cut = r.worst_cut;
        }
    }
    rep.noise_flags = static_cast<int>(std::count(noise.begin(), noise.end(), 1));
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

FermionicState uniform_two_mode_benchmark(int n) {
    if (n < 2) throw std::invalid_argument("the two-mode benchmark needs at least 2 modes");
    FermionicState psi(n);
    for (Mask z = 0; z < 4; ++z) psi.set_amplitude(FockBasisState(n, z), 0.5);
    return psi;
}

CounterexampleReport find_counterexample(const CampaignConfig& cfg) {
    cfg.validate();
    if (cfg.sector != Sector::Unrestricted) {
        throw std::invalid_argument("counterexample search needs sector unrestricted");
    }
    const auto t0 = Clock::now();
    const std::vector<ModePartition> cuts = campaign_cuts(cfg);

    CounterexampleReport rep;
    rep.n = cfg.n;
    rep.trials = cfg.trials;
    rep.seed = cfg.seed;
    rep.per_trial.resize(static_cast<std::size_t>(cfg.trials));

    run_trials(cfg.trials, worker_count(cfg.threads, cfg.trials), [&](int t) {
        FermionicState psi;
        if (t == 0) {
            psi = uniform_two_mode_benchmark(cfg.n);
        } else {
            auto rng = trial_rng(cfg.seed, t);
            psi = sample_pure(cfg.n, Sector::Unrestricted, rng);
        }
        TrialResult r = score(psi, cuts, t);
        if (r.max_mismatch > 2.0 + 1e-9) {
            throw std::logic_error("spectral mismatch above 2 on cut " + r.worst_cut);
        }
        rep.per_trial[static_cast<std::size_t>(t)] = std::move(r);
    });

    rep.best_mismatch = -1.0;
    for (const TrialResult& r : rep.per_trial) {
        if (r.max_mismatch > rep.best_mismatch) {
            rep.best_mismatch = r.max_mismatch;
            rep.best_trial = r.trial;
            rep.best_cut = r.worst_cut;
        }
    }
    if (rep.best_trial == 0) {
        rep.best_state = uniform_two_mode_benchmark(cfg.n);
    } else {
        auto rng = trial_rng(cfg.seed, rep.best_trial);
        rep.best_state = sample_pure(cfg.n, Sector::Unrestricted, rng);
    }
    const auto best = std::find_if(cuts.begin(), cuts.end(), [&](const ModePartition& c) {
        return c.label() == rep.best_cut;
    });
    rep.oracle_mismatch = oracle_mismatch(rep.best_state, *best);
    rep.runtime_seconds = seconds_since(t0);
    return rep;
}

bool ExamplesReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ExampleCheck& c) { return c.pass; });
}

namespace {

class CheckList {
public:
    void add(std::string name, std::string expected_text, double expected, double computed, double tol) {
        const double err = std::abs(computed - expected);
        out_.push_back({std::move(name), std::move(expected_text), computed, err, tol, err <= tol});
    }
    // `error` already measures the deviation from the expected value.
    void add_error(std::string name, std::string expected_text, double error, double tol) {
        out_.push_back({std::move(name), std::move(expected_text), error, error, tol, error <= tol});
    }
    void add_flag(std::string name, std::string expected_text, bool ok) {
        out_.push_back({std::move(name), std::move(expected_text), ok ? 1.0 : 0.0, ok ? 0.0 : 1.0, 0.0, ok});
    }
    ExamplesReport take() { return {std::move(out_)}; }

private:
    std::vector<ExampleCheck> out_;
};

using Alpha = std::array<Complex, 8>;
enum : std::size_t { A0, A12, A13, A14, A23, A24, A34, A1234 };

Alpha random_alpha(std::mt19937_64& rng) {
    const FermionicState psi = sample_pure(4, Sector::Even, rng);
    Alpha a{};
    const auto patterns = even_four_mode_patterns();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = psi.amplitude(patterns[i]);
    return a;
}

Complex cj(Complex z) { return std::conj(z); }

// Closed forms of the pair off-diagonals (<0|ρ|1_i 1_j>, <1_i|ρ|1_j>) of an even four-mode state.
std::array<Complex, 2> closed_form_pair(const Alpha& a, int i, int j) {
    const int key = 10 * i + j;
    switch (key) {
        case 12: return {a[A0] * cj(a[A12]) + a[A34] * cj(a[A1234]), a[A13] * cj(a[A23]) + a[A14] * cj(a[A24])};
        case 34: return {a[A0] * cj(a[A34]) + a[A12] * cj(a[A1234]), a[A13] * cj(a[A14]) + a[A23] * cj(a[A24])};
        case 13: return {a[A0] * cj(a[A13]) - a[A24] * cj(a[A1234]), a[A14] * cj(a[A34]) - a[A12] * cj(a[A23])};
        case 24: return {a[A0] * cj(a[A24]) - a[A13] * cj(a[A1234]), a[A12] * cj(a[A14]) - a[A23] * cj(a[A34])};
        case 14: return {a[A0] * cj(a[A14]) + a[A23] * cj(a[A1234]), -a[A12] * cj(a[A24]) - a[A13] * cj(a[A34])};
        case 23: return {a[A0] * cj(a[A23]) + a[A14] * cj(a[A1234]), a[A12] * cj(a[A13]) + a[A24] * cj(a[A34])};
        default: throw std::invalid_argument("not a mode pair of four modes");
    }
}

struct Block2 {
    double trace;
    double det;
};

Block2 block_of(const Eigen::MatrixXcd& m, Eigen::Index p, Eigen::Index q) {
    return {(m(p, p) + m(q, q)).real(), (m(p, p) * m(q, q) - m(p, q) * m(q, p)).real()};
}

double sq(Complex z) { return std::norm(z); }

}  // namespace

ExamplesReport run_worked_examples(std::uint64_t seed) {
    CheckList checks;
    const double ln2 = std::numbers::ln2;

    // Two modes k = 1, k' = 2 with every amplitude 1/2.
    {
        const FermionicState psi = uniform_two_mode_benchmark(2);
        const ModePartition cut(2, {1}, {2});
        const CutMarginals m = cut_marginals(psi, cut);
        const Spectrum sk = spectrum(m.kept);
        const Spectrum skp = spectrum(m.traced);
        checks.add("two-mode state norm", "1", 1.0, psi.norm(), 1e-12);
        checks.add("rho_k <0|rho|1_k>", "1/2", 0.5, std::abs(m.kept.mat(0, 1)), 1e-12);
        checks.add("rho_k largest eigenvalue", "1", 1.0, sk.eigenvalues[0], 1e-12);
        checks.add("rho_k smallest eigenvalue", "0", 0.0, sk.eigenvalues[1], 1e-12);
        checks.add("rho_k' <0|rho|1_k'>", "0", 0.0, std::abs(m.traced.mat(0, 1)), 1e-12);
        checks.add("rho_k' largest eigenvalue", "1/2", 0.5, skp.eigenvalues[0], 1e-12);
        checks.add("rho_k' smallest eigenvalue", "1/2", 0.5, skp.eigenvalues[1], 1e-12);
        checks.add("entropy of rho_k", "0", 0.0, entropy_of(sk), 1e-12);
        checks.add("entropy of rho_k'", "ln 2", ln2, entropy_of(skp), 1e-12);
        checks.add("spectral mismatch k|k'", "1", 1.0, spectral_mismatch(psi, cut), 1e-12);
        checks.add("parity of the two-mode state", "mixed (2)", 2.0,
                   static_cast<double>(parity_check(psi) == ParityClass::Mixed ? 2 : 0), 0.0);
    }

    std::mt19937_64 rng = trial_rng(seed, 0);

    // General two-mode amplitudes: both single-mode marginals in closed form.
    {
        double err = 0.0;
        for (int t = 0; t < 50; ++t) {
            const FermionicState psi = sample_pure(2, Sector::Unrestricted, rng);
            const Complex g0 = psi.amplitude(0), g1 = psi.amplitude(1), g2 = psi.amplitude(2), g12 = psi.amplitude(3);
            const DensityOperator rho = DensityOperator::from_pure(psi);
            const DensityOperator rk = reduce_to(rho, std::vector<int>{1});
            const DensityOperator rkp = reduce_to(rho, std::vector<int>{2});
            err = std::max({err, std::abs(rk.mat(0, 0) - (sq(g0) + sq(g2))), std::abs(rk.mat(1, 1) - (sq(g1) + sq(g12))),
                            std::abs(rk.mat(0, 1) - (g0 * cj(g1) + g2 * cj(g12))),
                            std::abs(rkp.mat(0, 0) - (sq(g0) + sq(g1))), std::abs(rkp.mat(1, 1) - (sq(g2) + sq(g12))),
                            std::abs(rkp.mat(0, 1) - (g0 * cj(g2) - g1 * cj(g12)))});
        }
        checks.add_error("two-mode marginals vs closed form, 50 random states", "0", err, 1e-12);
    }

    // Even four-mode family.
    std::vector<Alpha> alphas;
    for (int t = 0; t < 200; ++t) alphas.push_back(random_alpha(rng));

    {
        double err = 0.0;
        for (const Alpha& a : alphas) {
            const FermionicState psi = even_four_mode_state(a);
            const DensityOperator r1 = reduce_pure(psi, std::vector<int>{1});
            const double occ = sq(a[A12]) + sq(a[A13]) + sq(a[A14]) + sq(a[A1234]);
            err = std::max({err, std::abs(r1.mat(1, 1) - occ), std::abs(r1.mat(0, 0) - (1.0 - occ)), std::abs(r1.mat(0, 1))});
        }
        checks.add_error("rho_1 is diagonal with mode-1 occupation, 200 states", "0", err, 1e-12);
    }

    {
        double err = 0.0;
        for (const Alpha& a : alphas) {
            const FermionicState psi = even_four_mode_state(a);
            for (const auto& [i, j] : four_mode_pairs()) {
                const auto num = pair_offdiagonals(psi, i, j);
                const auto ref = closed_form_pair(a, i, j);
                err = std::max({err, std::abs(num[0] - ref[0]), std::abs(num[1] - ref[1])});
            }
        }
        checks.add_error("pair off-diagonals vs closed forms, 6 pairs, 200 states", "0", err, 1e-12);
    }

    const SignTable table = derive_pair_sign_table();
    {
        double err = 0.0;
        for (const Alpha& a : alphas) {
            const FermionicState psi = even_four_mode_state(a);
            for (const OffDiagonalEntry& e : table) {
                const auto ref = closed_form_pair(a, e.i, e.j);
                err = std::max(err, std::abs(evaluate(e, psi) - ref[e.element == PairElement::VacuumPair ? 0 : 1]));
            }
        }
        checks.add_error("derived sign table vs closed forms, 200 states", "0", err, 1e-12);
    }

    {
        double err = 0.0;
        for (const Alpha& a : alphas) {
            const FermionicState psi = even_four_mode_state(a);
            const DensityOperator r12 = reduce_pure(psi, std::vector<int>{1, 2});
            const DensityOperator r34 = reduce_pure(psi, std::vector<int>{3, 4});
            const double even_tr = sq(a[A0]) + sq(a[A12]) + sq(a[A34]) + sq(a[A1234]);
            const double even_det = std::norm(a[A0] * a[A1234] - a[A12] * a[A34]);
            const double odd_tr = sq(a[A13]) + sq(a[A14]) + sq(a[A23]) + sq(a[A24]);
            const double odd_det = std::norm(a[A13] * a[A24] - a[A14] * a[A23]);
            for (const DensityOperator* r : {&r12, &r34}) {
                const Block2 e = block_of(r->mat, 0, 3);
                const Block2 o = block_of(r->mat, 1, 2);
                err = std::max({err, std::abs(e.trace - even_tr), std::abs(e.det - even_det),
                                std::abs(o.trace - odd_tr), std::abs(o.det - odd_det)});
            }
        }
        checks.add_error("characteristic polynomials of the 1,2|3,4 sector blocks, 200 states", "0", err, 1e-12);
    }

    {
        double worst = 0.0;
        for (const Alpha& a : alphas) {
            const FermionicState psi = even_four_mode_state(a);
            for (const ModePartition& cut : all_bipartitions(4)) worst = std::max(worst, spectral_mismatch(psi, cut));
        }
        checks.add_error("spectra match across all 7 bipartitions, 200 states", "0", worst, 1e-10);
    }

    // Phase constraints.
    const PhaseConstraintSystem sys = build_phase_constraints(table);
    {
        // Variables in the order φ0, φ12, φ13, φ14, φ23, φ24, φ34, φ1234; rows compared up to sign.
        const std::vector<std::pair<intlin::IntVector, int>> expected = {
            {{-1, 1, 0, 0, 0, 0, 1, -1}, 0},  // φ12 + φ34 - φ0 - φ1234 ≡ 0
            {{-1, 0, 1, 0, 0, 1, 0, -1}, 1},  // φ13 + φ24 - φ0 - φ1234 ≡ π
            {{-1, 0, 0, 1, 1, 0, 0, -1}, 0},  // φ14 + φ23 - φ0 - φ1234 ≡ 0
            {{0, 0, -1, 1, 1, -1, 0, 0}, 0},  // φ23 + φ14 - φ13 - φ24 ≡ 0
            {{0, 1, 0, -1, -1, 0, 1, 0}, 1},  // φ12 + φ34 - φ14 - φ23 ≡ π
            {{0, -1, 1, 0, 0, 1, -1, 0}, 0},  // φ13 + φ24 - φ12 - φ34 ≡ 0
        };
        int matched = 0;
        if (sys.rows.size() == expected.size() && sys.variables == even_four_mode_patterns()) {
            for (std::size_t r = 0; r < expected.size(); ++r) {
                intlin::IntVector neg = expected[r].first;
                for (auto& v : neg) v = -v;
                const PhaseConstraint& row = sys.rows[r];
                if (row.parity == expected[r].second && (row.coeffs == expected[r].first || row.coeffs == neg)) ++matched;
            }
        }
        checks.add("generic system rows matching the six congruences in order", "6", 6.0, matched, 0.0);
    }

    const SolvabilityWitness generic = decide_solvability(sys);
    {
        checks.add_flag("generic system verdict", "contradiction", generic.verdict == Verdict::Contradiction);
        const intlin::IntVector want = {1, 0, -1, 0, -1, 0};
        checks.add_flag("contradiction witness", "(i) - (iii) - (v)", generic.combination == want);
        const intlin::IntMatrix a = sys.matrix();
        bool null = !generic.combination.empty();
        long long parity = 0;
        if (null) {
            const intlin::IntVector ua = intlin::left_multiply(generic.combination, a, sys.variables.size());
            null = std::all_of(ua.begin(), ua.end(), [](auto v) { return v == 0; });
            parity = intlin::dot(generic.combination, sys.parities());
        }
        checks.add_flag("witness annihilates the coefficient matrix", "u.A = 0", null);
        checks.add("witness parity sum", "odd", 1.0, static_cast<double>(((parity % 2) + 2) % 2), 0.0);
    }

    {
        const double inv = 1.0 / std::sqrt(8.0 + 1 + 4 + 9 + 16 + 25 + 36 + 49);
        Alpha a{};
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = Complex(1.0, static_cast<double>(i)) * inv;
        const FaithfulnessReport f = faithfulness_check(even_four_mode_state(a));
        checks.add_flag("generic state (1+i k)/norm verdict", "contradiction", f.verdict == Verdict::Contradiction);
        const MarginalDeviation dev =
            compare_marginals(even_four_mode_state(a), zero_phases(even_four_mode_state(a)), all_mode_subsets(4));
        checks.add_flag("zero-phase qubit marginals deviate by more than 1e-6", "> 1e-6", dev.max_offdiag_error > 1e-6);
        checks.add("zero-phase qubit marginals keep the diagonal", "0", 0.0, dev.max_diag_error, 1e-12);
    }

    {
        Alpha a{};
        a[A0] = a[A1234] = 1.0 / std::numbers::sqrt2;
        const FaithfulnessReport f = faithfulness_check(even_four_mode_state(a));
        checks.add_flag("restricted state a0 = a1234 = 1/sqrt2 verdict", "solvable", f.verdict == Verdict::Solvable);
        checks.add_error("restricted state qubit-route off-diagonal error", "0", f.max_offdiag_error.value_or(1.0), 1e-10);
        checks.add_flag("restricted state verified", "true", f.verified);
    }

    return checks.take();
}

}  // namespace fermiqi
