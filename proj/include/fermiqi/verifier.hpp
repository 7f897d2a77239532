// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file verifier.hpp
 * @brief Randomised spectral-match campaigns and the worked-example checks.
 *
 * Every trial draws its own generator from (seed, trial index), so results do
 * not depend on how trials are scheduled across threads.
 */

#pragma once

#include "fermiqi/fock.hpp"
#include "fermiqi/reductions.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fermiqi {

enum class Sector { Even, Odd, Unrestricted };

[[nodiscard]] std::string_view to_string(Sector s) noexcept;
/// Throws std::invalid_argument for anything but even|odd|unrestricted.
[[nodiscard]] Sector parse_sector(std::string_view s);

struct CampaignConfig {
    int n = 2;
    int trials = 1;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    Sector sector = Sector::Even;
    std::vector<ModePartition> cuts;  ///< empty means every bipartition
    unsigned threads = 0;             ///< 0 picks the hardware concurrency

    /// Throws std::invalid_argument on trials < 1, tolerance <= 0 or n < 2.
    void validate() const;
};

struct TrialResult {
    int trial = 0;
    double max_mismatch = 0.0;
    std::string worst_cut;
};

struct CampaignReport {
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    Sector sector = Sector::Even;
    std::size_t cut_count = 0;
    std::vector<TrialResult> per_trial;
    double max_mismatch = 0.0;
    int worst_trial = 0;
    std::string worst_cut;
    int violations = 0;
    /// Trials whose mismatch exceeded the tolerance on the fast route but not
    /// on the consistency-oracle route.
    int noise_flags = 0;
    double runtime_seconds = 0.0;
};

/// Generator for one trial, derived from (seed, trial).
[[nodiscard]] std::mt19937_64 trial_rng(std::uint64_t seed, int trial);

/// Independent standard complex Gaussians on the sector's basis states, normalised.
[[nodiscard]] FermionicState sample_pure(int n, Sector sector, std::mt19937_64& rng);

/// Spectral mismatch computed from consistency-oracle marginals.
[[nodiscard]] double oracle_mismatch(const FermionicState& psi, const ModePartition& cut);

/// A confirmed spectral mismatch for a parity-definite state.
class TheoremViolation : public std::runtime_error {
public:
    TheoremViolation(std::string state_json, std::string cut, double mismatch);
    [[nodiscard]] const std::string& state_json() const noexcept { return state_json_; }
    [[nodiscard]] const std::string& cut() const noexcept { return cut_; }
    [[nodiscard]] double mismatch() const noexcept { return mismatch_; }

private:
    std::string state_json_;
    std::string cut_;
    double mismatch_;
};

/// Requires sector even or odd. Throws TheoremViolation when a mismatch at or
/// above the tolerance survives the oracle re-check.
[[nodiscard]] CampaignReport verify_theorem(const CampaignConfig& cfg);

struct CounterexampleReport {
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    int best_trial = 0;
    std::string best_cut;
    double best_mismatch = 0.0;
    double oracle_mismatch = 0.0;  ///< best state re-scored through the oracle
    FermionicState best_state;
    std::vector<TrialResult> per_trial;
    double runtime_seconds = 0.0;
};

/// The two-mode benchmark with every amplitude 1/2 on modes 1 and 2, vacuum elsewhere.
[[nodiscard]] FermionicState uniform_two_mode_benchmark(int n);

/// Requires sector unrestricted. Trial 0 is uniform_two_mode_benchmark.
[[nodiscard]] CounterexampleReport find_counterexample(const CampaignConfig& cfg);

struct ExampleCheck {
    std::string name;
    std::string expected;
    double computed = 0.0;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ExamplesReport {
    std::vector<ExampleCheck> checks;
    [[nodiscard]] bool all_pass() const;
};

/// Recomputes every worked number of the two-mode counterexample and the
/// even four-mode faithfulness analysis.
[[nodiscard]] ExamplesReport run_worked_examples(std::uint64_t seed = 2016);

}  // namespace fermiqi
