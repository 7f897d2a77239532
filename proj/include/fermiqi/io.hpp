// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief State and density-matrix files, mode-list parsing and report serialisation.
 *
 * State file:   {"modes": 4, "terms": [{"occ": [1,2], "re": 0.5, "im": 0.0}], "normalized": true}
 * Density file: {"modes": [1,2], "matrix_re": [[...]], "matrix_im": [[...]]}
 *
 * Doubles are written in shortest round-trip form, so reading a written file
 * reproduces every value exactly.
 */

#pragma once

#include "fermiqi/fock.hpp"
#include "fermiqi/qubit_map.hpp"
#include "fermiqi/reductions.hpp"
#include "fermiqi/ssr.hpp"
#include "fermiqi/verifier.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fermiqi {

using Json = nlohmann::ordered_json;

/// Malformed input text: bad JSON, bad mode lists, bad cut specs.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tolerance applied to the "normalized" flag of a state file.
inline constexpr double kNormalizationTolerance = 1e-12;

struct StateFile {
    FermionicState state;
    bool declared_normalized = false;
};

[[nodiscard]] Json state_to_json(const FermionicState& psi);
/// Throws ParseError on schema violations, duplicate or unordered occupation
/// lists, and on "normalized": true for a state whose norm is off by more than
/// kNormalizationTolerance.
[[nodiscard]] StateFile state_from_json(const Json& j, int max_modes = kDefaultMaxModes);

[[nodiscard]] Json density_to_json(const DensityOperator& rho);
/// Throws ParseError on malformed input; does not validate positivity.
[[nodiscard]] DensityOperator density_from_json(const Json& j, int max_modes = kDefaultMaxModes);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

[[nodiscard]] StateFile read_state_file(const std::filesystem::path& path, int max_modes = kDefaultMaxModes);
void write_state_file(const std::filesystem::path& path, const FermionicState& psi);
[[nodiscard]] DensityOperator read_density_file(const std::filesystem::path& path, int max_modes = kDefaultMaxModes);
void write_density_file(const std::filesystem::path& path, const DensityOperator& rho);

/// "1,3,4" -> {1,3,4}; the empty string gives an empty list. Entries must be
/// distinct and within 1..n. The result is sorted.
[[nodiscard]] std::vector<int> parse_mode_list(std::string_view text, int n);

/// "1,2|3,4" over modes 1..n.
[[nodiscard]] ModePartition parse_cut(std::string_view text, int n);

/// Comma-separated complex expressions such as "1/√2, 0, 0.5+0.5i, sqrt(2)/2".
[[nodiscard]] std::vector<Complex> parse_complex_list(std::string_view text);

/// %.{digits}g
[[nodiscard]] std::string format_number(double v, int digits = 12);

[[nodiscard]] Json spectrum_to_json(const Spectrum& s);
[[nodiscard]] Json cut_analysis_to_json(const CutAnalysis& a);
[[nodiscard]] Json campaign_to_json(const CampaignReport& r);
[[nodiscard]] Json counterexample_to_json(const CounterexampleReport& r);
[[nodiscard]] Json examples_to_json(const ExamplesReport& r);
[[nodiscard]] Json faithfulness_to_json(const FaithfulnessReport& r);

}  // namespace fermiqi
