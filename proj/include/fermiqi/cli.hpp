// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief Command-line front end.
 *
 * Exit codes: 0 ok, 1 a check failed, 2 usage or parse error.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fermiqi {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Mode cap for dense operators: FERMI_MAX_MODES when set to a valid integer, else 14.
[[nodiscard]] int max_modes_from_env();

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fermiqi
