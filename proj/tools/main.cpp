// Copyright 2026 The fermiqi Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiqi/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return fermiqi::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
