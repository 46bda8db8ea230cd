// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "srkhs/cli.hpp"

int main(int argc, char** argv) { return srkhs::cli::run(argc, argv, std::cout, std::cerr); }
