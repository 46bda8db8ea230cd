// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace srkhs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the `srkhs` tool. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace srkhs::cli
