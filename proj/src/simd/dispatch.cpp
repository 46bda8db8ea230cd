// Copyright 2026 The srkhs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string_view>
#include <vector>

#include "srkhs/simd.hpp"

namespace srkhs::simd {

namespace {

bool scalar_forced() {
  const char* env = std::getenv("SRKHS_SIMD");
  return env != nullptr && std::string_view(env) == "scalar";
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = [] () -> const KernelTable& {
    if (!scalar_forced()) {
      if (const KernelTable* t = avx2_kernels()) return *t;
    }
    return scalar_kernels();
  }();
  return table;
}

std::span<const KernelTable* const> available() {
  static const std::vector<const KernelTable*> tables = [] {
    std::vector<const KernelTable*> out{&scalar_kernels()};
    if (const KernelTable* t = avx2_kernels()) out.push_back(t);
    return out;
  }();
  return tables;
}

}  // namespace srkhs::simd
