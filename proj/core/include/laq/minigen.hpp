// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

namespace laq {

/// Sizing knobs for the deterministic desk-scale dataset generator. Zero
/// means "derive from the order count".
struct MiniSpec {
  std::uint64_t seed{1};
  std::uint64_t orders{100};
  std::uint64_t lineitems{600};
  std::uint64_t customers{0};
  std::uint64_t suppliers{0};
  std::uint64_t parts{0};
};

/// Writes pipe-delimited .tbl files (TPC-H dbgen column layout) for the eight
/// tables into out_dir. Deterministic: identical spec -> byte-identical
/// files. Every generated foreign key refers to a generated primary key.
void generate_mini(const MiniSpec& spec, const std::string& out_dir);

}  // namespace laq
