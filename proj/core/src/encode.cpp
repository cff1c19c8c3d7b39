// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/encode.hpp"

#include <charconv>

#include "laq/error.hpp"

namespace laq {

namespace {

TypedMatrix projection_from_indices(const std::vector<std::uint64_t>& idx, std::uint64_t nrows,
                                    const Dictionary& dict, const Dim& table_rows) {
  CscBuilder b(nrows, idx.size());
  b.reserve(idx.size());
  for (std::uint64_t i : idx) {
    b.push(i, 1.0);
    b.close_column();
  }
  return TypedMatrix(b.finish(), Dim::atomic(dict.space_id(), nrows), table_rows);
}

}  // namespace

TypedMatrix encode_dimension(const std::vector<std::string>& values, Dictionary& dict,
                             const Dim& table_rows) {
  std::vector<std::uint64_t> idx;
  idx.reserve(values.size());
  for (const auto& v : values) idx.push_back(dict.intern(v));
  return projection_from_indices(idx, dict.size(), dict, table_rows);
}

TypedMatrix encode_foreign_key(const std::vector<std::string>& values, const Dictionary& dict,
                               const Dim& table_rows) {
  std::vector<std::uint64_t> idx;
  idx.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto found = dict.lookup(values[i]);
    if (!found) {
      throw ReferentialIntegrity("row " + std::to_string(i) + ": key '" + values[i] +
                                 "' not present in primary-key space '" + dict.space_id() + "'");
    }
    idx.push_back(*found);
  }
  return projection_from_indices(idx, dict.size(), dict, table_rows);
}

TypedMatrix encode_primary_key(const std::vector<std::string>& values, Dictionary& dict) {
  const bool mirror = dict.size() != 0;
  if (mirror && dict.size() != values.size()) {
    throw KeyOrderViolation("key space '" + dict.space_id() + "' already holds " +
                            std::to_string(dict.size()) + " keys; cannot re-map " +
                            std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto existing = dict.lookup(values[i]);
    if (mirror) {
      if (!existing || *existing != i) {
        throw KeyOrderViolation("key '" + values[i] + "' breaks the established row order of '" +
                                dict.space_id() + "'");
      }
      continue;
    }
    if (existing) throw DuplicateKey("duplicate primary key '" + values[i] + "'");
    dict.intern(values[i]);
  }
  return identity(Dim::atomic(dict.space_id(), dict.size()));
}

TypedMatrix encode_primary_key_delta(const std::vector<std::string>& values, Dictionary& dict,
                                     const Dim& delta_rows) {
  std::vector<std::uint64_t> idx;
  idx.reserve(values.size());
  for (const auto& v : values) {
    if (dict.lookup(v)) throw DuplicateKey("duplicate primary key '" + v + "' in append batch");
    idx.push_back(dict.intern(v));
  }
  return projection_from_indices(idx, dict.size(), dict, delta_rows);
}

TypedMatrix encode_measure(const std::vector<std::string>& values, const Dim& table_rows) {
  DenseVec v;
  v.values.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double x = 0.0;
    const char* first = values[i].data();
    const char* last = first + values[i].size();
    auto [p, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || p != last) {
      throw ParseError("row " + std::to_string(i) + ": malformed decimal '" + values[i] + "'");
    }
    v.values.push_back(x);
  }
  return TypedMatrix(std::move(v), Dim::unit(), table_rows);
}

}  // namespace laq
