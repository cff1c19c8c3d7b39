// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace laq {

/// Compressed sparse column storage. Canonical form: col_offsets starts at 0,
/// is non-decreasing and ends at nnz; row indices are strictly increasing
/// within each column; no explicit zeros are stored.
struct Csc {
  std::uint64_t nrows{0};
  std::uint64_t ncols{0};
  std::vector<double> values;
  std::vector<std::uint64_t> row_index;
  std::vector<std::uint64_t> col_offsets;  // size ncols + 1

  Csc() : col_offsets(1, 0) {}
  Csc(std::uint64_t r, std::uint64_t c) : nrows(r), ncols(c), col_offsets(c + 1, 0) {}

  std::uint64_t nnz() const { return values.size(); }

  std::span<const std::uint64_t> col_rows(std::uint64_t c) const {
    return {row_index.data() + col_offsets[c],
            row_index.data() + col_offsets[c + 1]};
  }
  std::span<const double> col_values(std::uint64_t c) const {
    return {values.data() + col_offsets[c], values.data() + col_offsets[c + 1]};
  }
};

/// Column-at-a-time builder; push entries of column c in increasing row
/// order, for c = 0..ncols-1 in order. Zero values are skipped.
class CscBuilder {
 public:
  CscBuilder(std::uint64_t nrows, std::uint64_t ncols) : m_(nrows, ncols) {
    m_.col_offsets.assign(1, 0);
  }

  void reserve(std::uint64_t nnz) {
    m_.values.reserve(nnz);
    m_.row_index.reserve(nnz);
  }

  void push(std::uint64_t row, double value) {
    if (value == 0.0) return;
    m_.row_index.push_back(row);
    m_.values.push_back(value);
  }

  void close_column() { m_.col_offsets.push_back(m_.values.size()); }

  Csc finish() {
    while (m_.col_offsets.size() < m_.ncols + 1) close_column();
    return std::move(m_);
  }

 private:
  Csc m_;
};

/// True when the matrix satisfies the canonical-form invariants.
bool csc_is_canonical(const Csc& m);

/// CSC<->CSR reinterpretation followed by a counting re-sort into CSC.
Csc csc_transpose(const Csc& m);

/// Builds a CSC from unsorted (row, col, value) triples, summing duplicates.
Csc csc_from_triples(std::uint64_t nrows, std::uint64_t ncols,
                     std::vector<std::tuple<std::uint64_t, std::uint64_t, double>> triples);

/// Horizontal concatenation [a | b]; a.nrows may be smaller than b.nrows when
/// the shared row space has grown (append-only label spaces).
Csc csc_hconcat(const Csc& a, const Csc& b);

}  // namespace laq
