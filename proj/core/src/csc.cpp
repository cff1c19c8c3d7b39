// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/csc.hpp"

#include <algorithm>
#include <tuple>

namespace laq {

bool csc_is_canonical(const Csc& m) {
  if (m.col_offsets.size() != m.ncols + 1) return false;
  if (m.col_offsets.front() != 0) return false;
  if (m.col_offsets.back() != m.nnz()) return false;
  if (m.values.size() != m.row_index.size()) return false;
  for (std::uint64_t c = 0; c < m.ncols; ++c) {
    if (m.col_offsets[c] > m.col_offsets[c + 1]) return false;
    for (auto p = m.col_offsets[c]; p < m.col_offsets[c + 1]; ++p) {
      if (m.row_index[p] >= m.nrows) return false;
      if (p > m.col_offsets[c] && m.row_index[p - 1] >= m.row_index[p]) return false;
      if (m.values[p] == 0.0) return false;
    }
  }
  return true;
}

Csc csc_transpose(const Csc& m) {
  Csc t(m.ncols, m.nrows);
  t.values.resize(m.nnz());
  t.row_index.resize(m.nnz());
  t.col_offsets.assign(m.nrows + 1, 0);

  for (std::uint64_t r : m.row_index) t.col_offsets[r + 1]++;
  for (std::uint64_t i = 0; i < m.nrows; ++i) t.col_offsets[i + 1] += t.col_offsets[i];

  std::vector<std::uint64_t> next(t.col_offsets.begin(), t.col_offsets.end() - 1);
  for (std::uint64_t c = 0; c < m.ncols; ++c) {
    for (auto p = m.col_offsets[c]; p < m.col_offsets[c + 1]; ++p) {
      const std::uint64_t r = m.row_index[p];
      const std::uint64_t q = next[r]++;
      // Source order is column-major, so each output column fills in
      // increasing (old-column = new-row) order: canonical by construction.
      t.row_index[q] = c;
      t.values[q] = m.values[p];
    }
  }
  return t;
}

Csc csc_from_triples(std::uint64_t nrows, std::uint64_t ncols,
                     std::vector<std::tuple<std::uint64_t, std::uint64_t, double>> triples) {
  std::sort(triples.begin(), triples.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<1>(a), std::get<0>(a)) < std::tie(std::get<1>(b), std::get<0>(b));
  });
  CscBuilder b(nrows, ncols);
  std::uint64_t col = 0;
  std::size_t i = 0;
  while (i < triples.size()) {
    auto [r, c, v] = triples[i];
    double sum = v;
    std::size_t j = i + 1;
    while (j < triples.size() && std::get<0>(triples[j]) == r && std::get<1>(triples[j]) == c) {
      sum += std::get<2>(triples[j]);
      ++j;
    }
    while (col < c) {
      b.close_column();
      ++col;
    }
    b.push(r, sum);
    i = j;
  }
  return b.finish();
}

Csc csc_hconcat(const Csc& a, const Csc& b) {
  Csc out(std::max(a.nrows, b.nrows), a.ncols + b.ncols);
  out.values = a.values;
  out.values.insert(out.values.end(), b.values.begin(), b.values.end());
  out.row_index = a.row_index;
  out.row_index.insert(out.row_index.end(), b.row_index.begin(), b.row_index.end());
  out.col_offsets = a.col_offsets;
  for (std::size_t c = 1; c < b.col_offsets.size(); ++c) {
    out.col_offsets.push_back(a.nnz() + b.col_offsets[c]);
  }
  return out;
}

}  // namespace laq
