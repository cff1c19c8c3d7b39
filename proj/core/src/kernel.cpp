// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "laq/error.hpp"

namespace laq {

namespace {

void require_conformable(const Dim& a, const Dim& b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": space '" + a.space + "' (" +
                            std::to_string(a.card) + ") vs space '" + b.space +
                            "' (" + std::to_string(b.card) + ")");
  }
}

// Static-dispatch column iteration; fn(row, value) in increasing row order.
template <class F>
void visit_col(const TypedMatrix& m, std::uint64_t c, F&& fn) {
  if (m.is_csc()) {
    const Csc& s = m.csc();
    for (auto p = s.col_offsets[c]; p < s.col_offsets[c + 1]; ++p) {
      fn(s.row_index[p], s.values[p]);
    }
  } else if (m.is_dense()) {
    if (m.is_row_vector()) {
      const double v = m.dense().values[c];
      if (v != 0.0) fn(0, v);
    } else {
      const auto& vals = m.dense().values;
      for (std::uint64_t r = 0; r < vals.size(); ++r) {
        if (vals[r] != 0.0) fn(r, vals[r]);
      }
    }
  } else if (m.is_identity()) {
    fn(c, 1.0);
  } else {  // bang
    if (m.is_row_vector()) {
      fn(0, 1.0);
    } else {
      for (std::uint64_t r = 0; r < m.nrows(); ++r) fn(r, 1.0);
    }
  }
}

std::uint64_t col_nnz(const TypedMatrix& m, std::uint64_t c) {
  if (m.is_csc()) {
    const Csc& s = m.csc();
    return s.col_offsets[c + 1] - s.col_offsets[c];
  }
  std::uint64_t n = 0;
  visit_col(m, c, [&](std::uint64_t, double) { ++n; });
  return n;
}

using Entry = std::pair<std::uint64_t, double>;

std::vector<Entry> col_entries(const TypedMatrix& m, std::uint64_t c) {
  std::vector<Entry> out;
  visit_col(m, c, [&](std::uint64_t r, double v) { out.emplace_back(r, v); });
  return out;
}

bool both_dense_vectors(const TypedMatrix& m, const TypedMatrix& n) {
  return m.is_dense() && n.is_dense();
}

TypedMatrix dense_pointwise(const TypedMatrix& m, const TypedMatrix& n,
                            double (*op)(double, double)) {
  DenseVec out;
  const auto& a = m.dense().values;
  const auto& b = n.dense().values;
  out.values.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = op(a[i], b[i]);
  return TypedMatrix(std::move(out), m.row_dim(), m.col_dim());
}

}  // namespace

TypedMatrix compose(const TypedMatrix& m, const TypedMatrix& n) {
  require_conformable(m.col_dim(), n.row_dim(), "compose");

  if (m.is_identity()) return n;
  if (n.is_identity()) return m;

  // bang . N sums the columns of N.
  if (m.is_bang() && m.is_row_vector()) {
    if (n.is_dense() && n.is_col_vector()) {
      double s = 0.0;
      for (double v : n.dense().values) s += v;
      return TypedMatrix(DenseVec{{s}}, Dim::unit(), Dim::unit());
    }
    CscBuilder b(1, n.ncols());
    for (std::uint64_t c = 0; c < n.ncols(); ++c) {
      double s = 0.0;
      visit_col(n, c, [&](std::uint64_t, double v) { s += v; });
      b.push(0, s);
      b.close_column();
    }
    return TypedMatrix(b.finish(), Dim::unit(), n.col_dim());
  }
  // M . bang-column sums the rows of M.
  if (n.is_bang() && n.is_col_vector()) return row_sum(m);
  // Broadcast cases through an all-ones factor.
  if (m.is_bang()) {  // column of ones; N is a row vector
    CscBuilder b(m.nrows(), n.ncols());
    for (std::uint64_t c = 0; c < n.ncols(); ++c) {
      double v = 0.0;
      visit_col(n, c, [&](std::uint64_t, double x) { v = x; });
      for (std::uint64_t r = 0; v != 0.0 && r < m.nrows(); ++r) b.push(r, v);
      b.close_column();
    }
    return TypedMatrix(b.finish(), m.row_dim(), n.col_dim());
  }
  if (n.is_bang()) {  // row of ones; M is a column vector
    auto col = col_entries(m, 0);
    CscBuilder b(m.nrows(), n.ncols());
    for (std::uint64_t c = 0; c < n.ncols(); ++c) {
      for (const auto& [r, v] : col) b.push(r, v);
      b.close_column();
    }
    return TypedMatrix(b.finish(), m.row_dim(), n.col_dim());
  }

  if (both_dense_vectors(m, n)) {
    // (1 x k) . (k x 1) -> scalar
    double s = 0.0;
    const auto& a = m.dense().values;
    const auto& b = n.dense().values;
    if (m.is_row_vector() && n.is_col_vector()) {
      for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
      return TypedMatrix(DenseVec{{s}}, Dim::unit(), Dim::unit());
    }
    // (k x 1) . (1 x q) -> outer product, sparse output
    CscBuilder bo(m.nrows(), n.ncols());
    for (std::uint64_t c = 0; c < n.ncols(); ++c) {
      if (b[c] != 0.0) {
        for (std::uint64_t r = 0; r < a.size(); ++r) bo.push(r, a[r] * b[c]);
      }
      bo.close_column();
    }
    return TypedMatrix(bo.finish(), m.row_dim(), n.col_dim());
  }

  // Generic sparse path. Columns of N with a single entry are gathers of one
  // column of M (the dominant case for functional matrices, s. the CSC
  // format's fit for projection data); the accumulator only runs otherwise.
  CscBuilder out(m.nrows(), n.ncols());
  std::vector<double> acc(m.nrows(), 0.0);
  std::vector<std::uint64_t> touched;
  for (std::uint64_t c = 0; c < n.ncols(); ++c) {
    if (col_nnz(n, c) == 1) {
      std::uint64_t b = 0;
      double nv = 0.0;
      visit_col(n, c, [&](std::uint64_t r, double v) {
        b = r;
        nv = v;
      });
      visit_col(m, b, [&](std::uint64_t r, double v) { out.push(r, v * nv); });
      out.close_column();
      continue;
    }
    touched.clear();
    visit_col(n, c, [&](std::uint64_t b, double nv) {
      visit_col(m, b, [&](std::uint64_t r, double mv) {
        if (acc[r] == 0.0) touched.push_back(r);
        acc[r] += mv * nv;
      });
    });
    std::sort(touched.begin(), touched.end());
    for (std::uint64_t r : touched) {
      out.push(r, acc[r]);
      acc[r] = 0.0;
    }
    out.close_column();
  }
  return TypedMatrix(out.finish(), m.row_dim(), n.col_dim());
}

TypedMatrix converse(const TypedMatrix& m) {
  if (m.is_identity()) return m;
  if (m.is_csc()) {
    return TypedMatrix(csc_transpose(m.csc()), m.col_dim(), m.row_dim());
  }
  // Dense vectors and bang flip orientation via the dimensions alone.
  Payload p = m.payload();
  return TypedMatrix(std::move(p), m.col_dim(), m.row_dim());
}

TypedMatrix krao(const TypedMatrix& m, const TypedMatrix& n) {
  require_conformable(m.col_dim(), n.col_dim(), "krao");

  // M KR bang = M = bang KR M (eq. of the all-ones row with the unit space).
  if (m.is_bang() && m.is_row_vector()) return n;
  if (n.is_bang() && n.is_row_vector()) return m;

  if (both_dense_vectors(m, n) && m.is_row_vector() && n.is_row_vector()) {
    return dense_pointwise(m, n, [](double a, double b) { return a * b; });
  }

  const std::uint64_t q = n.nrows();
  CscBuilder out(m.nrows() * q, m.ncols());
  for (std::uint64_t c = 0; c < m.ncols(); ++c) {
    visit_col(m, c, [&](std::uint64_t j, double mv) {
      visit_col(n, c, [&](std::uint64_t k, double nv) { out.push(j * q + k, mv * nv); });
    });
    out.close_column();
  }
  return TypedMatrix(out.finish(), Dim::product(m.row_dim(), n.row_dim()), m.col_dim());
}

TypedMatrix hadamard(const TypedMatrix& m, const TypedMatrix& n) {
  require_conformable(m.row_dim(), n.row_dim(), "hadamard rows");
  require_conformable(m.col_dim(), n.col_dim(), "hadamard columns");

  if (m.is_identity() && n.is_identity()) return m;
  if (m.is_bang() && n.is_bang()) return m;
  if (both_dense_vectors(m, n)) {
    return dense_pointwise(m, n, [](double a, double b) { return a * b; });
  }

  CscBuilder out(m.nrows(), m.ncols());
  for (std::uint64_t c = 0; c < m.ncols(); ++c) {
    auto a = col_entries(m, c);
    auto b = col_entries(n, c);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i].first < b[j].first) {
        ++i;
      } else if (b[j].first < a[i].first) {
        ++j;
      } else {
        out.push(a[i].first, a[i].second * b[j].second);
        ++i;
        ++j;
      }
    }
    out.close_column();
  }
  return TypedMatrix(out.finish(), m.row_dim(), m.col_dim());
}

namespace {

TypedMatrix merge_sum(const TypedMatrix& m, const TypedMatrix& n, double sign) {
  require_conformable(m.row_dim(), n.row_dim(), "add rows");
  require_conformable(m.col_dim(), n.col_dim(), "add columns");

  if (both_dense_vectors(m, n)) {
    DenseVec out;
    const auto& a = m.dense().values;
    const auto& b = n.dense().values;
    out.values.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a[i] + sign * b[i];
    return TypedMatrix(std::move(out), m.row_dim(), m.col_dim());
  }

  CscBuilder out(m.nrows(), m.ncols());
  for (std::uint64_t c = 0; c < m.ncols(); ++c) {
    auto a = col_entries(m, c);
    auto b = col_entries(n, c);
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push(a[i].first, a[i].second);
        ++i;
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.push(b[j].first, sign * b[j].second);
        ++j;
      } else {
        out.push(a[i].first, a[i].second + sign * b[j].second);
        ++i;
        ++j;
      }
    }
    out.close_column();
  }
  return TypedMatrix(out.finish(), m.row_dim(), m.col_dim());
}

}  // namespace

TypedMatrix add(const TypedMatrix& m, const TypedMatrix& n) { return merge_sum(m, n, 1.0); }

TypedMatrix subtract(const TypedMatrix& m, const TypedMatrix& n) { return merge_sum(m, n, -1.0); }

TypedMatrix row_sum(const TypedMatrix& m) {
  if (m.is_identity()) {
    return TypedMatrix(BangPayload{m.nrows()}, m.row_dim(), Dim::unit());
  }
  if (m.is_dense() && m.is_col_vector()) return m;
  if (m.is_dense() && m.is_row_vector()) {
    double s = 0.0;
    for (double v : m.dense().values) s += v;
    return TypedMatrix(DenseVec{{s}}, Dim::unit(), Dim::unit());
  }
  std::vector<double> acc(m.nrows(), 0.0);
  for (std::uint64_t c = 0; c < m.ncols(); ++c) {
    visit_col(m, c, [&](std::uint64_t r, double v) { acc[r] += v; });
  }
  CscBuilder out(m.nrows(), 1);
  for (std::uint64_t r = 0; r < acc.size(); ++r) out.push(r, acc[r]);
  out.close_column();
  return TypedMatrix(out.finish(), m.row_dim(), Dim::unit());
}

TypedMatrix diagonal(const TypedMatrix& v) {
  if (!v.is_row_vector()) throw DimensionMismatch("diagonal expects a row vector");
  const Dim& a = v.col_dim();
  if (v.is_bang()) return identity(a);
  CscBuilder out(a.card, a.card);
  for (std::uint64_t c = 0; c < a.card; ++c) {
    visit_col(v, c, [&](std::uint64_t, double x) { out.push(c, x); });
    out.close_column();
  }
  return TypedMatrix(out.finish(), a, a);
}

TypedMatrix booleanize(const TypedMatrix& m) {
  if (m.is_identity() || m.is_bang()) return m;
  auto clamp = [](double v) {
    if (v < 0.0) throw NegativeCell("booleanize: negative cell " + std::to_string(v));
    return v == 0.0 ? 0.0 : 1.0;
  };
  if (m.is_dense()) {
    DenseVec out;
    out.values.reserve(m.dense().values.size());
    for (double v : m.dense().values) out.values.push_back(clamp(v));
    return TypedMatrix(std::move(out), m.row_dim(), m.col_dim());
  }
  Csc out = m.csc();
  for (double& v : out.values) v = clamp(v);
  return TypedMatrix(std::move(out), m.row_dim(), m.col_dim());
}

TypedMatrix bang(const Dim& dim) {
  return TypedMatrix(BangPayload{dim.card}, Dim::unit(), dim);
}

TypedMatrix identity(const Dim& dim) {
  return TypedMatrix(IdentityPayload{dim.card}, dim, dim);
}

TypedMatrix zero(const Dim& row_dim, const Dim& col_dim) {
  return TypedMatrix(Csc(row_dim.card, col_dim.card), row_dim, col_dim);
}

}  // namespace laq
