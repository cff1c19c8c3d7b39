// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "laq/error.hpp"

namespace laq {

namespace {

bool payload_functional(const Payload& p) {
  if (std::holds_alternative<IdentityPayload>(p)) return true;
  if (std::holds_alternative<BangPayload>(p)) return true;
  if (const auto* d = std::get_if<DenseVec>(&p)) {
    return std::all_of(d->values.begin(), d->values.end(),
                       [](double v) { return v == 0.0 || v == 1.0; });
  }
  const auto& m = std::get<Csc>(p);
  for (std::uint64_t c = 0; c < m.ncols; ++c) {
    if (m.col_offsets[c + 1] - m.col_offsets[c] > 1) return false;
  }
  return std::all_of(m.values.begin(), m.values.end(), [](double v) { return v == 1.0; });
}

void check_payload_dims(const Payload& p, const Dim& row, const Dim& col) {
  const std::uint64_t r = row.card, c = col.card;
  if (const auto* m = std::get_if<Csc>(&p)) {
    if (m->nrows != r || m->ncols != c)
      throw DimensionMismatch("payload shape does not match dimensions");
  } else if (const auto* d = std::get_if<DenseVec>(&p)) {
    const bool row_vec = row.is_unit();
    const bool col_vec = col.is_unit();
    if (!row_vec && !col_vec)
      throw DimensionMismatch("dense payload requires a vector type");
    if (d->values.size() != (row_vec ? c : r))
      throw DimensionMismatch("dense payload length does not match dimensions");
  } else if (const auto* id = std::get_if<IdentityPayload>(&p)) {
    if (id->n != r || id->n != c || row != col)
      throw DimensionMismatch("identity requires equal row and column spaces");
  } else {
    const auto& bg = std::get<BangPayload>(p);
    if (!row.is_unit() && !col.is_unit())
      throw DimensionMismatch("bang payload requires a vector type");
    if (bg.n != (row.is_unit() ? c : r))
      throw DimensionMismatch("bang payload size does not match dimensions");
  }
}

}  // namespace

TypedMatrix::TypedMatrix(Payload p, Dim row_dim, Dim col_dim)
    : row_(std::move(row_dim)), col_(std::move(col_dim)) {
  check_payload_dims(p, row_, col_);
  functional_ = payload_functional(p);
  payload_ = std::make_shared<const Payload>(std::move(p));
}

std::uint64_t TypedMatrix::nnz() const {
  if (is_identity()) return nrows();
  if (is_bang()) return std::get<BangPayload>(*payload_).n;
  if (is_dense()) {
    const auto& v = dense().values;
    return std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; });
  }
  return csc().nnz();
}

double TypedMatrix::at(std::uint64_t r, std::uint64_t c) const {
  if (is_identity()) return r == c ? 1.0 : 0.0;
  if (is_bang()) return 1.0;
  if (is_dense()) return dense().values[is_row_vector() ? c : r];
  const Csc& m = csc();
  auto rows = m.col_rows(c);
  auto it = std::lower_bound(rows.begin(), rows.end(), r);
  if (it == rows.end() || *it != r) return 0.0;
  return m.col_values(c)[it - rows.begin()];
}

TypedMatrix TypedMatrix::with_row_dim(Dim d) const {
  assert(d.card == row_.card);
  TypedMatrix out = *this;
  out.row_ = std::move(d);
  if (out.is_identity()) out.col_ = out.row_;
  return out;
}

TypedMatrix TypedMatrix::with_col_dim(Dim d) const {
  assert(d.card == col_.card);
  TypedMatrix out = *this;
  out.col_ = std::move(d);
  if (out.is_identity()) out.row_ = out.col_;
  return out;
}

void for_each_in_col(const TypedMatrix& m, std::uint64_t c,
                     const std::function<void(std::uint64_t, double)>& fn) {
  if (m.is_identity()) {
    fn(c, 1.0);
    return;
  }
  if (m.is_bang()) {
    if (m.is_row_vector()) {
      fn(0, 1.0);
    } else {
      for (std::uint64_t r = 0; r < m.nrows(); ++r) fn(r, 1.0);
    }
    return;
  }
  if (m.is_dense()) {
    if (m.is_row_vector()) {
      const double v = m.dense().values[c];
      if (v != 0.0) fn(0, v);
    } else {
      const auto& vals = m.dense().values;
      for (std::uint64_t r = 0; r < vals.size(); ++r) {
        if (vals[r] != 0.0) fn(r, vals[r]);
      }
    }
    return;
  }
  const Csc& s = m.csc();
  for (auto p = s.col_offsets[c]; p < s.col_offsets[c + 1]; ++p) {
    fn(s.row_index[p], s.values[p]);
  }
}

void for_each_entry(const TypedMatrix& m,
                    const std::function<void(std::uint64_t, std::uint64_t, double)>& fn) {
  for (std::uint64_t c = 0; c < m.ncols(); ++c) {
    for_each_in_col(m, c, [&](std::uint64_t r, double v) { fn(r, c, v); });
  }
}

bool matrix_equal(const TypedMatrix& a, const TypedMatrix& b) {
  if (a.row_dim() != b.row_dim() || a.col_dim() != b.col_dim()) return false;
  for (std::uint64_t c = 0; c < a.ncols(); ++c) {
    for (std::uint64_t r = 0; r < a.nrows(); ++r) {
      if (a.at(r, c) != b.at(r, c)) return false;
    }
  }
  return true;
}

std::string debug_dump(const TypedMatrix& m, const LabelFn& label) {
  auto name = [&](const Dim& d, std::uint64_t i) -> std::string {
    if (d.is_unit()) return "1";
    if (!d.is_product()) {
      return label ? label(d, i) : std::to_string(i);
    }
    std::string out;
    auto comps = decode_index(d, i);
    auto atoms = flatten(d);
    out = "(";
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (k) out += ",";
      out += label ? label(atoms[k], comps[k]) : std::to_string(comps[k]);
    }
    out += ")";
    return out;
  };
  std::ostringstream os;
  for_each_entry(m, [&](std::uint64_t r, std::uint64_t c, double v) {
    os << name(m.row_dim(), r) << '\t' << name(m.col_dim(), c) << '\t' << v << '\n';
  });
  return os.str();
}

}  // namespace laq
