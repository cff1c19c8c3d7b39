// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "laq/csc.hpp"
#include "laq/space.hpp"

namespace laq {

/// Dense numeric vector; orientation (row A->1 vs column 1->A) is carried by
/// the owning TypedMatrix's dimensions.
struct DenseVec {
  std::vector<double> values;
};

/// Symbolic identity over an n-element space; never materialized.
struct IdentityPayload {
  std::uint64_t n{0};
};

/// Symbolic all-ones vector ("bang", A -> 1); its converse is the all-ones
/// column, distinguished only by the owning matrix's dimensions.
struct BangPayload {
  std::uint64_t n{0};
};

using Payload = std::variant<Csc, DenseVec, IdentityPayload, BangPayload>;

/// A matrix carrying its arrow type: col_dim -> row_dim in diagram notation,
/// i.e. row_dim.card rows by col_dim.card columns. Immutable after
/// construction and cheap to copy (shared payload).
class TypedMatrix {
 public:
  TypedMatrix() : TypedMatrix(DenseVec{}, Dim::unit(), Dim::atomic("0", 0)) {}

  TypedMatrix(Payload p, Dim row_dim, Dim col_dim);

  const Dim& row_dim() const { return row_; }
  const Dim& col_dim() const { return col_; }
  std::uint64_t nrows() const { return row_.card; }
  std::uint64_t ncols() const { return col_.card; }

  /// At most one stored entry per column, every stored value exactly 1.
  bool functional() const { return functional_; }

  const Payload& payload() const { return *payload_; }
  bool is_csc() const { return std::holds_alternative<Csc>(*payload_); }
  bool is_dense() const { return std::holds_alternative<DenseVec>(*payload_); }
  bool is_identity() const { return std::holds_alternative<IdentityPayload>(*payload_); }
  bool is_bang() const { return std::holds_alternative<BangPayload>(*payload_); }
  const Csc& csc() const { return std::get<Csc>(*payload_); }
  const DenseVec& dense() const { return std::get<DenseVec>(*payload_); }

  bool is_row_vector() const { return row_.is_unit(); }
  bool is_col_vector() const { return col_.is_unit(); }
  bool is_scalar() const { return row_.is_unit() && col_.is_unit(); }

  std::uint64_t nnz() const;

  /// Cell lookup; O(log k) per column for CSC payloads. Test/debug use.
  double at(std::uint64_t r, std::uint64_t c) const;

  /// Same type with the row space renamed (payload shared). The new space
  /// must have the same cardinality.
  TypedMatrix with_row_dim(Dim d) const;
  TypedMatrix with_col_dim(Dim d) const;

 private:
  Dim row_;
  Dim col_;
  bool functional_{false};
  std::shared_ptr<const Payload> payload_;
};

/// Iterates the stored entries of column c in increasing row order.
void for_each_in_col(const TypedMatrix& m, std::uint64_t c,
                     const std::function<void(std::uint64_t, double)>& fn);

/// Iterates all stored entries in column-major order.
void for_each_entry(const TypedMatrix& m,
                    const std::function<void(std::uint64_t, std::uint64_t, double)>& fn);

/// Exact cell-wise equality (types and all cells).
bool matrix_equal(const TypedMatrix& a, const TypedMatrix& b);

/// Resolves a row index of an atomic space to a printable label.
using LabelFn = std::function<std::string(const Dim&, std::uint64_t)>;

/// Debug text dump: one line per stored entry, `row_label TAB col_label TAB
/// value`, sorted by (col, row). Indices are used as labels when no resolver
/// is given.
std::string debug_dump(const TypedMatrix& m, const LabelFn& label = nullptr);

}  // namespace laq
