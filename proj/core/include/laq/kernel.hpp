// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "laq/matrix.hpp"

namespace laq {

/// Matrix composition M . N (matrix-matrix multiplication).
/// Requires M.col_dim conformable with N.row_dim.
TypedMatrix compose(const TypedMatrix& m, const TypedMatrix& n);

/// Transposition; CSC payloads are re-sorted into canonical CSC.
TypedMatrix converse(const TypedMatrix& m);

/// Khatri-Rao (column-wise pairing) product. Shares the column space; output
/// row index is j * n.nrows() + k for entries M[j,i], N[k,i].
TypedMatrix krao(const TypedMatrix& m, const TypedMatrix& n);

/// Cell-wise (Hadamard) product of same-typed matrices.
TypedMatrix hadamard(const TypedMatrix& m, const TypedMatrix& n);

/// Cell-wise sum / difference of same-typed matrices; explicit zeros dropped.
TypedMatrix add(const TypedMatrix& m, const TypedMatrix& n);
TypedMatrix subtract(const TypedMatrix& m, const TypedMatrix& n);

/// Row-wise aggregation M . converse(bang): column vector of row sums over
/// 1 -> row_dim; zero rows are not stored.
TypedMatrix row_sum(const TypedMatrix& m);

/// Diagonal matrix id KR v from a row vector v over space A; type A -> A.
TypedMatrix diagonal(const TypedMatrix& v);

/// Clamps every stored nonzero to 1; rejects negative cells.
TypedMatrix booleanize(const TypedMatrix& m);

/// The all-ones row vector dim -> 1 (symbolic).
TypedMatrix bang(const Dim& dim);

/// The identity matrix dim -> dim (symbolic).
TypedMatrix identity(const Dim& dim);

/// All-zero matrix of the given type (no stored entries).
TypedMatrix zero(const Dim& row_dim, const Dim& col_dim);

}  // namespace laq
