// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>

#include "laq/ast.hpp"
#include "laq/database.hpp"
#include "laq/space.hpp"

namespace laq {

struct MatrixType {
  Dim row;
  Dim col;
  bool operator==(const MatrixType& o) const { return row == o.row && col == o.col; }
};

struct TypeInfo {
  std::map<std::string, MatrixType> bindings;
};

/// Resolves every Name node into Var or AttrRef (in place) and assigns each
/// binding a MatrixType. Raises UnboundVariable, NameResolution, TypeError
/// (naming the binding and the two non-conformable dimensions) or
/// MixedTableError.
TypeInfo typecheck(LaScript& script, const LoadedDatabase& db);

/// Type of a resolved expression under the given binding types.
MatrixType expr_type(const Expr& e, const TypeInfo& info, const LoadedDatabase& db);

/// The single table a predicate's atoms reference (validated).
std::string predicate_table(const Predicate& p, const LoadedDatabase& db);

/// The single table a lifted scalar expression references (validated).
std::string scalar_table(const ScalarExpr& e, const LoadedDatabase& db);

}  // namespace laq
