// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "laq/ast.hpp"
#include "laq/database.hpp"
#include "laq/kernel.hpp"
#include "laq/typecheck.hpp"

namespace laq {

/// Labeled sparse output: one row per nonzero entry of the result vector.
struct ResultTable {
  std::vector<std::string> label_schema;  // component space ids (+ "output" when tagged)
  std::vector<std::pair<std::vector<std::string>, double>> rows;
};

enum class SortMode { ByIndex, ByLabel, ByValueDesc };

/// Variable bindings produced by one evaluation.
struct Environment {
  std::map<std::string, TypedMatrix> vars;

  const TypedMatrix& at(const std::string& name) const { return vars.at(name); }
};

/// Per-attribute encoding substitutions (delta evaluation binds an appended
/// table's attributes to its delta columns).
using AttrOverrides = std::map<std::string, TypedMatrix>;

/// Evaluates the bindings in order. The script must have been resolved by
/// typecheck. Kernel errors cannot occur on a type-checked script; lift may
/// raise EvalError (e.g. division by zero, naming the row).
Environment evaluate(const LaScript& script, const LoadedDatabase& db,
                     const AttrOverrides* overrides = nullptr);

/// Boolean filter vector (1 x #t) for a predicate over one table.
TypedMatrix eval_predicate(const Predicate& p, const LoadedDatabase& db,
                           const AttrOverrides* overrides = nullptr);

/// Element-wise evaluation of a lifted scalar expression (1 x #t, dense).
TypedMatrix eval_lift(const ScalarExpr& e, const LoadedDatabase& db,
                      const AttrOverrides* overrides = nullptr);

/// Extracts the value of a 1 x 1 matrix.
double scalar_value(const TypedMatrix& m);

/// Decodes a vector result into labeled rows; zero entries are suppressed.
ResultTable materialize(const TypedMatrix& result, const LoadedDatabase& db,
                        SortMode sort = SortMode::ByIndex);

struct RunOptions {
  bool rewrite{false};
  SortMode sort{SortMode::ByIndex};
};

/// Typechecks, optionally rewrites, evaluates and materializes. Tagged
/// outputs ("output X as t") share one table with a trailing `output`
/// label column; a `having` directive filters values before materialization.
ResultTable run_script(LaScript& script, const LoadedDatabase& db, const RunOptions& opts = {});

/// Applies the algebraic folds (diagonal, pairing-wheel, columnar rendering)
/// to every binding; semantics-preserving on type-checked scripts.
void rewrite_script(LaScript& script, const TypeInfo& info, const LoadedDatabase& db);
Expr rewrite_expr(const Expr& e, const TypeInfo& info, const LoadedDatabase& db);

/// Writes a ResultTable as CSV (header row, then one line per row).
std::string to_csv(const ResultTable& t);

}  // namespace laq
