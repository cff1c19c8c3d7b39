// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "laq/engine.hpp"

namespace laq::oracle {

/// Row-at-a-time view of a loaded table: decoded labels, sort keys and
/// measure values. The evaluation path over it is fully independent of the
/// kernel's vectorized operators.
class DecodedTable {
 public:
  DecodedTable(const LoadedDatabase& db, const std::string& table);

  std::uint64_t rows() const { return rows_; }
  const std::string& name() const { return name_; }

  bool is_measure(const std::string& col) const;
  double measure(const std::string& col, std::uint64_t row) const;
  const std::string& label(const std::string& col, std::uint64_t row) const;
  std::int64_t sort_key(const std::string& col, std::uint64_t row) const;
  ValueType vtype(const std::string& col) const;

 private:
  struct Column {
    bool measure{false};
    ValueType vtype{ValueType::String};
    const Dictionary* dict{nullptr};
    std::vector<std::uint64_t> idx;  // label index per row
    std::vector<double> values;      // measures
  };
  const Column& col(const std::string& name) const;

  std::string name_;
  std::uint64_t rows_{0};
  std::map<std::string, Column> cols_;
};

/// True when the row satisfies the predicate (tree-walking, decoded values).
bool row_matches(const Predicate& p, const DecodedTable& t, std::uint64_t row);

struct Aggregate {
  bool count{false};       // COUNT(*) when set; SUM(expr) otherwise
  ScalarExpr expr;         // over one table's measures (+ CASE)
  std::string table;       // table the expression reads
  std::string tag;         // output tag when the plan has several aggregates
};

struct JoinPred {
  std::string left, right;  // attribute names (their tables are implied)
  Cmp cmp{Cmp::Eq};
};

struct Having {
  Cmp cmp{Cmp::Gt};
  double literal{0.0};
  // literal is scaled by the grand total of aggregate 0 when set (the
  // sub-query-derived threshold shape).
  bool relative_to_total{false};
};

/// A brute-force relational plan: nested-loop join of `tables` in order,
/// per-table row filters, equality/inequality join atoms, group keys,
/// SUM/COUNT aggregates, optional HAVING and an optional correlated EXISTS.
struct RelPlan {
  std::vector<std::string> tables;
  std::vector<Predicate> filters;
  std::vector<JoinPred> joins;
  std::vector<std::string> group_keys;
  std::vector<Aggregate> aggregates;
  std::optional<Having> having;
  std::shared_ptr<RelPlan> exists_subplan;
  std::vector<JoinPred> exists_correlation;  // outer attr = subplan attr
};

/// Exact nested-loop evaluation with compensated summation; groups with no
/// rows are absent from the output. Rows are sorted by label tuple.
ResultTable eval_plan(const RelPlan& plan, const LoadedDatabase& db);

struct CompareReport {
  bool ok{true};
  std::string message;  // first divergence, labeled
};

/// Labeled comparison; missing-vs-zero entries are equal; values match when
/// within the relative tolerance.
CompareReport compare(const ResultTable& engine, const ResultTable& reference, double rel_tol);

/// Built-in reference evaluations keyed by query name (q3, q4, q6, q11, q12,
/// q14); each returns the full reference ResultTable.
ResultTable reference_query(const std::string& name, const LoadedDatabase& db);

/// The §2-sample revenue aggregation (sum of quantity*extendedprice grouped
/// by orderdate, orderpriority) used by the worked examples.
ResultTable sample_revenue_reference(const LoadedDatabase& db);

}  // namespace laq::oracle
