// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace laq {

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

const char* cmp_name(Cmp c);
bool cmp_apply_int(Cmp c, long long a, long long b);
bool cmp_apply_double(Cmp c, double a, double b);
bool cmp_apply_string(Cmp c, const std::string& a, const std::string& b);

/// One comparison/membership/pattern atom over attributes of a single table.
struct PredAtom {
  enum class Kind { Compare, CompareAttr, Between, In, Like };
  Kind kind{Kind::Compare};
  std::string attr;
  Cmp cmp{Cmp::Eq};
  std::string literal;          // Compare
  bool literal_quoted{false};   // quoted (string/date) vs bare number
  std::string attr2;            // CompareAttr
  std::string lo, hi;           // Between
  bool range_quoted{false};
  std::vector<std::string> set;  // In (all quoted or all numbers)
  bool set_quoted{false};
  std::string pattern;  // Like, % wildcards only
};

struct Predicate {
  enum class Kind { Atom, And, Or, Not };
  Kind kind{Kind::Atom};
  PredAtom atom;
  std::shared_ptr<Predicate> lhs, rhs;  // Not uses lhs only
};

/// Arithmetic over measure attributes, numeric literals and a restricted
/// CASE WHEN <predicate> THEN <expr> ELSE <expr> END form.
struct ScalarExpr {
  enum class Kind { Attr, Literal, Add, Sub, Mul, Div, Case };
  Kind kind{Kind::Literal};
  std::string attr;
  double literal{0.0};
  std::shared_ptr<ScalarExpr> lhs, rhs;
  std::shared_ptr<Predicate> cond;  // Case
};

/// Arithmetic over scalar (1 -> 1) bindings and numeric literals.
struct CalcExpr {
  enum class Kind { Var, Literal, Add, Sub, Mul, Div };
  Kind kind{Kind::Literal};
  std::string var;
  double literal{0.0};
  std::shared_ptr<CalcExpr> lhs, rhs;
};

struct Expr {
  enum class Kind { Name, Var, AttrRef, Krao, Dot, Filter, Tr, Lift, Sum, Bool, Calc };
  Kind kind{Kind::Name};
  std::string name;  // Name (unresolved), Var, AttrRef
  std::shared_ptr<Expr> a, b;
  std::shared_ptr<Predicate> pred;
  std::shared_ptr<ScalarExpr> scalar;
  std::shared_ptr<CalcExpr> calc;
};

struct Binding {
  std::string name;
  Expr expr;
};

struct OutputSpec {
  std::string var;
  std::string tag;
};

/// Post-aggregation value filter applied at materialization.
struct HavingSpec {
  std::string var;  // must be the script result
  Cmp cmp{Cmp::Gt};
  bool rhs_is_var{false};
  double literal{0.0};
  std::string rhs_var;
};

/// A parsed single-assignment kernel-language script. Without `output`
/// directives the final binding is the script result.
struct LaScript {
  std::vector<Binding> bindings;
  std::vector<OutputSpec> outputs;
  std::optional<HavingSpec> having;

  const Binding* find(std::string_view name) const;
  const std::string& result_var() const;
};

/// Parses script text; raises SyntaxError / DuplicateBinding with line and
/// column positions. Name resolution (Var vs AttrRef) happens in typecheck.
LaScript parse_script(const std::string& text);
LaScript parse_script_file(const std::string& path);

/// Canonical text form; parse(pretty(parse(s))) == parse(s).
std::string pretty(const LaScript& s);
std::string pretty(const Expr& e);

/// Bare attribute names the script might touch (before resolution): every
/// name that is not a script binding.
std::set<std::string> referenced_attributes(const LaScript& s);

}  // namespace laq
