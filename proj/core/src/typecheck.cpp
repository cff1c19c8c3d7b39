// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/typecheck.hpp"

#include <charconv>

#include "laq/error.hpp"

namespace laq {

namespace {

bool is_label_kind(AttrKind k) { return k != AttrKind::Measure; }

void merge_table(std::string& table, const std::string& t, const char* what) {
  if (table.empty()) {
    table = t;
  } else if (table != t) {
    throw MixedTableError(std::string(what) + " references attributes of both '" + table +
                          "' and '" + t + "'");
  }
}

void check_literal_against(const AttributeSpec& a, const std::string& lit, bool quoted) {
  if (a.kind == AttrKind::Measure) {
    if (quoted) throw TypeError("measure '" + a.column + "' compared against a quoted literal");
    return;
  }
  switch (a.vtype) {
    case ValueType::Date:
      if (!quoted) throw TypeError("date attribute '" + a.column + "' needs a quoted ISO date");
      parse_date_days(lit);  // raises ParseError on malformed dates
      break;
    case ValueType::Integer: {
      long long v = 0;
      auto [p, ec] = std::from_chars(lit.data(), lit.data() + lit.size(), v);
      if (ec != std::errc() || p != lit.data() + lit.size()) {
        throw TypeError("integer attribute '" + a.column + "' compared against '" + lit + "'");
      }
      break;
    }
    case ValueType::Decimal: {
      double v = 0;
      auto [p, ec] = std::from_chars(lit.data(), lit.data() + lit.size(), v);
      if (ec != std::errc() || p != lit.data() + lit.size()) {
        throw TypeError("decimal attribute '" + a.column + "' compared against '" + lit + "'");
      }
      break;
    }
    case ValueType::String:
      if (!quoted) {
        throw TypeError("string attribute '" + a.column + "' compared against a bare number");
      }
      break;
  }
}

void check_atom(const PredAtom& atom, std::string& table, const LoadedDatabase& db) {
  const AttributeSpec& a = db.attr_spec(atom.attr);
  merge_table(table, a.table, "predicate");
  switch (atom.kind) {
    case PredAtom::Kind::Compare:
      check_literal_against(a, atom.literal, atom.literal_quoted);
      break;
    case PredAtom::Kind::CompareAttr: {
      const AttributeSpec& b = db.attr_spec(atom.attr2);
      merge_table(table, b.table, "predicate");
      const bool both_measures = a.kind == AttrKind::Measure && b.kind == AttrKind::Measure;
      const bool both_labels = is_label_kind(a.kind) && is_label_kind(b.kind) && a.vtype == b.vtype;
      if (!both_measures && !both_labels) {
        throw TypeError("cannot compare '" + atom.attr + "' with '" + atom.attr2 +
                        "': mismatched attribute kinds");
      }
      break;
    }
    case PredAtom::Kind::Between:
      check_literal_against(a, atom.lo, atom.range_quoted);
      check_literal_against(a, atom.hi, atom.range_quoted);
      break;
    case PredAtom::Kind::In:
      if (!is_label_kind(a.kind)) throw TypeError("'in' needs a dimension attribute");
      for (const auto& v : atom.set) check_literal_against(a, v, atom.set_quoted);
      break;
    case PredAtom::Kind::Like:
      if (!is_label_kind(a.kind) || a.vtype != ValueType::String) {
        throw TypeError("'like' needs a string dimension attribute");
      }
      break;
  }
}

void walk_pred(const Predicate& p, std::string& table, const LoadedDatabase& db) {
  if (p.kind == Predicate::Kind::Atom) {
    check_atom(p.atom, table, db);
    return;
  }
  if (p.lhs) walk_pred(*p.lhs, table, db);
  if (p.rhs) walk_pred(*p.rhs, table, db);
}

void walk_scalar(const ScalarExpr& e, std::string& table, const LoadedDatabase& db) {
  switch (e.kind) {
    case ScalarExpr::Kind::Attr: {
      const AttributeSpec& a = db.attr_spec(e.attr);
      if (a.kind != AttrKind::Measure) {
        throw TypeError("dimension attribute '" + e.attr + "' used inside lift");
      }
      merge_table(table, a.table, "lift expression");
      return;
    }
    case ScalarExpr::Kind::Literal:
      return;
    case ScalarExpr::Kind::Case:
      walk_pred(*e.cond, table, db);
      walk_scalar(*e.lhs, table, db);
      walk_scalar(*e.rhs, table, db);
      return;
    default:
      walk_scalar(*e.lhs, table, db);
      walk_scalar(*e.rhs, table, db);
  }
}

struct Checker {
  LaScript& script;
  const LoadedDatabase& db;
  TypeInfo info;
  std::string current;  // binding under analysis, for error messages

  MatrixType attr_type(const std::string& name) {
    const TypedMatrix& m = db.attr(name);
    return MatrixType{m.row_dim(), m.col_dim()};
  }

  [[noreturn]] void mismatch(const char* what, const Dim& a, const Dim& b) {
    throw TypeError("binding '" + current + "': " + what + " over non-conformable dimensions '" +
                    a.space + "' (" + std::to_string(a.card) + ") vs '" + b.space + "' (" +
                    std::to_string(b.card) + ")");
  }

  MatrixType check(Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Name: {
        if (auto it = info.bindings.find(e.name); it != info.bindings.end()) {
          e.kind = Expr::Kind::Var;
          return it->second;
        }
        if (db.schema.find_attr(e.name)) {
          e.kind = Expr::Kind::AttrRef;
          return attr_type(e.name);
        }
        if (script.find(e.name)) {
          throw UnboundVariable("binding '" + current + "' uses '" + e.name +
                                "' before its binding");
        }
        throw UnboundVariable("binding '" + current + "': unbound name '" + e.name + "'");
      }
      case Expr::Kind::Var:
        return info.bindings.at(e.name);
      case Expr::Kind::AttrRef:
        return attr_type(e.name);
      case Expr::Kind::Krao: {
        MatrixType a = check(*e.a);
        MatrixType b = check(*e.b);
        if (a.col != b.col) mismatch("krao", a.col, b.col);
        return MatrixType{Dim::product(a.row, b.row), a.col};
      }
      case Expr::Kind::Dot: {
        MatrixType a = check(*e.a);
        MatrixType b = check(*e.b);
        if (a.col != b.row) mismatch("dot", a.col, b.row);
        return MatrixType{a.row, b.col};
      }
      case Expr::Kind::Tr: {
        MatrixType a = check(*e.a);
        return MatrixType{a.col, a.row};
      }
      case Expr::Kind::Sum: {
        MatrixType a = check(*e.a);
        return MatrixType{a.row, Dim::unit()};
      }
      case Expr::Kind::Bool:
        return check(*e.a);
      case Expr::Kind::Filter: {
        std::string table = predicate_table(*e.pred, db);
        auto it = db.tables.find(table);
        if (it == db.tables.end()) throw NameResolution("table '" + table + "' was not loaded");
        return MatrixType{Dim::unit(), it->second.row_dim};
      }
      case Expr::Kind::Lift: {
        std::string table = scalar_table(*e.scalar, db);
        auto it = db.tables.find(table);
        if (it == db.tables.end()) throw NameResolution("table '" + table + "' was not loaded");
        return MatrixType{Dim::unit(), it->second.row_dim};
      }
      case Expr::Kind::Calc: {
        check_calc(*e.calc);
        return MatrixType{Dim::unit(), Dim::unit()};
      }
    }
    throw TypeError("binding '" + current + "': unrecognized expression");
  }

  void check_calc(const CalcExpr& c) {
    switch (c.kind) {
      case CalcExpr::Kind::Var: {
        auto it = info.bindings.find(c.var);
        if (it == info.bindings.end()) {
          throw UnboundVariable("calc in '" + current + "' uses unbound '" + c.var + "'");
        }
        if (!it->second.row.is_unit() || !it->second.col.is_unit()) {
          throw TypeError("calc in '" + current + "' needs scalar operands; '" + c.var +
                          "' has type " + it->second.col.space + " -> " + it->second.row.space);
        }
        return;
      }
      case CalcExpr::Kind::Literal:
        return;
      default:
        check_calc(*c.lhs);
        check_calc(*c.rhs);
    }
  }
};

}  // namespace

std::string predicate_table(const Predicate& p, const LoadedDatabase& db) {
  std::string table;
  walk_pred(p, table, db);
  if (table.empty()) throw TypeError("predicate references no attribute");
  return table;
}

std::string scalar_table(const ScalarExpr& e, const LoadedDatabase& db) {
  std::string table;
  walk_scalar(e, table, db);
  if (table.empty()) throw TypeError("lift expression references no attribute");
  return table;
}

TypeInfo typecheck(LaScript& script, const LoadedDatabase& db) {
  Checker ck{script, db, {}, ""};
  for (auto& b : script.bindings) {
    ck.current = b.name;
    MatrixType t = ck.check(b.expr);
    ck.info.bindings.emplace(b.name, std::move(t));
  }

  auto vector_typed = [&](const std::string& var) {
    const MatrixType& t = ck.info.bindings.at(var);
    return t.row.is_unit() || t.col.is_unit();
  };
  for (const auto& o : script.outputs) {
    if (!ck.info.bindings.count(o.var)) {
      throw UnboundVariable("output names unbound variable '" + o.var + "'");
    }
    if (!vector_typed(o.var)) {
      throw TypeError("output '" + o.var + "' is not vector-typed");
    }
  }
  if (script.having) {
    const auto& h = *script.having;
    if (!ck.info.bindings.count(h.var)) {
      throw UnboundVariable("having names unbound variable '" + h.var + "'");
    }
    bool is_result = h.var == script.result_var();
    for (const auto& o : script.outputs) is_result = is_result || o.var == h.var;
    if (!is_result) {
      throw TypeError("having must filter the script result, not '" + h.var + "'");
    }
    if (h.rhs_is_var) {
      auto it = ck.info.bindings.find(h.rhs_var);
      if (it == ck.info.bindings.end()) {
        throw UnboundVariable("having threshold '" + h.rhs_var + "' is unbound");
      }
      if (!it->second.row.is_unit() || !it->second.col.is_unit()) {
        throw TypeError("having threshold '" + h.rhs_var + "' must be scalar");
      }
    }
  }
  return ck.info;
}

MatrixType expr_type(const Expr& e, const TypeInfo& info, const LoadedDatabase& db) {
  switch (e.kind) {
    case Expr::Kind::Name:
    case Expr::Kind::Var: {
      auto it = info.bindings.find(e.name);
      if (it != info.bindings.end()) return it->second;
      break;
    }
    case Expr::Kind::AttrRef: {
      const TypedMatrix& m = db.attr(e.name);
      return MatrixType{m.row_dim(), m.col_dim()};
    }
    case Expr::Kind::Krao: {
      MatrixType a = expr_type(*e.a, info, db);
      MatrixType b = expr_type(*e.b, info, db);
      return MatrixType{Dim::product(a.row, b.row), a.col};
    }
    case Expr::Kind::Dot: {
      MatrixType a = expr_type(*e.a, info, db);
      MatrixType b = expr_type(*e.b, info, db);
      return MatrixType{a.row, b.col};
    }
    case Expr::Kind::Tr: {
      MatrixType a = expr_type(*e.a, info, db);
      return MatrixType{a.col, a.row};
    }
    case Expr::Kind::Sum: {
      MatrixType a = expr_type(*e.a, info, db);
      return MatrixType{a.row, Dim::unit()};
    }
    case Expr::Kind::Bool:
      return expr_type(*e.a, info, db);
    case Expr::Kind::Filter: {
      const std::string table = predicate_table(*e.pred, db);
      return MatrixType{Dim::unit(), db.tables.at(table).row_dim};
    }
    case Expr::Kind::Lift: {
      const std::string table = scalar_table(*e.scalar, db);
      return MatrixType{Dim::unit(), db.tables.at(table).row_dim};
    }
    case Expr::Kind::Calc:
      return MatrixType{Dim::unit(), Dim::unit()};
  }
  throw TypeError("cannot type expression '" + pretty(e) + "'");
}

}  // namespace laq
