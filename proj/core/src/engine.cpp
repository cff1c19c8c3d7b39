// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/engine.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "laq/error.hpp"

namespace laq {

namespace {

const TypedMatrix& attr_matrix(const std::string& name, const LoadedDatabase& db,
                               const AttrOverrides* overrides) {
  if (overrides) {
    if (auto it = overrides->find(name); it != overrides->end()) return it->second;
  }
  return db.attr(name);
}

double parse_number(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw EvalError("malformed numeric literal '" + s + "'");
  }
  return v;
}

bool match_like(const std::string& text, const std::string& pattern) {
  // '%' wildcards only: anchored head/tail segments, ordered middles.
  std::vector<std::string> segs;
  std::size_t start = 0;
  while (true) {
    auto pct = pattern.find('%', start);
    segs.push_back(pattern.substr(start, pct - start));
    if (pct == std::string::npos) break;
    start = pct + 1;
  }
  const bool anchored_head = pattern.empty() || pattern.front() != '%';
  const bool anchored_tail = pattern.empty() || pattern.back() != '%';
  std::size_t pos = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string& s = segs[i];
    if (s.empty()) continue;
    if (i == 0 && anchored_head) {
      if (text.compare(0, s.size(), s) != 0) return false;
      pos = s.size();
      continue;
    }
    if (i + 1 == segs.size() && anchored_tail) {
      if (text.size() < pos + s.size()) return false;
      return text.compare(text.size() - s.size(), s.size(), s) == 0;
    }
    auto found = text.find(s, pos);
    if (found == std::string::npos) return false;
    pos = found + s.size();
  }
  return true;
}

// Typed comparison of a label (by dictionary index) against a literal.
struct LabelPred {
  const Dictionary& dict;

  bool compare(std::uint64_t idx, Cmp cmp, const std::string& lit) const {
    switch (dict.vtype()) {
      case ValueType::Date:
        return cmp_apply_int(cmp, dict.sort_key(idx), parse_date_days(lit));
      case ValueType::Integer:
        return cmp_apply_int(cmp, dict.sort_key(idx), (long long)parse_number(lit));
      case ValueType::Decimal:
        return cmp_apply_double(cmp, parse_number(dict.label(idx)), parse_number(lit));
      case ValueType::String:
        return cmp_apply_string(cmp, dict.label(idx), lit);
    }
    return false;
  }
};

// One 0/1 filter vector per table; the dimension path is the two-step form:
// a mask over the label space composed with the projection.
class PredicateEval {
 public:
  PredicateEval(const LoadedDatabase& db, const AttrOverrides* overrides)
      : db_(db), overrides_(overrides) {}

  TypedMatrix eval(const Predicate& p) {
    switch (p.kind) {
      case Predicate::Kind::Atom:
        return atom(p.atom);
      case Predicate::Kind::And:
        return hadamard(eval(*p.lhs), eval(*p.rhs));
      case Predicate::Kind::Or:
        return booleanize(add(eval(*p.lhs), eval(*p.rhs)));
      case Predicate::Kind::Not: {
        TypedMatrix v = eval(*p.lhs);
        DenseVec out;
        out.values.assign(v.ncols(), 1.0);
        for_each_in_col_range(v, [&](std::uint64_t c) { out.values[c] = 0.0; });
        return TypedMatrix(std::move(out), Dim::unit(), v.col_dim());
      }
    }
    throw EvalError("unreachable predicate kind");
  }

 private:
  template <class F>
  static void for_each_in_col_range(const TypedMatrix& v, F&& f) {
    for_each_entry(v, [&](std::uint64_t, std::uint64_t c, double x) {
      if (x != 0.0) f(c);
    });
  }

  TypedMatrix atom(const PredAtom& a) {
    const AttributeSpec& spec = db_.attr_spec(a.attr);
    if (a.kind == PredAtom::Kind::CompareAttr) return compare_attrs(a);
    if (spec.kind == AttrKind::Measure) return measure_atom(a);
    return label_atom(a, spec);
  }

  TypedMatrix label_atom(const PredAtom& a, const AttributeSpec& spec) {
    const TypedMatrix& proj = attr_matrix(a.attr, db_, overrides_);
    const Dictionary* dict = db_.dictionary(spec.space);
    if (!dict) throw NameResolution("no dictionary for space '" + spec.space + "'");
    LabelPred lp{*dict};

    // Step 1: mask over the label space.
    CscBuilder mask(1, dict->size());
    auto push_matching = [&](auto&& match) {
      for (std::uint64_t i = 0; i < dict->size(); ++i) {
        if (match(i)) mask.push(0, 1.0);
        mask.close_column();
      }
    };
    switch (a.kind) {
      case PredAtom::Kind::Compare:
        push_matching([&](std::uint64_t i) { return lp.compare(i, a.cmp, a.literal); });
        break;
      case PredAtom::Kind::Between:
        push_matching([&](std::uint64_t i) {
          return lp.compare(i, Cmp::Ge, a.lo) && lp.compare(i, Cmp::Le, a.hi);
        });
        break;
      case PredAtom::Kind::In:
        push_matching([&](std::uint64_t i) {
          return std::any_of(a.set.begin(), a.set.end(), [&](const std::string& lit) {
            return lp.compare(i, Cmp::Eq, lit);
          });
        });
        break;
      case PredAtom::Kind::Like:
        push_matching([&](std::uint64_t i) { return match_like(dict->label(i), a.pattern); });
        break;
      default:
        throw EvalError("unreachable atom kind");
    }
    TypedMatrix m(mask.finish(), Dim::unit(), proj.row_dim());
    // Step 2: one composition with the Boolean attribute.
    return compose(m, proj);
  }

  TypedMatrix measure_atom(const PredAtom& a) {
    const TypedMatrix& vec = attr_matrix(a.attr, db_, overrides_);
    const auto& vals = vec.dense().values;
    DenseVec out;
    out.values.resize(vals.size());
    if (a.kind == PredAtom::Kind::Compare) {
      const double lit = parse_number(a.literal);
      for (std::size_t i = 0; i < vals.size(); ++i) {
        out.values[i] = cmp_apply_double(a.cmp, vals[i], lit) ? 1.0 : 0.0;
      }
    } else if (a.kind == PredAtom::Kind::Between) {
      const double lo = parse_number(a.lo), hi = parse_number(a.hi);
      for (std::size_t i = 0; i < vals.size(); ++i) {
        out.values[i] = (vals[i] >= lo && vals[i] <= hi) ? 1.0 : 0.0;
      }
    } else {
      throw TypeError("operator not applicable to a measure attribute");
    }
    return TypedMatrix(std::move(out), Dim::unit(), vec.col_dim());
  }

  // Per-row label index of a functional projection column.
  static std::vector<std::uint64_t> column_rows(const TypedMatrix& proj) {
    std::vector<std::uint64_t> idx(proj.ncols());
    for (std::uint64_t c = 0; c < proj.ncols(); ++c) {
      bool hit = false;
      for_each_in_col(proj, c, [&](std::uint64_t r, double) {
        idx[c] = r;
        hit = true;
      });
      if (!hit) throw EvalError("projection column " + std::to_string(c) + " has no entry");
    }
    return idx;
  }

  TypedMatrix compare_attrs(const PredAtom& a) {
    const AttributeSpec& sa = db_.attr_spec(a.attr);
    const AttributeSpec& sb = db_.attr_spec(a.attr2);
    const TypedMatrix& ma = attr_matrix(a.attr, db_, overrides_);
    const TypedMatrix& mb = attr_matrix(a.attr2, db_, overrides_);
    DenseVec out;
    if (sa.kind == AttrKind::Measure) {
      const auto& va = ma.dense().values;
      const auto& vb = mb.dense().values;
      out.values.resize(va.size());
      for (std::size_t i = 0; i < va.size(); ++i) {
        out.values[i] = cmp_apply_double(a.cmp, va[i], vb[i]) ? 1.0 : 0.0;
      }
      return TypedMatrix(std::move(out), Dim::unit(), ma.col_dim());
    }
    const Dictionary* da = db_.dictionary(sa.space);
    const Dictionary* db2 = db_.dictionary(sb.space);
    auto ia = column_rows(ma);
    auto ib = column_rows(mb);
    out.values.resize(ia.size());
    for (std::size_t i = 0; i < ia.size(); ++i) {
      bool hit = false;
      switch (da->vtype()) {
        case ValueType::Date:
        case ValueType::Integer:
          hit = cmp_apply_int(a.cmp, da->sort_key(ia[i]), db2->sort_key(ib[i]));
          break;
        case ValueType::Decimal:
          hit = cmp_apply_double(a.cmp, parse_number(da->label(ia[i])),
                                 parse_number(db2->label(ib[i])));
          break;
        case ValueType::String:
          hit = cmp_apply_string(a.cmp, da->label(ia[i]), db2->label(ib[i]));
          break;
      }
      out.values[i] = hit ? 1.0 : 0.0;
    }
    return TypedMatrix(std::move(out), Dim::unit(), ma.col_dim());
  }

  const LoadedDatabase& db_;
  const AttrOverrides* overrides_;
};

std::vector<double> densify(const TypedMatrix& v) {
  std::vector<double> out(v.is_row_vector() ? v.ncols() : v.nrows(), 0.0);
  for_each_entry(v, [&](std::uint64_t r, std::uint64_t c, double x) {
    out[v.is_row_vector() ? c : r] = x;
  });
  return out;
}

class LiftEval {
 public:
  LiftEval(const LoadedDatabase& db, const AttrOverrides* overrides)
      : db_(db), overrides_(overrides) {}

  TypedMatrix eval(const ScalarExpr& e) {
    const Dim rows = row_space(e);
    DenseVec out;
    out.values = eval_vec(e, rows.card);
    return TypedMatrix(std::move(out), Dim::unit(), rows);
  }

 private:
  Dim row_space(const ScalarExpr& e) {
    switch (e.kind) {
      case ScalarExpr::Kind::Attr:
        return attr_matrix(e.attr, db_, overrides_).col_dim();
      case ScalarExpr::Kind::Literal:
        break;
      case ScalarExpr::Kind::Case: {
        PredicateEval pe(db_, overrides_);
        return pe.eval(*e.cond).col_dim();
      }
      default: {
        try {
          return row_space(*e.lhs);
        } catch (const TypeError&) {
          return row_space(*e.rhs);
        }
      }
    }
    throw TypeError("lift expression references no attribute");
  }

  std::vector<double> eval_vec(const ScalarExpr& e, std::uint64_t n) {
    switch (e.kind) {
      case ScalarExpr::Kind::Attr:
        return densify(attr_matrix(e.attr, db_, overrides_));
      case ScalarExpr::Kind::Literal:
        return std::vector<double>(n, e.literal);
      case ScalarExpr::Kind::Case: {
        PredicateEval pe(db_, overrides_);
        auto c = densify(pe.eval(*e.cond));
        auto l = eval_vec(*e.lhs, n);
        auto r = eval_vec(*e.rhs, n);
        for (std::size_t i = 0; i < l.size(); ++i) l[i] = c[i] != 0.0 ? l[i] : r[i];
        return l;
      }
      default: {
        auto l = eval_vec(*e.lhs, n);
        auto r = eval_vec(*e.rhs, n);
        for (std::size_t i = 0; i < l.size(); ++i) {
          switch (e.kind) {
            case ScalarExpr::Kind::Add: l[i] += r[i]; break;
            case ScalarExpr::Kind::Sub: l[i] -= r[i]; break;
            case ScalarExpr::Kind::Mul: l[i] *= r[i]; break;
            default:
              if (r[i] == 0.0) {
                throw EvalError("division by zero at row " + std::to_string(i));
              }
              l[i] /= r[i];
          }
        }
        return l;
      }
    }
  }

  const LoadedDatabase& db_;
  const AttrOverrides* overrides_;
};

double eval_calc(const CalcExpr& c, const Environment& env) {
  switch (c.kind) {
    case CalcExpr::Kind::Var:
      return scalar_value(env.at(c.var));
    case CalcExpr::Kind::Literal:
      return c.literal;
    default: {
      const double l = eval_calc(*c.lhs, env);
      const double r = eval_calc(*c.rhs, env);
      switch (c.kind) {
        case CalcExpr::Kind::Add: return l + r;
        case CalcExpr::Kind::Sub: return l - r;
        case CalcExpr::Kind::Mul: return l * r;
        default:
          if (r == 0.0) throw EvalError("calc: division by zero");
          return l / r;
      }
    }
  }
}

TypedMatrix eval_expr(const Expr& e, const Environment& env, const LoadedDatabase& db,
                      const AttrOverrides* overrides) {
  switch (e.kind) {
    case Expr::Kind::Var:
      return env.at(e.name);
    case Expr::Kind::AttrRef:
      return attr_matrix(e.name, db, overrides);
    case Expr::Kind::Krao:
      return krao(eval_expr(*e.a, env, db, overrides), eval_expr(*e.b, env, db, overrides));
    case Expr::Kind::Dot:
      return compose(eval_expr(*e.a, env, db, overrides), eval_expr(*e.b, env, db, overrides));
    case Expr::Kind::Tr:
      return converse(eval_expr(*e.a, env, db, overrides));
    case Expr::Kind::Sum:
      return row_sum(eval_expr(*e.a, env, db, overrides));
    case Expr::Kind::Bool:
      return booleanize(eval_expr(*e.a, env, db, overrides));
    case Expr::Kind::Filter:
      return eval_predicate(*e.pred, db, overrides);
    case Expr::Kind::Lift:
      return eval_lift(*e.scalar, db, overrides);
    case Expr::Kind::Calc: {
      DenseVec v;
      v.values.push_back(eval_calc(*e.calc, env));
      return TypedMatrix(std::move(v), Dim::unit(), Dim::unit());
    }
    case Expr::Kind::Name:
      break;
  }
  throw EvalError("expression was not resolved; run typecheck first");
}

}  // namespace

double scalar_value(const TypedMatrix& m) {
  if (!m.is_scalar()) throw EvalError("expected a scalar (1 -> 1) matrix");
  return m.at(0, 0);
}

TypedMatrix eval_predicate(const Predicate& p, const LoadedDatabase& db,
                           const AttrOverrides* overrides) {
  return PredicateEval(db, overrides).eval(p);
}

TypedMatrix eval_lift(const ScalarExpr& e, const LoadedDatabase& db,
                      const AttrOverrides* overrides) {
  return LiftEval(db, overrides).eval(e);
}

Environment evaluate(const LaScript& script, const LoadedDatabase& db,
                     const AttrOverrides* overrides) {
  Environment env;
  for (const auto& b : script.bindings) {
    env.vars.insert_or_assign(b.name, eval_expr(b.expr, env, db, overrides));
  }
  return env;
}

ResultTable materialize(const TypedMatrix& result, const LoadedDatabase& db, SortMode sort) {
  if (!result.is_row_vector() && !result.is_col_vector()) {
    throw EvalError("materialize expects a vector-typed result");
  }
  const Dim& space = result.is_col_vector() ? result.row_dim() : result.col_dim();
  const auto atoms = flatten(space);

  ResultTable t;
  for (const auto& d : atoms) t.label_schema.push_back(d.space);

  for_each_entry(result, [&](std::uint64_t r, std::uint64_t c, double v) {
    if (v == 0.0) return;
    const std::uint64_t idx = result.is_col_vector() ? r : c;
    const auto comps = decode_index(space, idx);
    std::vector<std::string> labels;
    labels.reserve(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k) labels.push_back(db.label(atoms[k], comps[k]));
    t.rows.emplace_back(std::move(labels), v);
  });

  if (sort == SortMode::ByLabel) {
    std::stable_sort(t.rows.begin(), t.rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  } else if (sort == SortMode::ByValueDesc) {
    std::stable_sort(t.rows.begin(), t.rows.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
  }
  return t;
}

namespace {

TypedMatrix filter_by_value(const TypedMatrix& v, Cmp cmp, double threshold) {
  CscBuilder out(v.nrows(), v.ncols());
  std::uint64_t col = 0;
  for_each_entry(v, [&](std::uint64_t r, std::uint64_t c, double x) {
    while (col < c) {
      out.close_column();
      ++col;
    }
    if (cmp_apply_double(cmp, x, threshold)) out.push(r, x);
  });
  return TypedMatrix(out.finish(), v.row_dim(), v.col_dim());
}

}  // namespace

ResultTable run_script(LaScript& script, const LoadedDatabase& db, const RunOptions& opts) {
  TypeInfo info = typecheck(script, db);
  if (opts.rewrite) rewrite_script(script, info, db);
  Environment env = evaluate(script, db);

  std::vector<OutputSpec> outputs = script.outputs;
  if (outputs.empty()) outputs.push_back(OutputSpec{script.result_var(), ""});

  std::optional<double> threshold;
  if (script.having) {
    threshold = script.having->rhs_is_var ? scalar_value(env.at(script.having->rhs_var))
                                          : script.having->literal;
  }

  ResultTable merged;
  bool first = true;
  for (const auto& o : outputs) {
    TypedMatrix v = env.at(o.var);
    if (script.having && script.having->var == o.var) {
      v = filter_by_value(v, script.having->cmp, *threshold);
    }
    ResultTable t = materialize(v, db, opts.sort);
    if (!o.tag.empty()) {
      t.label_schema.push_back("output");
      for (auto& row : t.rows) row.first.push_back(o.tag);
    }
    if (first) {
      merged = std::move(t);
      first = false;
    } else {
      if (t.label_schema != merged.label_schema) {
        throw TypeError("tagged outputs must share one label space");
      }
      merged.rows.insert(merged.rows.end(), t.rows.begin(), t.rows.end());
    }
  }
  return merged;
}

namespace {

bool is_row_vector_type(const MatrixType& t) { return t.row.is_unit(); }

bool is_pk_ref(const Expr& e, const LoadedDatabase& db) {
  if (e.kind != Expr::Kind::AttrRef) return false;
  return db.attr_spec(e.name).kind == AttrKind::PrimaryKey;
}

}  // namespace

Expr rewrite_expr(const Expr& e, const TypeInfo& info, const LoadedDatabase& db) {
  Expr out = e;
  if (out.a) out.a = std::make_shared<Expr>(rewrite_expr(*out.a, info, db));
  if (out.b) out.b = std::make_shared<Expr>(rewrite_expr(*out.b, info, db));

  if (out.kind != Expr::Kind::Dot) return out;
  const Expr& p = *out.a;
  const Expr& x = *out.b;

  // P . tr(Q KR v)  ->  (v KR P) . tr(Q)
  if (x.kind == Expr::Kind::Tr && x.a->kind == Expr::Kind::Krao) {
    const Expr& q = *x.a->a;
    const Expr& v = *x.a->b;
    if (is_row_vector_type(expr_type(v, info, db))) {
      Expr kr;
      kr.kind = Expr::Kind::Krao;
      kr.a = std::make_shared<Expr>(v);
      kr.b = std::make_shared<Expr>(p);
      Expr tq;
      tq.kind = Expr::Kind::Tr;
      tq.a = std::make_shared<Expr>(q);
      Expr dot;
      dot.kind = Expr::Kind::Dot;
      dot.a = std::make_shared<Expr>(std::move(kr));
      dot.b = std::make_shared<Expr>(std::move(tq));
      return dot;
    }
  }
  // P . tr(v)  ->  sum(v KR P)   (columnar rendering)
  if (x.kind == Expr::Kind::Tr && is_row_vector_type(expr_type(*x.a, info, db))) {
    Expr kr;
    kr.kind = Expr::Kind::Krao;
    kr.a = x.a;
    kr.b = std::make_shared<Expr>(p);
    Expr sum;
    sum.kind = Expr::Kind::Sum;
    sum.a = std::make_shared<Expr>(std::move(kr));
    return sum;
  }
  // P . (id KR v) -> v KR P  (the diagonal is symmetric; id is a PK ref)
  if (x.kind == Expr::Kind::Krao) {
    const Expr* id_side = nullptr;
    const Expr* v_side = nullptr;
    if (is_pk_ref(*x.a, db) && is_row_vector_type(expr_type(*x.b, info, db))) {
      id_side = x.a.get();
      v_side = x.b.get();
    } else if (is_pk_ref(*x.b, db) && is_row_vector_type(expr_type(*x.a, info, db))) {
      id_side = x.b.get();
      v_side = x.a.get();
    }
    if (id_side) {
      Expr kr;
      kr.kind = Expr::Kind::Krao;
      kr.a = std::make_shared<Expr>(*v_side);
      kr.b = std::make_shared<Expr>(p);
      return kr;
    }
  }
  return out;
}

void rewrite_script(LaScript& script, const TypeInfo& info, const LoadedDatabase& db) {
  for (auto& b : script.bindings) b.expr = rewrite_expr(b.expr, info, db);
}

std::string to_csv(const ResultTable& t) {
  std::ostringstream os;
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (std::size_t i = 0; i < t.label_schema.size(); ++i) os << field(t.label_schema[i]) << ',';
  os << "value\n";
  for (const auto& [labels, v] : t.rows) {
    for (const auto& l : labels) os << field(l) << ',';
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    os.write(buf, p - buf);
    os << '\n';
  }
  return os.str();
}

}  // namespace laq
