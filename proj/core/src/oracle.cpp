// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include "laq/error.hpp"

namespace laq::oracle {

namespace {

const std::string& first_attr_of(const Predicate& p) {
  if (p.kind == Predicate::Kind::Atom) return p.atom.attr;
  return first_attr_of(*p.lhs);
}

double to_number(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw EvalError("oracle: malformed number '" + s + "'");
  }
  return v;
}

// Neumaier-compensated accumulation.
struct Kahan {
  double sum{0.0}, c{0.0};
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  double get() const { return sum + c; }
};

bool like_match(const std::string& text, const std::string& pattern) {
  // recursive two-pointer match, '%' only
  std::size_t ti = 0, pi = 0;
  std::size_t star_p = std::string::npos, star_t = 0;
  while (ti < text.size()) {
    if (pi < pattern.size() && pattern[pi] == '%') {
      star_p = ++pi;
      star_t = ti;
    } else if (pi < pattern.size() && pattern[pi] == text[ti]) {
      ++pi;
      ++ti;
    } else if (star_p != std::string::npos) {
      pi = star_p;
      ti = ++star_t;
    } else {
      return false;
    }
  }
  while (pi < pattern.size() && pattern[pi] == '%') ++pi;
  return pi == pattern.size();
}

}  // namespace

DecodedTable::DecodedTable(const LoadedDatabase& db, const std::string& table) : name_(table) {
  auto it = db.tables.find(table);
  if (it == db.tables.end()) throw NameResolution("oracle: table '" + table + "' not loaded");
  rows_ = it->second.rows;
  for (const auto& [cname, enc] : it->second.columns) {
    const AttributeSpec& spec = db.attr_spec(cname);
    Column c;
    if (spec.kind == AttrKind::Measure) {
      c.measure = true;
      c.vtype = spec.vtype;
      c.values = enc.dense().values;
    } else {
      c.vtype = spec.vtype;
      c.dict = db.dictionary(spec.space);
      c.idx.resize(rows_);
      for_each_entry(enc, [&](std::uint64_t r, std::uint64_t col, double) { c.idx[col] = r; });
    }
    cols_.emplace(cname, std::move(c));
  }
}

const DecodedTable::Column& DecodedTable::col(const std::string& name) const {
  auto it = cols_.find(name);
  if (it == cols_.end()) {
    throw NameResolution("oracle: column '" + name + "' not loaded in '" + name_ + "'");
  }
  return it->second;
}

bool DecodedTable::is_measure(const std::string& c) const { return col(c).measure; }

double DecodedTable::measure(const std::string& c, std::uint64_t row) const {
  return col(c).values[row];
}

const std::string& DecodedTable::label(const std::string& c, std::uint64_t row) const {
  const Column& cc = col(c);
  return cc.dict->label(cc.idx[row]);
}

std::int64_t DecodedTable::sort_key(const std::string& c, std::uint64_t row) const {
  const Column& cc = col(c);
  return cc.dict->sort_key(cc.idx[row]);
}

ValueType DecodedTable::vtype(const std::string& c) const { return col(c).vtype; }

namespace {

bool compare_label_literal(const DecodedTable& t, const std::string& attr, std::uint64_t row,
                           Cmp cmp, const std::string& lit) {
  switch (t.vtype(attr)) {
    case ValueType::Date:
      return cmp_apply_int(cmp, t.sort_key(attr, row), parse_date_days(lit));
    case ValueType::Integer:
      return cmp_apply_int(cmp, t.sort_key(attr, row), (long long)to_number(lit));
    case ValueType::Decimal:
      return cmp_apply_double(cmp, to_number(t.label(attr, row)), to_number(lit));
    case ValueType::String:
      return cmp_apply_string(cmp, t.label(attr, row), lit);
  }
  return false;
}

bool atom_matches(const PredAtom& a, const DecodedTable& t, std::uint64_t row) {
  if (a.kind == PredAtom::Kind::CompareAttr) {
    if (t.is_measure(a.attr)) {
      return cmp_apply_double(a.cmp, t.measure(a.attr, row), t.measure(a.attr2, row));
    }
    switch (t.vtype(a.attr)) {
      case ValueType::Date:
      case ValueType::Integer:
        return cmp_apply_int(a.cmp, t.sort_key(a.attr, row), t.sort_key(a.attr2, row));
      case ValueType::Decimal:
        return cmp_apply_double(a.cmp, to_number(t.label(a.attr, row)),
                                to_number(t.label(a.attr2, row)));
      case ValueType::String:
        return cmp_apply_string(a.cmp, t.label(a.attr, row), t.label(a.attr2, row));
    }
    return false;
  }
  if (t.is_measure(a.attr)) {
    const double v = t.measure(a.attr, row);
    switch (a.kind) {
      case PredAtom::Kind::Compare:
        return cmp_apply_double(a.cmp, v, to_number(a.literal));
      case PredAtom::Kind::Between:
        return v >= to_number(a.lo) && v <= to_number(a.hi);
      default:
        throw TypeError("oracle: operator not applicable to a measure");
    }
  }
  switch (a.kind) {
    case PredAtom::Kind::Compare:
      return compare_label_literal(t, a.attr, row, a.cmp, a.literal);
    case PredAtom::Kind::Between:
      return compare_label_literal(t, a.attr, row, Cmp::Ge, a.lo) &&
             compare_label_literal(t, a.attr, row, Cmp::Le, a.hi);
    case PredAtom::Kind::In:
      return std::any_of(a.set.begin(), a.set.end(), [&](const std::string& lit) {
        return compare_label_literal(t, a.attr, row, Cmp::Eq, lit);
      });
    case PredAtom::Kind::Like:
      return like_match(t.label(a.attr, row), a.pattern);
    default:
      return false;
  }
}

}  // namespace

bool row_matches(const Predicate& p, const DecodedTable& t, std::uint64_t row) {
  switch (p.kind) {
    case Predicate::Kind::Atom:
      return atom_matches(p.atom, t, row);
    case Predicate::Kind::And:
      return row_matches(*p.lhs, t, row) && row_matches(*p.rhs, t, row);
    case Predicate::Kind::Or:
      return row_matches(*p.lhs, t, row) || row_matches(*p.rhs, t, row);
    case Predicate::Kind::Not:
      return !row_matches(*p.lhs, t, row);
  }
  return false;
}

namespace {

struct PlanContext {
  const RelPlan& plan;
  const LoadedDatabase& db;
  std::map<std::string, DecodedTable> tables;
  std::map<std::string, std::vector<std::uint64_t>> passing;  // filtered row ids
  std::map<std::string, std::uint64_t> current;               // table -> bound row

  const DecodedTable& table(const std::string& name) const { return tables.at(name); }

  std::string attr_table(const std::string& attr) const {
    return db.attr_spec(attr).table;
  }

  bool join_satisfied(const JoinPred& j) const {
    const std::string lt = attr_table(j.left);
    const std::string rt = attr_table(j.right);
    const DecodedTable& a = table(lt);
    const DecodedTable& b = table(rt);
    const std::uint64_t ra = current.at(lt), rb = current.at(rt);
    if (a.is_measure(j.left)) {
      return cmp_apply_double(j.cmp, a.measure(j.left, ra), b.measure(j.right, rb));
    }
    switch (a.vtype(j.left)) {
      case ValueType::Date:
      case ValueType::Integer:
        return cmp_apply_int(j.cmp, a.sort_key(j.left, ra), b.sort_key(j.right, rb));
      default:
        return cmp_apply_string(j.cmp, a.label(j.left, ra), b.label(j.right, rb));
    }
  }

  bool joins_ready_and_satisfied(std::size_t depth) const {
    for (const auto& j : plan.joins) {
      const std::string lt = attr_table(j.left);
      const std::string rt = attr_table(j.right);
      bool lb = false, rb = false;
      for (std::size_t i = 0; i <= depth; ++i) {
        lb = lb || plan.tables[i] == lt;
        rb = rb || plan.tables[i] == rt;
      }
      // check a join exactly when its second side becomes bound
      if (lb && rb && (plan.tables[depth] == lt || plan.tables[depth] == rt)) {
        if (!join_satisfied(j)) return false;
      }
    }
    return true;
  }
};

double eval_row_scalar(const ScalarExpr& e, const DecodedTable& t, std::uint64_t row) {
  switch (e.kind) {
    case ScalarExpr::Kind::Attr:
      return t.measure(e.attr, row);
    case ScalarExpr::Kind::Literal:
      return e.literal;
    case ScalarExpr::Kind::Add:
      return eval_row_scalar(*e.lhs, t, row) + eval_row_scalar(*e.rhs, t, row);
    case ScalarExpr::Kind::Sub:
      return eval_row_scalar(*e.lhs, t, row) - eval_row_scalar(*e.rhs, t, row);
    case ScalarExpr::Kind::Mul:
      return eval_row_scalar(*e.lhs, t, row) * eval_row_scalar(*e.rhs, t, row);
    case ScalarExpr::Kind::Div: {
      const double d = eval_row_scalar(*e.rhs, t, row);
      if (d == 0.0) throw EvalError("oracle: division by zero at row " + std::to_string(row));
      return eval_row_scalar(*e.lhs, t, row) / d;
    }
    case ScalarExpr::Kind::Case:
      return row_matches(*e.cond, t, row) ? eval_row_scalar(*e.lhs, t, row)
                                          : eval_row_scalar(*e.rhs, t, row);
  }
  return 0.0;
}

bool exists_match(const PlanContext& outer, const RelPlan& sub,
                  const std::vector<JoinPred>& correlation, const LoadedDatabase& db) {
  // single-table EXISTS subplans cover the studied queries
  const DecodedTable inner(db, sub.tables.at(0));
  for (std::uint64_t r = 0; r < inner.rows(); ++r) {
    bool ok = true;
    for (const auto& f : sub.filters) ok = ok && row_matches(f, inner, r);
    for (const auto& c : correlation) {
      if (!ok) break;
      const std::string ot = outer.attr_table(c.left);
      const DecodedTable& o = outer.table(ot);
      const std::uint64_t orow = outer.current.at(ot);
      switch (o.vtype(c.left)) {
        case ValueType::Date:
        case ValueType::Integer:
          ok = cmp_apply_int(c.cmp, o.sort_key(c.left, orow), inner.sort_key(c.right, r));
          break;
        default:
          ok = cmp_apply_string(c.cmp, o.label(c.left, orow), inner.label(c.right, r));
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

ResultTable eval_plan(const RelPlan& plan, const LoadedDatabase& db) {
  PlanContext ctx{plan, db, {}, {}, {}};
  for (const auto& t : plan.tables) ctx.tables.emplace(t, DecodedTable(db, t));

  // Filter pre-pass (row filters are per-table).
  for (const auto& tname : plan.tables) {
    const DecodedTable& t = ctx.tables.at(tname);
    std::vector<std::uint64_t> pass;
    for (std::uint64_t r = 0; r < t.rows(); ++r) {
      bool ok = true;
      for (const auto& f : plan.filters) {
        if (db.attr_spec(first_attr_of(f)).table != tname) continue;
        ok = ok && row_matches(f, t, r);
      }
      if (ok) pass.push_back(r);
    }
    ctx.passing.emplace(tname, std::move(pass));
  }

  struct Group {
    std::vector<Kahan> sums;
    std::vector<std::uint64_t> counts;
  };
  std::map<std::vector<std::string>, Group> groups;

  // Nested loops in plan order.
  std::function<void(std::size_t)> descend = [&](std::size_t depth) {
    if (depth == plan.tables.size()) {
      if (plan.exists_subplan &&
          !exists_match(ctx, *plan.exists_subplan, plan.exists_correlation, db)) {
        return;
      }
      std::vector<std::string> key;
      key.reserve(plan.group_keys.size());
      for (const auto& g : plan.group_keys) {
        const std::string gt = ctx.attr_table(g);
        key.push_back(ctx.table(gt).label(g, ctx.current.at(gt)));
      }
      auto& grp = groups[key];
      if (grp.sums.empty()) {
        grp.sums.resize(plan.aggregates.size());
        grp.counts.assign(plan.aggregates.size(), 0);
      }
      for (std::size_t i = 0; i < plan.aggregates.size(); ++i) {
        const Aggregate& a = plan.aggregates[i];
        if (a.count) {
          grp.counts[i]++;
        } else {
          const DecodedTable& t = ctx.table(a.table);
          grp.sums[i].add(eval_row_scalar(a.expr, t, ctx.current.at(a.table)));
        }
      }
      return;
    }
    const std::string& tname = plan.tables[depth];
    for (std::uint64_t r : ctx.passing.at(tname)) {
      ctx.current[tname] = r;
      if (!ctx.joins_ready_and_satisfied(depth)) continue;
      descend(depth + 1);
    }
  };
  descend(0);

  // HAVING with a total-relative threshold (the sub-query shape).
  double threshold = 0.0;
  if (plan.having) {
    threshold = plan.having->literal;
    if (plan.having->relative_to_total) {
      Kahan total;
      for (const auto& [key, g] : groups) {
        total.add(plan.aggregates[0].count ? double(g.counts[0]) : g.sums[0].get());
      }
      threshold *= total.get();
    }
  }

  ResultTable out;
  for (const auto& g : plan.group_keys) out.label_schema.push_back(db.attr_spec(g).space);
  const bool tagged = plan.aggregates.size() > 1;
  if (tagged) out.label_schema.push_back("output");
  for (const auto& [key, g] : groups) {
    for (std::size_t i = 0; i < plan.aggregates.size(); ++i) {
      const double v = plan.aggregates[i].count ? double(g.counts[i]) : g.sums[i].get();
      if (plan.having && !cmp_apply_double(plan.having->cmp, v, threshold)) continue;
      if (v == 0.0) continue;  // sparse semantics: zero cells are not stored
      auto labels = key;
      if (tagged) labels.push_back(plan.aggregates[i].tag);
      out.rows.emplace_back(std::move(labels), v);
    }
  }
  std::sort(out.rows.begin(), out.rows.end());
  return out;
}

CompareReport compare(const ResultTable& engine, const ResultTable& reference, double rel_tol) {
  std::map<std::vector<std::string>, double> lhs, rhs;
  for (const auto& [k, v] : engine.rows) lhs[k] += v;
  for (const auto& [k, v] : reference.rows) rhs[k] += v;

  auto close = [&](double a, double b) {
    if (a == b) return true;
    const double diff = std::abs(a - b);
    return diff <= rel_tol * std::max(std::abs(a), std::abs(b));
  };
  auto label_text = [](const std::vector<std::string>& k) {
    std::string s = "(";
    for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + k[i];
    return s + ")";
  };

  for (const auto& [k, v] : lhs) {
    auto it = rhs.find(k);
    const double r = it == rhs.end() ? 0.0 : it->second;
    if (!close(v, r)) {
      return {false, "first divergence at " + label_text(k) + ": engine=" + std::to_string(v) +
                         " reference=" + std::to_string(r)};
    }
  }
  for (const auto& [k, v] : rhs) {
    if (lhs.count(k)) continue;
    if (!close(0.0, v)) {
      return {false, "first divergence at " + label_text(k) +
                         ": engine=<absent> reference=" + std::to_string(v)};
    }
  }
  return {true, "match within tolerance " + std::to_string(rel_tol)};
}

}  // namespace laq::oracle
