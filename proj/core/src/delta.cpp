// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/delta.hpp"

#include <filesystem>
#include <functional>
#include <json.hpp>

#include "laq/error.hpp"

namespace laq {

bool DeltaBatch::empty() const {
  for (const auto& [name, t] : tables) {
    if (t.rows) return false;
  }
  return true;
}

std::set<std::string> DeltaBatch::appended_tables() const {
  std::set<std::string> out;
  for (const auto& [name, t] : tables) {
    if (t.rows) out.insert(name);
  }
  return out;
}

DeltaBatch read_delta(const LoadedDatabase& db, const std::string& delta_dir) {
  DeltaBatch batch;
  for (const auto& [tname, tab] : db.tables) {
    const TableSpec* ts = db.schema.find_table(tname);
    const std::string path = delta_dir + "/" + ts->path;
    if (!std::filesystem::exists(path)) continue;
    std::set<std::uint32_t> positions;
    for (const auto& c : ts->columns) {
      if (tab.columns.count(c.column)) positions.insert(c.position);
    }
    DeltaBatch::TableDelta d;
    d.raw = read_table_columns(*ts, positions, delta_dir, &d.rows);
    if (d.rows == 0) continue;
    batch.tables.emplace(tname, std::move(d));
  }
  return batch;
}

namespace {

TypedMatrix concat_columns(const TypedMatrix& base, const TypedMatrix& delta, const Dim& row_dim,
                           const Dim& col_dim) {
  if (base.is_dense()) {
    DenseVec v;
    v.values = base.dense().values;
    const auto& add = delta.dense().values;
    v.values.insert(v.values.end(), add.begin(), add.end());
    return TypedMatrix(std::move(v), row_dim, col_dim);
  }
  return TypedMatrix(csc_hconcat(base.csc(), delta.csc()), row_dim, col_dim);
}

}  // namespace

void apply_delta(LoadedDatabase& db, DeltaBatch& batch) {
  for (auto& [id, dict] : db.spaces) dict->unfreeze();

  // Primary keys first: the shared dictionaries must grow in table row order.
  for (auto& [tname, d] : batch.tables) {
    const TableSpec* ts = db.schema.find_table(tname);
    auto& tab = db.tables.at(tname);
    d.row_dim = Dim::atomic(tab.row_dim.space, d.rows);
    for (const auto& c : ts->columns) {
      if (c.kind != AttrKind::PrimaryKey || !d.raw.count(c.position)) continue;
      auto dict = db.spaces.at(c.space);
      d.encoded.emplace(c.column, encode_primary_key_delta(d.raw.at(c.position), *dict, d.row_dim));
    }
  }
  for (auto& [tname, d] : batch.tables) {
    const TableSpec* ts = db.schema.find_table(tname);
    for (const auto& c : ts->columns) {
      if (c.kind == AttrKind::PrimaryKey || !d.raw.count(c.position)) continue;
      const auto& values = d.raw.at(c.position);
      switch (c.kind) {
        case AttrKind::Dimension:
          d.encoded.emplace(c.column, encode_dimension(values, *db.spaces.at(c.space), d.row_dim));
          break;
        case AttrKind::ForeignKey:
          d.encoded.emplace(c.column,
                            encode_foreign_key(values, *db.spaces.at(c.space), d.row_dim));
          break;
        case AttrKind::Measure:
          d.encoded.emplace(c.column, encode_measure(values, d.row_dim));
          break;
        default:
          break;
      }
    }
  }

  // Extend the base encodings by the new columns.
  for (auto& [tname, d] : batch.tables) {
    auto& tab = db.tables.at(tname);
    const std::uint64_t new_rows = tab.rows + d.rows;
    Dim new_row_dim = Dim::atomic(tab.row_dim.space, tab.row_dim.card);
    if (db.spaces.count(new_row_dim.space)) {
      new_row_dim.card = db.spaces.at(new_row_dim.space)->size();  // PK table: key space grew
    } else {
      new_row_dim.card = new_rows;
    }
    for (auto& [cname, enc] : tab.columns) {
      const AttributeSpec* a = db.schema.find_attr(cname);
      if (a->kind == AttrKind::PrimaryKey) {
        enc = identity(new_row_dim);
        continue;
      }
      const TypedMatrix& delta_enc = d.encoded.at(cname);
      Dim row = enc.row_dim();
      if (auto it = db.spaces.find(row.space); it != db.spaces.end()) {
        row.card = it->second->size();
      }
      enc = concat_columns(enc, delta_enc, a->kind == AttrKind::Measure ? Dim::unit() : row,
                           new_row_dim);
    }
    tab.rows = new_rows;
    tab.row_dim = new_row_dim;
  }

  // Dictionary growth can widen projections in tables that saw no appends.
  for (auto& [tname, tab] : db.tables) {
    for (auto& [cname, enc] : tab.columns) {
      const Dim& rd = enc.row_dim();
      auto it = db.spaces.find(rd.space);
      if (it == db.spaces.end() || rd.card == it->second->size() || !enc.is_csc()) continue;
      Csc padded = enc.csc();
      padded.nrows = it->second->size();
      enc = TypedMatrix(std::move(padded), Dim::atomic(rd.space, padded.nrows), enc.col_dim());
    }
    if (auto it = db.spaces.find(tab.row_dim.space); it != db.spaces.end()) {
      tab.row_dim.card = it->second->size();
    }
  }

  for (auto& [id, dict] : db.spaces) dict->freeze();
}

CachedQuery make_cache(LaScript& script, const LoadedDatabase& db) {
  typecheck(script, db);
  Environment env = evaluate(script, db);
  CachedQuery cache;
  cache.script_text = pretty(script);
  std::vector<OutputSpec> outputs = script.outputs;
  if (outputs.empty()) outputs.push_back(OutputSpec{script.result_var(), ""});
  for (const auto& o : outputs) {
    const TypedMatrix& v = env.at(o.var);
    CachedQuery::Output out;
    out.tag = o.tag;
    out.space = v.is_col_vector() ? v.row_dim() : v.col_dim();
    for_each_entry(v, [&](std::uint64_t r, std::uint64_t c, double x) {
      out.entries.emplace_back(v.is_col_vector() ? r : c, x);
    });
    cache.outputs.push_back(std::move(out));
  }
  return cache;
}

namespace {

enum class DState { Ind, Col, Row, Agg };

struct SafetyCheck {
  const LoadedDatabase& db;
  const LaScript& script;
  std::string fact;       // the single appended table
  std::string fact_rows;  // its row space id
  std::map<std::string, DState> binding_state;

  [[noreturn]] void reject(const std::string& why) {
    throw NotDeltaSafe("script is not delta-safe for appends to '" + fact + "': " + why);
  }

  DState combine_krao(DState a, DState b) {
    if (a == DState::Ind) return b;
    if (b == DState::Ind) return a;
    if (a == DState::Col && b == DState::Col) return DState::Col;
    reject("pairing of two delta-dependent terms that are not column-aligned");
  }

  DState combine_dot(DState a, DState b) {
    if (a == DState::Ind && b == DState::Ind) return DState::Ind;
    if (a == DState::Ind) return b == DState::Row ? DState::Agg : b;
    if (b == DState::Ind) return a == DState::Col ? DState::Agg : a;
    if (a == DState::Col && b == DState::Row) return DState::Agg;  // same-row contraction
    reject("composition mixes delta-dependent terms beyond one contraction");
  }

  DState walk(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var:
        return binding_state.at(e.name);
      case Expr::Kind::AttrRef: {
        const AttributeSpec& a = db.attr_spec(e.name);
        if (a.table != fact) return DState::Ind;
        if (a.kind == AttrKind::PrimaryKey) {
          reject("references the appended table's own primary key projection");
        }
        return DState::Col;
      }
      case Expr::Kind::Filter:
        return predicate_table(*e.pred, db) == fact ? DState::Col : DState::Ind;
      case Expr::Kind::Lift:
        return scalar_table(*e.scalar, db) == fact ? DState::Col : DState::Ind;
      case Expr::Kind::Tr: {
        DState s = walk(*e.a);
        if (s == DState::Col) return DState::Row;
        if (s == DState::Row) return DState::Col;
        return s;
      }
      case Expr::Kind::Sum: {
        DState s = walk(*e.a);
        return s == DState::Col ? DState::Agg : s;
      }
      case Expr::Kind::Bool: {
        DState s = walk(*e.a);
        if (s == DState::Agg) reject("booleanize applied to an aggregated delta term");
        return s;
      }
      case Expr::Kind::Krao:
        return combine_krao(walk(*e.a), walk(*e.b));
      case Expr::Kind::Dot:
        return combine_dot(walk(*e.a), walk(*e.b));
      case Expr::Kind::Calc: {
        if (calc_depends(*e.calc)) reject("calc arithmetic over a delta-dependent scalar");
        return DState::Ind;
      }
      case Expr::Kind::Name:
        break;
    }
    throw NotDeltaSafe("unresolved script; run typecheck first");
  }

  bool calc_depends(const CalcExpr& c) {
    if (c.kind == CalcExpr::Kind::Var) return binding_state.at(c.var) != DState::Ind;
    if (c.kind == CalcExpr::Kind::Literal) return false;
    return calc_depends(*c.lhs) || calc_depends(*c.rhs);
  }
};

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.name);
  if (e.kind == Expr::Kind::Calc) {
    // walk calc vars
    std::function<void(const CalcExpr&)> rec = [&](const CalcExpr& c) {
      if (c.kind == CalcExpr::Kind::Var) out.insert(c.var);
      if (c.lhs) rec(*c.lhs);
      if (c.rhs) rec(*c.rhs);
    };
    rec(*e.calc);
  }
  if (e.a) collect_vars(*e.a, out);
  if (e.b) collect_vars(*e.b, out);
}

std::set<std::string> reachable_bindings(const LaScript& script) {
  std::set<std::string> want;
  if (script.outputs.empty()) {
    want.insert(script.result_var());
  } else {
    for (const auto& o : script.outputs) want.insert(o.var);
  }
  if (script.having && script.having->rhs_is_var) want.insert(script.having->rhs_var);
  // bindings appear in dependency order, so one reverse pass closes the set
  std::set<std::string> closed = want;
  for (auto it = script.bindings.rbegin(); it != script.bindings.rend(); ++it) {
    if (!closed.count(it->name)) continue;
    std::set<std::string> vars;
    collect_vars(it->expr, vars);
    closed.insert(vars.begin(), vars.end());
  }
  return closed;
}

}  // namespace

void check_delta_safe(const LaScript& script, const LoadedDatabase& db,
                      const std::set<std::string>& appended) {
  const auto reachable = reachable_bindings(script);

  std::set<std::string> attrs;
  for (const auto& b : script.bindings) {
    if (!reachable.count(b.name)) continue;
    LaScript one;
    one.bindings.push_back(b);
    auto sub = referenced_attributes(one);
    // referenced_attributes treats script bindings as attrs here; filter
    for (const auto& n : sub) {
      if (!script.find(n)) attrs.insert(n);
    }
  }
  std::set<std::string> touched;
  for (const auto& a : attrs) {
    const std::string& t = db.attr_spec(a).table;
    if (appended.count(t)) touched.insert(t);
  }
  if (touched.empty()) return;  // Q'(0) = 0
  if (touched.size() > 1) {
    throw NotDeltaSafe(
        "script references " + std::to_string(touched.size()) +
        " appended tables; cross-delta terms require full recomputation");
  }
  const std::string fact = *touched.begin();
  const Dim& fact_rows = db.tables.at(fact).row_dim;

  // The appended table's row space must not be referenced structurally by
  // other tables' encodings used in the script (the contraction cardinality
  // would disagree under delta bindings).
  for (const auto& a : attrs) {
    const AttributeSpec& spec = db.attr_spec(a);
    if (spec.table == fact) continue;
    const TypedMatrix& m = db.attr(a);
    if (m.row_dim().space == fact_rows.space || m.col_dim().space == fact_rows.space) {
      throw NotDeltaSafe("attribute '" + a + "' is keyed by the appended table's row space '" +
                         fact_rows.space + "'");
    }
  }

  SafetyCheck ck{db, script, fact, fact_rows.space, {}};
  DState result_state = DState::Ind;
  for (const auto& b : script.bindings) {
    if (!reachable.count(b.name)) {
      ck.binding_state[b.name] = DState::Ind;  // never inspected
      continue;
    }
    DState s = ck.walk(b.expr);
    ck.binding_state[b.name] = s;
  }

  std::vector<std::string> result_vars;
  if (script.outputs.empty()) {
    result_vars.push_back(script.result_var());
  } else {
    for (const auto& o : script.outputs) result_vars.push_back(o.var);
  }
  for (const auto& v : result_vars) {
    result_state = ck.binding_state.at(v);
    if (result_state == DState::Col || result_state == DState::Row) {
      ck.reject("result '" + v + "' is still indexed by the appended table's rows");
    }
  }
  if (script.having) {
    bool dep = ck.binding_state.at(script.having->var) != DState::Ind;
    if (script.having->rhs_is_var) {
      dep = dep || ck.binding_state.at(script.having->rhs_var) != DState::Ind;
    }
    if (dep) ck.reject("having filters a delta-dependent aggregate (not additive)");
  }
}

namespace {

std::vector<std::pair<std::uint64_t, double>> realign_entries(
    const std::vector<std::pair<std::uint64_t, double>>& entries, const Dim& from, const Dim& to) {
  if (from == to) return entries;
  std::vector<std::pair<std::uint64_t, double>> out;
  out.reserve(entries.size());
  for (const auto& [idx, v] : entries) {
    const auto comps = decode_index(from, idx);
    out.emplace_back(encode_index(to, comps), v);
  }
  return out;
}

}  // namespace

CachedQuery run_incremental(LaScript& script, const CachedQuery& cache, const LoadedDatabase& db,
                            const DeltaBatch& batch) {
  if (cache.script_text != pretty(script)) {
    throw NotDeltaSafe("cached result belongs to a different script");
  }
  TypeInfo info = typecheck(script, db);

  CachedQuery merged;
  merged.script_text = cache.script_text;

  const auto appended = batch.appended_tables();
  check_delta_safe(script, db, appended);

  // Determine the (at most one) appended table the script touches.
  std::string fact;
  for (const auto& a : referenced_attributes(script)) {
    const std::string& t = db.attr_spec(a).table;
    if (appended.count(t)) fact = t;
  }

  std::vector<OutputSpec> outputs = script.outputs;
  if (outputs.empty()) outputs.push_back(OutputSpec{script.result_var(), ""});

  if (fact.empty()) {
    // No appended table is referenced: the delta contribution is zero; only
    // re-align the label spaces, which may have grown.
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      const MatrixType& t = info.bindings.at(outputs[i].var);
      const Dim& space = t.col.is_unit() ? t.row : t.col;
      CachedQuery::Output out;
      out.tag = outputs[i].tag;
      out.space = space;
      out.entries = realign_entries(cache.outputs[i].entries, cache.outputs[i].space, space);
      merged.outputs.push_back(std::move(out));
    }
    return merged;
  }

  const AttrOverrides& overrides = batch.tables.at(fact).encoded;
  Environment denv = evaluate(script, db, &overrides);

  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const TypedMatrix& dv = denv.at(outputs[i].var);
    CachedQuery::Output out;
    out.tag = outputs[i].tag;
    out.space = dv.is_col_vector() ? dv.row_dim() : dv.col_dim();

    std::map<std::uint64_t, double> acc;
    for (const auto& [idx, v] : realign_entries(cache.outputs[i].entries, cache.outputs[i].space,
                                                out.space)) {
      acc[idx] += v;
    }
    for_each_entry(dv, [&](std::uint64_t r, std::uint64_t c, double x) {
      acc[dv.is_col_vector() ? r : c] += x;
    });
    for (const auto& [idx, v] : acc) {
      if (v != 0.0) out.entries.emplace_back(idx, v);
    }
    merged.outputs.push_back(std::move(out));
  }
  return merged;
}

ResultTable materialize_cache(const CachedQuery& cache, const LoadedDatabase& db, SortMode sort) {
  ResultTable merged;
  bool first = true;
  for (const auto& o : cache.outputs) {
    CscBuilder b(o.space.card, 1);
    for (const auto& [idx, v] : o.entries) b.push(idx, v);
    b.close_column();
    TypedMatrix vec(b.finish(), o.space, Dim::unit());
    ResultTable t = materialize(vec, db, sort);
    if (!o.tag.empty()) {
      t.label_schema.push_back("output");
      for (auto& row : t.rows) row.first.push_back(o.tag);
    }
    if (first) {
      merged = std::move(t);
      first = false;
    } else {
      merged.rows.insert(merged.rows.end(), t.rows.begin(), t.rows.end());
    }
  }
  return merged;
}

namespace {

nlohmann::json dim_to_json(const Dim& d) {
  nlohmann::json j;
  j["space"] = d.space;
  j["card"] = d.card;
  for (const auto& p : d.parts) j["parts"].push_back(dim_to_json(p));
  return j;
}

Dim dim_from_json(const nlohmann::json& j) {
  Dim d;
  d.space = j.at("space").get<std::string>();
  d.card = j.at("card").get<std::uint64_t>();
  if (j.contains("parts")) {
    for (const auto& p : j.at("parts")) d.parts.push_back(dim_from_json(p));
  }
  return d;
}

}  // namespace

std::string cache_to_json(const CachedQuery& cache) {
  nlohmann::json j;
  j["script"] = cache.script_text;
  for (const auto& o : cache.outputs) {
    nlohmann::json jo;
    jo["tag"] = o.tag;
    jo["space"] = dim_to_json(o.space);
    for (const auto& [idx, v] : o.entries) jo["entries"].push_back({idx, v});
    j["outputs"].push_back(std::move(jo));
  }
  return j.dump(2);
}

CachedQuery cache_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  CachedQuery cache;
  cache.script_text = j.at("script").get<std::string>();
  if (j.contains("outputs")) {
    for (const auto& jo : j.at("outputs")) {
      CachedQuery::Output o;
      o.tag = jo.at("tag").get<std::string>();
      o.space = dim_from_json(jo.at("space"));
      if (jo.contains("entries")) {
        for (const auto& e : jo.at("entries")) {
          o.entries.emplace_back(e.at(0).get<std::uint64_t>(), e.at(1).get<double>());
        }
      }
      cache.outputs.push_back(std::move(o));
    }
  }
  return cache;
}

}  // namespace laq
