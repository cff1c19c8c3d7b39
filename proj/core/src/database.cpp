// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/database.hpp"

#include <algorithm>
#include <fstream>

#include "laq/error.hpp"

namespace laq {

bool LoadedDatabase::has_attr(std::string_view column) const {
  for (const auto& [name, t] : tables) {
    if (t.columns.count(std::string(column))) return true;
  }
  return false;
}

const AttributeSpec& LoadedDatabase::attr_spec(std::string_view column) const {
  const AttributeSpec* a = schema.find_attr(column);
  if (!a) throw NameResolution("unknown attribute '" + std::string(column) + "'");
  return *a;
}

const TypedMatrix& LoadedDatabase::attr(std::string_view column) const {
  const AttributeSpec& a = attr_spec(column);
  auto t = tables.find(a.table);
  if (t == tables.end() || !t->second.columns.count(a.column)) {
    throw NameResolution("attribute '" + std::string(column) + "' was not loaded");
  }
  return t->second.columns.at(a.column);
}

const LoadedDatabase::Table& LoadedDatabase::table_of(std::string_view column) const {
  const AttributeSpec& a = attr_spec(column);
  auto t = tables.find(a.table);
  if (t == tables.end()) throw NameResolution("table '" + a.table + "' was not loaded");
  return t->second;
}

const Dictionary* LoadedDatabase::dictionary(std::string_view space_id) const {
  auto it = spaces.find(std::string(space_id));
  return it == spaces.end() ? nullptr : it->second.get();
}

std::string LoadedDatabase::label(const Dim& space, std::uint64_t i) const {
  if (const Dictionary* d = dictionary(space.space)) return d->label(i);
  return std::to_string(i);
}

void LoadedDatabase::freeze_dictionaries() {
  for (auto& [id, d] : spaces) d->freeze();
}

std::map<std::uint32_t, std::vector<std::string>> read_table_columns(
    const TableSpec& table, const std::set<std::uint32_t>& positions, const std::string& data_dir,
    std::uint64_t* row_count) {
  const std::string path = data_dir.empty() ? table.path : data_dir + "/" + table.path;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file '" + path + "'");

  std::map<std::uint32_t, std::vector<std::string>> out;
  for (std::uint32_t p : positions) out[p];
  const std::uint32_t max_pos = positions.empty() ? 0 : *positions.rbegin();

  std::string line;
  std::uint64_t row = 0;
  bool skip_header = table.header;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (skip_header) {
      skip_header = false;
      continue;
    }
    // dbgen convention: optional trailing delimiter.
    std::string_view rest(line);
    if (!rest.empty() && rest.back() == table.delimiter) rest.remove_suffix(1);

    std::uint32_t field = 0;
    std::size_t start = 0;
    auto take = [&](std::string_view f) {
      if (auto it = out.find(field); it != out.end()) it->second.emplace_back(f);
    };
    for (std::size_t i = 0; i <= rest.size(); ++i) {
      if (i == rest.size() || rest[i] == table.delimiter) {
        take(rest.substr(start, i - start));
        start = i + 1;
        ++field;
      }
    }
    if (!positions.empty() && field <= max_pos) {
      throw ParseError("file '" + path + "' row " + std::to_string(row) + ": expected at least " +
                       std::to_string(max_pos + 1) + " fields, found " + std::to_string(field));
    }
    ++row;
  }
  if (row_count) *row_count = row;
  return out;
}

LoadedDatabase load(const SchemaSpec& spec, const std::set<std::string>& needed,
                    const std::string& data_dir) {
  LoadedDatabase db;
  db.schema = spec;

  // Resolve the needed attribute set and pull in the primary keys of every
  // participating table (the identity encoding requires them mapped first).
  std::map<std::string, std::set<std::string>> per_table;  // table -> columns
  for (const auto& name : needed) {
    const AttributeSpec* a = spec.find_attr(name);
    if (!a) throw NameResolution("unknown attribute '" + name + "'");
    per_table[a->table].insert(a->column);
  }
  // FK targets participate even when none of their own attributes do.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& l : spec.links) {
      if (per_table.count(l.fk_table) && per_table[l.fk_table].count(l.fk_column) &&
          !per_table[l.pk_table].count(l.pk_column)) {
        per_table[l.pk_table].insert(l.pk_column);
        changed = true;
      }
    }
    for (auto& [tname, cols] : per_table) {
      const TableSpec* t = spec.find_table(tname);
      for (const auto& c : t->columns) {
        if (c.kind == AttrKind::PrimaryKey && !cols.count(c.column)) {
          cols.insert(c.column);
          changed = true;
        }
      }
    }
  }

  struct Pending {
    const TableSpec* table;
    std::map<std::uint32_t, std::vector<std::string>> raw;
  };
  std::vector<Pending> pending;
  for (const auto& [tname, cols] : per_table) {
    const TableSpec* t = spec.find_table(tname);
    std::set<std::uint32_t> positions;
    for (const auto& c : t->columns) {
      if (cols.count(c.column)) positions.insert(c.position);
    }
    std::uint64_t rows = 0;
    auto raw = read_table_columns(*t, positions, data_dir, &rows);
    auto& tab = db.tables[tname];
    tab.rows = rows;
    tab.row_dim = Dim::atomic("#" + tname, rows);
    pending.push_back(Pending{t, std::move(raw)});
  }

  auto space_dict = [&](const AttributeSpec& a) -> std::shared_ptr<Dictionary>& {
    auto& d = db.spaces[a.space];
    if (!d) d = std::make_shared<Dictionary>(a.space, a.vtype);
    return d;
  };

  // Pass 1: primary keys, in table row order.
  for (auto& p : pending) {
    auto& tab = db.tables[p.table->name];
    for (const auto& c : p.table->columns) {
      if (c.kind != AttrKind::PrimaryKey || !p.raw.count(c.position)) continue;
      auto& dict = space_dict(c);
      TypedMatrix enc = encode_primary_key(p.raw.at(c.position), *dict);
      tab.row_dim = enc.row_dim();  // the table's row space IS the key space
      tab.columns.emplace(c.column, std::move(enc));
    }
  }
  // Pass 2: everything else.
  for (auto& p : pending) {
    auto& tab = db.tables[p.table->name];
    for (const auto& c : p.table->columns) {
      if (c.kind == AttrKind::PrimaryKey || !p.raw.count(c.position)) continue;
      const auto& values = p.raw.at(c.position);
      switch (c.kind) {
        case AttrKind::Dimension:
          tab.columns.emplace(c.column, encode_dimension(values, *space_dict(c), tab.row_dim));
          break;
        case AttrKind::ForeignKey:
          tab.columns.emplace(c.column, encode_foreign_key(values, *space_dict(c), tab.row_dim));
          break;
        case AttrKind::Measure:
          tab.columns.emplace(c.column, encode_measure(values, tab.row_dim));
          break;
        default:
          break;
      }
    }
  }

  // Pass 3: a dictionary shared across tables may have grown after a
  // projection over it was built; re-pad those row spaces to the final size.
  for (auto& [tname, tab] : db.tables) {
    for (auto& [cname, enc] : tab.columns) {
      const Dim& rd = enc.row_dim();
      auto it = db.spaces.find(rd.space);
      if (it == db.spaces.end() || rd.card == it->second->size()) continue;
      Csc padded = enc.csc();
      padded.nrows = it->second->size();
      enc = TypedMatrix(std::move(padded), Dim::atomic(rd.space, padded.nrows), enc.col_dim());
    }
  }

  db.freeze_dictionaries();
  return db;
}

}  // namespace laq
