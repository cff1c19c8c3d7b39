// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/schema.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "laq/error.hpp"

namespace laq {

namespace {

AttrKind kind_from_name(const std::string& s, int line) {
  if (s == "dimension") return AttrKind::Dimension;
  if (s == "measure") return AttrKind::Measure;
  if (s == "primary_key") return AttrKind::PrimaryKey;
  if (s == "foreign_key") return AttrKind::ForeignKey;
  throw SyntaxError("schema line " + std::to_string(line) + ": unknown kind '" + s + "'");
}

std::pair<std::string, std::string> split_qualified(const std::string& s, int line) {
  auto dot = s.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == s.size()) {
    throw SyntaxError("schema line " + std::to_string(line) + ": expected table.column, got '" +
                      s + "'");
  }
  return {s.substr(0, dot), s.substr(dot + 1)};
}

}  // namespace

const TableSpec* SchemaSpec::find_table(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const AttributeSpec* SchemaSpec::find_attr(std::string_view column) const {
  const AttributeSpec* found = nullptr;
  for (const auto& t : tables) {
    for (const auto& c : t.columns) {
      if (c.column == column) {
        if (found) throw NameResolution("ambiguous attribute name '" + std::string(column) + "'");
        found = &c;
      }
    }
  }
  return found;
}

SchemaSpec parse_schema(const std::string& text) {
  SchemaSpec spec;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  TableSpec* current = nullptr;

  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string word;
    if (!(ls >> word)) continue;

    if (word == "table") {
      TableSpec t;
      if (!(ls >> t.name >> t.path)) {
        throw SyntaxError("schema line " + std::to_string(line) + ": table needs a name and path");
      }
      std::string opt;
      while (ls >> opt) {
        if (opt.rfind("delim=", 0) == 0 && opt.size() == 7) {
          t.delimiter = opt[6];
        } else if (opt == "header") {
          t.header = true;
        } else {
          throw SyntaxError("schema line " + std::to_string(line) + ": unknown table option '" +
                            opt + "'");
        }
      }
      if (spec.find_table(t.name)) {
        throw SyntaxError("schema line " + std::to_string(line) + ": duplicate table '" + t.name +
                          "'");
      }
      spec.tables.push_back(std::move(t));
      current = &spec.tables.back();
    } else if (word == "col") {
      if (!current) {
        throw SyntaxError("schema line " + std::to_string(line) + ": col before any table");
      }
      AttributeSpec a;
      a.table = current->name;
      std::string kind, type, opt;
      if (!(ls >> a.position >> a.column >> kind >> type)) {
        throw SyntaxError("schema line " + std::to_string(line) +
                          ": col needs <pos> <name> <kind> <type>");
      }
      a.kind = kind_from_name(kind, line);
      try {
        a.vtype = value_type_from_name(type);
      } catch (const SyntaxError&) {
        throw SyntaxError("schema line " + std::to_string(line) + ": unknown type '" + type + "'");
      }
      a.space = a.kind == AttrKind::Measure ? "" : a.column;
      while (ls >> opt) {
        if (opt.rfind("space=", 0) == 0) {
          a.space = opt.substr(6);
        } else {
          throw SyntaxError("schema line " + std::to_string(line) + ": unknown col option '" +
                            opt + "'");
        }
      }
      for (const auto& c : current->columns) {
        if (c.position == a.position) {
          throw SyntaxError("schema line " + std::to_string(line) + ": duplicate column position " +
                            std::to_string(a.position) + " in table '" + current->name + "'");
        }
        if (c.column == a.column) {
          throw SyntaxError("schema line " + std::to_string(line) + ": duplicate column name '" +
                            a.column + "'");
        }
      }
      current->columns.push_back(std::move(a));
    } else if (word == "link") {
      std::string pk, fk;
      if (!(ls >> pk >> fk)) {
        throw SyntaxError("schema line " + std::to_string(line) + ": link needs <pk> <fk>");
      }
      KeyLink l;
      std::tie(l.pk_table, l.pk_column) = split_qualified(pk, line);
      std::tie(l.fk_table, l.fk_column) = split_qualified(fk, line);
      spec.links.push_back(std::move(l));
    } else {
      throw SyntaxError("schema line " + std::to_string(line) + ": unknown directive '" + word +
                        "'");
    }
  }

  // Link validation; foreign keys inherit the primary key's label space.
  for (const auto& l : spec.links) {
    const TableSpec* pt = spec.find_table(l.pk_table);
    const TableSpec* ft = spec.find_table(l.fk_table);
    if (!pt || !ft) {
      throw SyntaxError("link " + l.pk_table + "." + l.pk_column + " -> " + l.fk_table + "." +
                        l.fk_column + " references an undeclared table");
    }
    AttributeSpec* pk = nullptr;
    AttributeSpec* fk = nullptr;
    for (auto& t : spec.tables) {
      for (auto& c : t.columns) {
        if (t.name == l.pk_table && c.column == l.pk_column) pk = &c;
        if (t.name == l.fk_table && c.column == l.fk_column) fk = &c;
      }
    }
    if (!pk || pk->kind != AttrKind::PrimaryKey) {
      throw SyntaxError("link names '" + l.pk_table + "." + l.pk_column +
                        "' which is not a declared primary_key");
    }
    if (!fk || fk->kind != AttrKind::ForeignKey) {
      throw SyntaxError("link names '" + l.fk_table + "." + l.fk_column +
                        "' which is not a declared foreign_key");
    }
    fk->space = pk->space;
  }
  for (const auto& t : spec.tables) {
    for (const auto& c : t.columns) {
      if (c.kind == AttrKind::ForeignKey) {
        const bool linked = std::any_of(spec.links.begin(), spec.links.end(), [&](const KeyLink& l) {
          return l.fk_table == t.name && l.fk_column == c.column;
        });
        if (!linked) {
          throw SyntaxError("foreign_key '" + t.name + "." + c.column + "' has no link");
        }
      }
    }
  }
  return spec;
}

SchemaSpec parse_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_schema(ss.str());
}

}  // namespace laq
