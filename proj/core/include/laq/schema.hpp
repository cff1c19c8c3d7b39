// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "laq/dictionary.hpp"

namespace laq {

enum class AttrKind { Dimension, Measure, PrimaryKey, ForeignKey };

struct AttributeSpec {
  std::string table;
  std::string column;
  AttrKind kind{AttrKind::Dimension};
  ValueType vtype{ValueType::String};
  std::string space;       // label space id (empty for measures)
  std::uint32_t position{0};  // 0-based column position in the data file
};

struct TableSpec {
  std::string name;
  std::string path;
  char delimiter{'|'};
  bool header{false};
  std::vector<AttributeSpec> columns;
};

struct KeyLink {
  std::string pk_table, pk_column;
  std::string fk_table, fk_column;
};

/// Textual form of the schema diagram: tables with attribute roles, and the
/// primary/foreign key pairs that share one label space.
struct SchemaSpec {
  std::vector<TableSpec> tables;
  std::vector<KeyLink> links;

  const TableSpec* find_table(std::string_view name) const;
  /// Resolves a bare column name across all tables; nullptr when absent,
  /// NameResolution when ambiguous.
  const AttributeSpec* find_attr(std::string_view column) const;
};

/// Parses the line-oriented schema format:
///   table <name> <path> [delim=X] [header]
///   col <pos> <name> <kind> <type> [space=<id>]
///   link <pk_table>.<pk_col> <fk_table>.<fk_col>
/// '#' starts a comment. Raises SyntaxError with a line number.
SchemaSpec parse_schema(const std::string& text);
SchemaSpec parse_schema_file(const std::string& path);

}  // namespace laq
