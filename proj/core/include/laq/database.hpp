// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>

#include "laq/encode.hpp"
#include "laq/matrix.hpp"
#include "laq/schema.hpp"

namespace laq {

/// Encoded columns and dictionaries for the loaded part of a database.
struct LoadedDatabase {
  struct Table {
    std::uint64_t rows{0};
    Dim row_dim;                                // key space when a PK is loaded
    std::map<std::string, TypedMatrix> columns;  // by column name
  };

  SchemaSpec schema;
  std::map<std::string, Table> tables;
  std::map<std::string, std::shared_ptr<Dictionary>> spaces;

  bool has_attr(std::string_view column) const;
  const AttributeSpec& attr_spec(std::string_view column) const;
  const TypedMatrix& attr(std::string_view column) const;
  const Table& table_of(std::string_view column) const;
  const Dictionary* dictionary(std::string_view space_id) const;

  /// Label of index i in an atomic space; falls back to the index itself for
  /// spaces without a dictionary (anonymous row spaces).
  std::string label(const Dim& space, std::uint64_t i) const;

  void freeze_dictionaries();
};

/// Loads only the requested columns (by bare column name) from the data
/// directory; primary keys of the involved key spaces load first so that the
/// identity encoding holds. An empty `needed` loads nothing.
LoadedDatabase load(const SchemaSpec& spec, const std::set<std::string>& needed,
                    const std::string& data_dir);

/// Reads one delimited table file per the table spec; returns the selected
/// 0-based positions' values, one vector per requested position.
std::map<std::uint32_t, std::vector<std::string>> read_table_columns(
    const TableSpec& table, const std::set<std::uint32_t>& positions, const std::string& data_dir,
    std::uint64_t* row_count);

}  // namespace laq
