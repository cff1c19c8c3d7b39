// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "laq/engine.hpp"

namespace laq {

/// Appended rows for some tables: raw column values plus, after apply_delta,
/// the encoded delta columns (indexing into the grown shared dictionaries).
struct DeltaBatch {
  struct TableDelta {
    std::uint64_t rows{0};
    std::map<std::uint32_t, std::vector<std::string>> raw;  // by column position
    AttrOverrides encoded;                                   // by column name
    Dim row_dim;                                             // delta-only column space
  };
  std::map<std::string, TableDelta> tables;

  bool empty() const;
  std::set<std::string> appended_tables() const;
};

/// Reads appended rows for every loaded table that has a file in delta_dir
/// (same file names as the base load); only the loaded columns are read.
DeltaBatch read_delta(const LoadedDatabase& db, const std::string& delta_dir);

/// Encodes the batch against the database's dictionaries (grown append-only;
/// existing indices never change) and extends the base encodings. Base
/// payloads are immutable and stay untouched; tables get new concatenated
/// columns. Raises ReferentialIntegrity / DuplicateKey.
void apply_delta(LoadedDatabase& db, DeltaBatch& batch);

/// A cached query result in raw vector form, ready for additive maintenance.
struct CachedQuery {
  struct Output {
    std::string tag;
    Dim space;  // result label space at cache time
    std::vector<std::pair<std::uint64_t, double>> entries;
  };
  std::string script_text;  // canonical form, for staleness checks
  std::vector<Output> outputs;
};

/// Evaluates the script fully and captures the raw result vectors.
CachedQuery make_cache(LaScript& script, const LoadedDatabase& db);

/// Statically verifies that the script is additive in the appended tables'
/// rows: a single appended table, touched only through per-row (column-
/// aligned) references or one contraction; booleanize / calc / having over
/// delta-dependent terms are rejected. Throws NotDeltaSafe with the reason.
void check_delta_safe(const LaScript& script, const LoadedDatabase& db,
                      const std::set<std::string>& appended);

/// Q(M + dM) = Q(M) + Q'(dM): evaluates the script with the appended table's
/// attributes bound to the delta columns, re-aligns the cached vectors to the
/// grown label spaces, and add-merges. The database must already hold the
/// applied delta. Returns the updated cache.
CachedQuery run_incremental(LaScript& script, const CachedQuery& cache, const LoadedDatabase& db,
                            const DeltaBatch& batch);

/// Decodes a cache into the same labeled form run_script produces.
ResultTable materialize_cache(const CachedQuery& cache, const LoadedDatabase& db,
                              SortMode sort = SortMode::ByIndex);

std::string cache_to_json(const CachedQuery& cache);
CachedQuery cache_from_json(const std::string& text);

}  // namespace laq
