// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "laq/dictionary.hpp"
#include "laq/matrix.hpp"

namespace laq {

/// Encodes a dimension column as a functional projection matrix of shape
/// |dict| x values.size(); column i carries a single 1 at intern(values[i]).
/// New labels grow the dictionary (subject to its frozen flag).
TypedMatrix encode_dimension(const std::vector<std::string>& values, Dictionary& dict,
                             const Dim& table_rows);

/// Foreign-key variant: lookup-only against the shared key dictionary; a
/// value absent from it raises ReferentialIntegrity.
TypedMatrix encode_foreign_key(const std::vector<std::string>& values, const Dictionary& dict,
                               const Dim& table_rows);

/// Interns the primary-key values in table row order and returns the
/// symbolic identity over the key space. The dictionary must be empty, an
/// exact mirror of these values in this order, or strictly extended by them
/// (append loads). Raises DuplicateKey / KeyOrderViolation otherwise.
TypedMatrix encode_primary_key(const std::vector<std::string>& values, Dictionary& dict);

/// Delta-segment variant: interns the (all-new) key values and returns the
/// functional projection of the appended columns only (|K| x values.size()).
TypedMatrix encode_primary_key_delta(const std::vector<std::string>& values, Dictionary& dict,
                                     const Dim& delta_rows);

/// Encodes a measure column as a dense row vector of type rows -> 1.
/// Raises ParseError (with the row number) on a malformed numeric value.
TypedMatrix encode_measure(const std::vector<std::string>& values, const Dim& table_rows);

}  // namespace laq
