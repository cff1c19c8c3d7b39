// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace laq {

enum class ValueType { String, Date, Integer, Decimal };

ValueType value_type_from_name(std::string_view name);

/// Bijective label<->index map for one label space. Indices are dense and
/// assigned in first-seen order ("the first available integer value").
/// Dates are normalized to ISO-8601 and carry a day-number sort key; integer
/// labels carry their numeric value for order comparisons.
class Dictionary {
 public:
  Dictionary(std::string space_id, ValueType vtype)
      : space_id_(std::move(space_id)), vtype_(vtype) {}

  /// Returns the index of `label`, interning it if absent. Throws
  /// FrozenDictionary when a new label hits a frozen dictionary, and
  /// ParseError when the label does not parse as the space's value type.
  std::uint64_t intern(std::string_view label);

  std::optional<std::uint64_t> lookup(std::string_view label) const;

  const std::string& label(std::uint64_t index) const { return reverse_[index]; }

  /// Day number for dates, numeric value for integers, 0 for strings.
  std::int64_t sort_key(std::uint64_t index) const { return keys_[index]; }

  std::uint64_t size() const { return reverse_.size(); }
  const std::string& space_id() const { return space_id_; }
  ValueType vtype() const { return vtype_; }

  bool frozen() const { return frozen_; }
  void freeze() { frozen_ = true; }
  void unfreeze() { frozen_ = false; }

 private:
  struct SvHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::string space_id_;
  ValueType vtype_;
  bool frozen_{false};
  std::unordered_map<std::string, std::uint64_t, SvHash, std::equal_to<>> forward_;
  std::vector<std::string> reverse_;
  std::vector<std::int64_t> keys_;
};

/// Normalizes an ISO-8601 date string and returns its civil day number.
/// Throws ParseError on malformed input.
std::int64_t parse_date_days(std::string_view text, std::string* normalized = nullptr);

}  // namespace laq
