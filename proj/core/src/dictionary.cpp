// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/dictionary.hpp"

#include <charconv>
#include <chrono>

#include "laq/error.hpp"

namespace laq {

ValueType value_type_from_name(std::string_view name) {
  if (name == "string") return ValueType::String;
  if (name == "date") return ValueType::Date;
  if (name == "integer") return ValueType::Integer;
  if (name == "decimal") return ValueType::Decimal;
  throw SyntaxError("unknown value type '" + std::string(name) + "'");
}

std::int64_t parse_date_days(std::string_view text, std::string* normalized) {
  int y = 0, m = 0, d = 0;
  auto parse_int = [&](std::string_view part, int& out) {
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return ec == std::errc() && p == part.data() + part.size();
  };
  const auto d1 = text.find('-', 1);
  const auto d2 = d1 == std::string_view::npos ? d1 : text.find('-', d1 + 1);
  if (d1 == std::string_view::npos || d2 == std::string_view::npos ||
      !parse_int(text.substr(0, d1), y) || !parse_int(text.substr(d1 + 1, d2 - d1 - 1), m) ||
      !parse_int(text.substr(d2 + 1), d)) {
    throw ParseError("malformed date '" + std::string(text) + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(unsigned(m)),
                                        std::chrono::day(unsigned(d))};
  if (!ymd.ok()) throw ParseError("invalid date '" + std::string(text) + "'");
  if (normalized) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    *normalized = buf;
  }
  return std::chrono::sys_days(ymd).time_since_epoch().count();
}

std::uint64_t Dictionary::intern(std::string_view label) {
  std::string norm;
  std::int64_t key = 0;
  std::string_view canon = label;
  switch (vtype_) {
    case ValueType::Date:
      key = parse_date_days(label, &norm);
      canon = norm;
      break;
    case ValueType::Integer: {
      auto [p, ec] = std::from_chars(label.data(), label.data() + label.size(), key);
      if (ec != std::errc() || p != label.data() + label.size())
        throw ParseError("malformed integer label '" + std::string(label) + "'");
      break;
    }
    default:
      break;
  }
  if (auto it = forward_.find(canon); it != forward_.end()) return it->second;
  if (frozen_)
    throw FrozenDictionary("dictionary '" + space_id_ + "' is frozen; cannot intern '" +
                           std::string(canon) + "'");
  const std::uint64_t idx = reverse_.size();
  reverse_.emplace_back(canon);
  keys_.push_back(key);
  forward_.emplace(reverse_.back(), idx);
  return idx;
}

std::optional<std::uint64_t> Dictionary::lookup(std::string_view label) const {
  std::string norm;
  std::string_view canon = label;
  if (vtype_ == ValueType::Date) {
    parse_date_days(label, &norm);
    canon = norm;
  }
  auto it = forward_.find(canon);
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

}  // namespace laq
