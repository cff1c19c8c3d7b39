// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace laq {

/// A typed index space: either the unit space "1", an atomic label space
/// (backed by a dictionary or a table's row numbering), or a product space
/// created by the Khatri-Rao pairing of two spaces.
///
/// Conformance compares both the space identifier and the cardinality; two
/// spaces with equal sizes but different identifiers do not conform.
struct Dim {
  std::string space{"1"};
  std::uint64_t card{1};
  // Product decomposition, outer component first; empty for atomic spaces.
  // A product index r over (a, b) decodes as (r / b.card, r % b.card).
  std::vector<Dim> parts;

  bool is_unit() const { return space == "1"; }
  bool is_product() const { return !parts.empty(); }

  static Dim unit() { return Dim{}; }

  static Dim atomic(std::string id, std::uint64_t cardinality) {
    Dim d;
    d.space = std::move(id);
    d.card = cardinality;
    return d;
  }

  // Unit is the neutral element of the pairing, so products with it collapse;
  // this keeps the j*q+k row arithmetic free of phantom size-1 factors.
  static Dim product(const Dim& a, const Dim& b) {
    if (a.is_unit()) return b;
    if (b.is_unit()) return a;
    Dim d;
    d.space = "(" + a.space + "*" + b.space + ")";
    d.card = a.card * b.card;
    d.parts = {a, b};
    return d;
  }

  friend bool operator==(const Dim& x, const Dim& y) {
    return x.space == y.space && x.card == y.card;
  }
  friend bool operator!=(const Dim& x, const Dim& y) { return !(x == y); }
};

/// In-order list of the atomic (non-unit) component spaces of a dimension.
inline void flatten_into(const Dim& d, std::vector<Dim>& out) {
  if (d.is_unit()) return;
  if (!d.is_product()) {
    out.push_back(d);
    return;
  }
  for (const Dim& p : d.parts) flatten_into(p, out);
}

inline std::vector<Dim> flatten(const Dim& d) {
  std::vector<Dim> out;
  flatten_into(d, out);
  return out;
}

/// Decodes a row index of a (possibly product) space into one index per
/// atomic component, inverting the j*q+k layout.
inline void decode_index_into(const Dim& d, std::uint64_t r,
                              std::vector<std::uint64_t>& out) {
  if (d.is_unit()) return;
  if (!d.is_product()) {
    out.push_back(r);
    return;
  }
  const std::uint64_t q = d.parts[1].card;
  decode_index_into(d.parts[0], r / q, out);
  decode_index_into(d.parts[1], r % q, out);
}

inline std::vector<std::uint64_t> decode_index(const Dim& d, std::uint64_t r) {
  std::vector<std::uint64_t> out;
  decode_index_into(d, r, out);
  return out;
}

/// Re-encodes component indices into a flat row index; inverse of
/// decode_index for conforming component counts.
inline std::uint64_t encode_index(const Dim& d,
                                  const std::vector<std::uint64_t>& comps,
                                  std::size_t& pos) {
  if (d.is_unit()) return 0;
  if (!d.is_product()) return comps[pos++];
  const std::uint64_t j = encode_index(d.parts[0], comps, pos);
  const std::uint64_t k = encode_index(d.parts[1], comps, pos);
  return j * d.parts[1].card + k;
}

inline std::uint64_t encode_index(const Dim& d,
                                  const std::vector<std::uint64_t>& comps) {
  std::size_t pos = 0;
  return encode_index(d, comps, pos);
}

}  // namespace laq
