// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#include "laq/minigen.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "laq/error.hpp"

namespace laq {

namespace {

// Modulo draws keep the byte stream independent of the standard library's
// distribution implementations.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  std::uint64_t next(std::uint64_t bound) { return bound ? gen() % bound : 0; }
};

std::string money(std::uint64_t cents) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%" PRIu64 ".%02u", cents / 100, unsigned(cents % 100));
  return buf;
}

std::string iso_date(std::int64_t days) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

std::int64_t day_number(int y, unsigned m, unsigned d) {
  using namespace std::chrono;
  return sys_days{year{y} / month{m} / day{d}}.time_since_epoch().count();
}

struct Out {
  std::ofstream f;
  explicit Out(const std::string& path) : f(path, std::ios::binary) {
    if (!f) throw IoError("cannot write '" + path + "'");
  }
  template <class... Ts>
  void row(const Ts&... fields) {
    bool first = true;
    ((f << (first ? "" : "|") << fields, first = false), ...);
    f << "|\n";
  }
};

const char* kRegions[5] = {"AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"};

struct NationRow {
  const char* name;
  int region;
};
const NationRow kNations[25] = {
    {"ALGERIA", 0},      {"ARGENTINA", 1}, {"BRAZIL", 1},   {"CANADA", 1},
    {"EGYPT", 4},        {"ETHIOPIA", 0},  {"FRANCE", 3},   {"GERMANY", 3},
    {"INDIA", 2},        {"INDONESIA", 2}, {"IRAN", 4},     {"IRAQ", 4},
    {"JAPAN", 2},        {"JORDAN", 4},    {"KENYA", 0},    {"MOROCCO", 0},
    {"MOZAMBIQUE", 0},   {"PERU", 1},      {"CHINA", 2},    {"ROMANIA", 3},
    {"SAUDI ARABIA", 4}, {"VIETNAM", 2},   {"RUSSIA", 3},   {"UNITED KINGDOM", 3},
    {"UNITED STATES", 1}};

const char* kSegments[5] = {"AUTOMOBILE", "BUILDING", "FURNITURE", "MACHINERY", "HOUSEHOLD"};
const char* kPriorities[5] = {"1-URGENT", "2-HIGH", "3-MEDIUM", "4-NOT SPECIFIED", "5-LOW"};
const char* kShipModes[7] = {"REG AIR", "AIR", "RAIL", "SHIP", "TRUCK", "MAIL", "FOB"};
const char* kType1[6] = {"STANDARD", "SMALL", "MEDIUM", "LARGE", "ECONOMY", "PROMO"};
const char* kType2[5] = {"ANODIZED", "BURNISHED", "PLATED", "POLISHED", "BRUSHED"};
const char* kType3[5] = {"TIN", "NICKEL", "BRASS", "STEEL", "COPPER"};
const char* kInstr[4] = {"DELIVER IN PERSON", "COLLECT COD", "NONE", "TAKE BACK RETURN"};

}  // namespace

void generate_mini(const MiniSpec& spec, const std::string& out_dir) {
  const std::uint64_t n_orders = spec.orders;
  const std::uint64_t n_li = spec.lineitems;
  const std::uint64_t n_cust = spec.customers ? spec.customers : std::max<std::uint64_t>(5, n_orders / 5);
  const std::uint64_t n_supp = spec.suppliers ? spec.suppliers : std::max<std::uint64_t>(25, n_orders / 5);
  const std::uint64_t n_part = spec.parts ? spec.parts : std::max<std::uint64_t>(10, n_orders / 2);

  std::filesystem::create_directories(out_dir);
  Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 1);

  {
    Out o(out_dir + "/region.tbl");
    for (int r = 0; r < 5; ++r) o.row(r, kRegions[r], "no comment");
  }
  {
    Out o(out_dir + "/nation.tbl");
    for (int n = 0; n < 25; ++n) o.row(n, kNations[n].name, kNations[n].region, "no comment");
  }
  {
    Out o(out_dir + "/supplier.tbl");
    for (std::uint64_t s = 1; s <= n_supp; ++s) {
      // Cycle the first 25 suppliers through every nation so that each
      // nation (GERMANY included) always has at least one supplier.
      const std::uint64_t nat = s <= 25 ? (s - 1) % 25 : rng.next(25);
      o.row(s, "Supplier#" + std::to_string(s), "addr" + std::to_string(s), nat,
            "11-" + std::to_string(100 + s), money(1000 + rng.next(900000)), "no comment");
    }
  }
  {
    Out o(out_dir + "/customer.tbl");
    for (std::uint64_t c = 1; c <= n_cust; ++c) {
      o.row(c, "Customer#" + std::to_string(c), "addr" + std::to_string(c), rng.next(25),
            "22-" + std::to_string(100 + c), money(1000 + rng.next(900000)),
            kSegments[rng.next(5)], "no comment");
    }
  }
  {
    Out o(out_dir + "/part.tbl");
    for (std::uint64_t p = 1; p <= n_part; ++p) {
      const std::string type = std::string(kType1[rng.next(6)]) + " " + kType2[rng.next(5)] + " " +
                               kType3[rng.next(5)];
      o.row(p, "Part#" + std::to_string(p), "Manufacturer#" + std::to_string(1 + rng.next(5)),
            "Brand#" + std::to_string(11 + rng.next(45)), type, 1 + rng.next(50),
            "JUMBO PKG", money(90000 + rng.next(100000)), "no comment");
    }
  }
  {
    Out o(out_dir + "/partsupp.tbl");
    for (std::uint64_t p = 1; p <= n_part; ++p) {
      const std::uint64_t nsup = 2 + rng.next(3);
      for (std::uint64_t k = 0; k < nsup && k < n_supp; ++k) {
        const std::uint64_t s = 1 + (p + k * (n_supp / 4 + 1)) % n_supp;
        o.row(p, s, 1 + rng.next(9999), money(100 + rng.next(99900)), "no comment");
      }
    }
  }

  const std::int64_t epoch = day_number(1992, 1, 1);
  const std::int64_t span = day_number(1998, 8, 2) - epoch;
  std::vector<std::uint64_t> okeys(n_orders);
  std::vector<std::int64_t> odates(n_orders);
  {
    Out o(out_dir + "/orders.tbl");
    for (std::uint64_t i = 0; i < n_orders; ++i) {
      okeys[i] = i * 4 + 1 + rng.next(3);  // sparse, distinct key values
      odates[i] = epoch + std::int64_t(rng.next(std::uint64_t(span - 121)));
      o.row(okeys[i], 1 + rng.next(n_cust), "O", money(1000 + rng.next(40000000)),
            iso_date(odates[i]), kPriorities[rng.next(5)], "Clerk#" + std::to_string(1 + rng.next(100)),
            0, "no comment");
    }
  }
  {
    Out o(out_dir + "/lineitem.tbl");
    for (std::uint64_t i = 0; i < n_li; ++i) {
      const std::uint64_t oi = rng.next(n_orders);
      const std::int64_t ship = odates[oi] + 1 + std::int64_t(rng.next(121));
      const std::int64_t commit = odates[oi] + 30 + std::int64_t(rng.next(61));
      const std::int64_t receipt = ship + 1 + std::int64_t(rng.next(30));
      const std::uint64_t qty = 1 + rng.next(50);
      o.row(okeys[oi], 1 + rng.next(n_part), 1 + rng.next(n_supp), 1 + i % 7, qty,
            money(90100 + rng.next(9000000)), money(rng.next(11)),
            money(rng.next(9)), rng.next(2) ? "R" : "A", rng.next(2) ? "O" : "F", iso_date(ship),
            iso_date(commit), iso_date(receipt), kInstr[rng.next(4)], kShipModes[rng.next(7)],
            "no comment");
    }
  }
}

}  // namespace laq
