#pragma once

// Table of plus-minus constants over all groups up to a given order, and JSON
// encodings of search results and group statistics.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "davenport/bounds.hpp"
#include "davenport/certificate.hpp"
#include "davenport/group.hpp"
#include "davenport/search.hpp"
#include "davenport/weights.hpp"

namespace davenport {

struct SearchSummary {
  std::size_t max_len = 0;
  bool exhausted = false;
  std::uint64_t nodes = 0;
};

struct TableRow {
  AbelianGroup group;
  std::uint64_t order = 1;
  Status status = Status::Bracket;
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  std::string method;
  bool search_verified = false;
  std::optional<SearchSummary> search;
};

struct TableOptions {
  std::uint64_t max_order = 100;
  bool resolve = false;
  std::uint64_t budget = kDefaultNodeBudget;
  unsigned threads = 1;
};

inline nlohmann::json search_result_to_json(const SearchResult& r) {
  return {{"max_len", r.max_len},
          {"value", r.max_len + 1},
          {"exhausted", r.exhausted},
          {"nodes", r.nodes},
          {"millis", r.elapsed.count()},
          {"max_depth", r.max_depth},
          {"witness", certificate_to_json(r.witness)}};
}

inline nlohmann::json group_stats_to_json(const AbelianGroup& g) {
  auto s = group_stats(g);
  nlohmann::json ranks = nlohmann::json::object();
  for (auto q : g.prime_powers()) ranks[std::to_string(q)] = g.rank_of(q);
  return {{"group", g.moduli()},    {"name", g.to_string()},         {"order", s.order},
          {"exponent", s.exponent}, {"rank", s.rank},                {"total_rank", s.total_rank},
          {"prime_powers", s.prime_powers}, {"rank_of_prime_powers", ranks}};
}

// One row per isomorphism class of order <= max_order, in enumeration order.
// Rows whose value lies below floor(log2 |G|) + 1 are always re-derived by
// search; brackets are searched only with `resolve`.
inline std::vector<TableRow> run_table(const TableOptions& opt) {
  std::vector<TableRow> rows;
  PmCache cache;
  for (const auto& g : enumerate_groups(opt.max_order)) {
    auto pm = make_weightset(WeightSpec::plus_minus(), g);
    auto rep = exact_value(g, pm, &cache);
    TableRow row{g, g.order(), rep.status, rep.lo, rep.hi, rep.exact() ? rep.rule : "bounds", false, std::nullopt};
    auto U = ags_bounds(g).log2_upper;
    bool below_upper = rep.exact() && rep.lo < U;
    if (below_upper || (!rep.exact() && opt.resolve)) {
      SearchConfig cfg;
      cfg.node_budget = opt.budget;
      cfg.threads = opt.threads;
      if (const auto* c = rep.best_certificate()) cfg.lower_hint = c->length();
      auto sr = max_dissociated(g, pm, cfg);
      row.search = SearchSummary{sr.max_len, sr.exhausted, sr.nodes};
      if (sr.exhausted) {
        auto v = static_cast<std::uint64_t>(sr.max_len) + 1;
        if (rep.exact() && v != rep.lo) {
          // the search is authoritative; keep the disagreement visible
          row.method = rep.rule + " contradicted by search";
        } else if (!rep.exact()) {
          row.method = "search";
        }
        row.status = Status::Exact;
        row.lo = row.hi = v;
        row.search_verified = true;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json table_to_json(const std::vector<TableRow>& rows, const TableOptions& opt) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j{{"group", r.group.moduli()}, {"name", r.group.to_string()}, {"order", r.order},
                     {"status", to_string(r.status)}};
    if (r.status == Status::Exact) {
      j["value"] = r.lo;
    } else {
      j["lower"] = r.lo;
      j["upper"] = r.hi;
    }
    j["method"] = r.method;
    j["search_verified"] = r.search_verified;
    if (r.search)
      j["search"] = {{"max_len", r.search->max_len}, {"exhausted", r.search->exhausted}, {"nodes", r.search->nodes}};
    arr.push_back(std::move(j));
  }
  return {{"max_order", opt.max_order}, {"weights", "pm"}, {"resolve", opt.resolve}, {"budget", opt.budget},
          {"rows", std::move(arr)}};
}

inline std::string table_to_tsv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "group\torder\tstatus\tlower\tupper\tmethod\tsearch_verified\tnodes\n";
  for (const auto& r : rows) {
    os << r.group.to_string() << '\t' << r.order << '\t' << to_string(r.status) << '\t' << r.lo << '\t' << r.hi
       << '\t' << r.method << '\t' << (r.search_verified ? "yes" : "no") << '\t';
    if (r.search)
      os << r.search->nodes;
    else
      os << '-';
    os << '\n';
  }
  return os.str();
}

}  // namespace davenport
