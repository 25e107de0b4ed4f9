// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "davenport/davenport.hpp"

using namespace davenport;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string witness_text(const Certificate& c) {
  std::ostringstream os;
  os << certificate_to_json(c)["elements"].dump();
  return os.str();
}

Outcome order_100_table() {
  auto t0 = std::chrono::steady_clock::now();
  TableOptions opt;
  opt.max_order = 100;
  auto rows = run_table(opt);
  auto secs = seconds_since(t0);
  const std::map<std::vector<std::uint64_t>, std::uint64_t> low{{{3, 3}, 3}, {{3, 3, 3}, 4}, {{3, 3, 9}, 6}};
  std::vector<std::string> bad;
  for (const auto& r : rows) {
    const auto& m = r.group.moduli();
    auto U = ags_bounds(r.group).log2_upper;
    std::ostringstream got;
    if (r.status == Status::Exact)
      got << r.lo;
    else
      got << "Bracket(" << r.lo << "," << r.hi << ")";
    std::string want;
    if (m == std::vector<std::uint64_t>{5, 15})
      want = "Bracket(6,7)";
    else if (auto it = low.find(m); it != low.end())
      want = std::to_string(it->second);
    else
      want = std::to_string(U);
    if (got.str() != want) bad.push_back(r.group.to_string() + " got " + got.str() + " want " + want);
  }
  std::ostringstream os;
  os << rows.size() << " groups in " << secs << " s";
  for (const auto& b : bad) os << "; " << b;
  return {bad.empty() && secs < 60, os.str()};
}

Outcome c3c3c9_search() {
  auto t0 = std::chrono::steady_clock::now();
  AbelianGroup g{3, 3, 9};
  auto r = max_dissociated(g, make_weightset(WeightSpec::plus_minus(), g));
  std::ostringstream os;
  os << "max_len " << r.max_len << ", exhausted " << r.exhausted << ", nodes " << r.nodes << ", "
     << seconds_since(t0) << " s";
  return {r.max_len == 5 && r.exhausted && verify_certificate(r.witness).valid, os.str()};
}

Outcome c5c15_search() {
  AbelianGroup g{5, 15};
  auto a = make_weightset(WeightSpec::plus_minus(), g);
  std::vector<SearchResult> rs;
  std::ostringstream os;
  for (unsigned t : {1U, 4U, 8U}) {
    SearchConfig cfg;
    cfg.threads = t;
    auto t0 = std::chrono::steady_clock::now();
    rs.push_back(max_dissociated(g, a, cfg));
    os << "threads " << t << ": max_len " << rs.back().max_len << " exhausted " << rs.back().exhausted << " nodes "
       << rs.back().nodes << " (" << seconds_since(t0) << " s); ";
  }
  bool ok = true;
  for (const auto& r : rs) {
    ok = ok && r.exhausted && (r.max_len == 5 || r.max_len == 6);
    ok = ok && r.max_len == rs[0].max_len && r.witness.elements == rs[0].witness.elements && r.nodes == rs[0].nodes;
  }
  os << "D = " << rs[0].max_len + 1 << ", witness " << witness_text(rs[0].witness);
  return {ok, os.str()};
}

Outcome oracle_equivalence() {
  auto t0 = std::chrono::steady_clock::now();
  int checked = 0;
  std::vector<std::string> bad;
  for (const auto& g : enumerate_groups(16))
    for (const auto& w : {WeightSpec::plus_minus(), WeightSpec::full(), WeightSpec::set({1})}) {
      auto a = make_weightset(w, g);
      auto r = max_dissociated(g, a);
      auto truth = brute_force_davenport(g, a);
      ++checked;
      if (!r.exhausted || r.max_len + 1 != truth) bad.push_back(g.to_string() + " " + a.to_string());
    }
  std::ostringstream os;
  os << checked << " cases, " << bad.size() << " mismatches, " << seconds_since(t0) << " s";
  for (const auto& b : bad) os << "; " << b;
  return {bad.empty() && seconds_since(t0) < 60, os.str()};
}

Outcome full_weights() {
  int checked = 0;
  std::vector<std::string> bad;
  for (const auto& g : enumerate_groups(36)) {
    auto r = max_dissociated(g, make_weightset(WeightSpec::full(), g));
    std::size_t want = g.trivial() ? 0 : g.rank_of(g.exponent());
    ++checked;
    if (!r.exhausted || r.max_len != want) bad.push_back(g.to_string());
  }
  std::ostringstream os;
  os << checked << " groups";
  for (const auto& b : bad) os << "; " << b;
  return {bad.empty(), os.str()};
}

Outcome star_examples() {
  auto a = star_lower(AbelianGroup{3, 759});
  auto b = star_lower(AbelianGroup{897, 897});
  std::ostringstream os;
  os << "C3*C759 -> " << a.value << ", C897^2 -> " << b.value;
  return {a.value == 12 && b.value == 20, os.str()};
}

Outcome construction_sweep() {
  int rank2 = 0;
  int chains = 0;
  int failures = 0;
  auto attempt = [&](const std::function<Certificate()>& build, std::size_t len) {
    try {
      auto c = build();
      if (!verify_certificate(c).valid || c.length() != len) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  };
  for (std::uint64_t m1 = 4; m1 <= 40; ++m1)
    for (std::uint64_t m2 = 3; m2 <= 40; ++m2, ++rank2)
      attempt([&] { return rank2_pm(m1, m2); }, rank2_pm_length(m1, m2));
  for (std::uint64_t m = 2; m <= 1024; ++m, ++chains)
    attempt([&] { return cyclic_chain(m); }, static_cast<std::size_t>(floor_log2(m)));
  std::ostringstream os;
  os << rank2 << " rank2_pm + " << chains << " cyclic_chain certificates, " << failures << " failures";
  return {failures == 0, os.str()};
}

Outcome normalization() {
  int checked = 0;
  std::vector<std::string> bad;
  const std::vector<std::vector<std::int64_t>> sets{{2, -2}, {3}, {2}, {1, 2}};
  for (const auto& g : enumerate_groups(16))
    for (const auto& s : sets) {
      auto a = make_weightset(WeightSpec::set(s), g);
      auto before = brute_force_davenport(g, a);
      auto n = normalize(a, g);
      auto after = n.degenerate ? 1 : brute_force_davenport(n.group, n.weights);
      ++checked;
      if (before != after) bad.push_back(g.to_string() + " " + a.to_string());
    }
  std::ostringstream os;
  os << checked << " cases";
  for (const auto& b : bad) os << "; " << b;
  return {bad.empty(), os.str()};
}

Outcome sandwich() {
  PmCache cache;
  int groups = 0;
  int exact = 0;
  std::vector<std::string> bad;
  for (const auto& g : enumerate_groups(1000)) {
    ++groups;
    auto ags = ags_bounds(g);
    auto s = star_lower(g).value;
    if (!(ags.chain_lower <= s && s <= ags.log2_upper)) bad.push_back(g.to_string() + " star");
    auto r = exact_value(g, make_weightset(WeightSpec::plus_minus(), g), &cache);
    if (!r.exact()) continue;
    ++exact;
    auto v = *r.value();
    auto slack = g.trivial() ? 0 : g.rank() - 1;
    if (!(s <= v && v <= std::min<std::uint64_t>(s + slack, ags.log2_upper))) bad.push_back(g.to_string() + " value");
  }
  std::ostringstream os;
  os << groups << " groups, " << exact << " exact values";
  for (const auto& b : bad) os << "; " << b;
  return {bad.empty(), os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"order-100 table", order_100_table},
      {"C3^2*C9 exhaustive search", c3c3c9_search},
      {"C5*C15 search across threads", c5c15_search},
      {"search equals brute force up to order 16", oracle_equivalence},
      {"full weights up to order 36", full_weights},
      {"star optimizer examples", star_examples},
      {"construction sweep", construction_sweep},
      {"normalization preserves the constant", normalization},
      {"sandwich invariants up to order 1000", sandwich},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s  %d. %s: %s\n", o.pass ? "PASS" : "FAIL", n, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
