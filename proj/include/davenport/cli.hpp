#pragma once

// Command-line front end. run_command is separate from main so tests can
// drive it with in-memory streams.
//
// Exit codes: 0 success, 1 certificate invalid, 2 invalid input or usage,
// 3 search budget exhausted before completion.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "davenport/bounds.hpp"
#include "davenport/certificate.hpp"
#include "davenport/error.hpp"
#include "davenport/group.hpp"
#include "davenport/report.hpp"
#include "davenport/search.hpp"
#include "davenport/weights.hpp"

namespace davenport {

enum ExitCode : int { kExitOk = 0, kExitInvalidCertificate = 1, kExitBadInput = 2, kExitBudget = 3 };

inline unsigned default_threads() {
  if (const char* env = std::getenv("DAVENPORT_THREADS")) {
    try {
      auto v = std::stoul(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

namespace detail {

inline void emit(std::ostream& out, const nlohmann::json& j, const std::optional<std::string>& path) {
  if (path) {
    std::ofstream f(*path);
    if (!f) throw InvalidInput("cannot write " + *path);
    f << j.dump(2) << '\n';
  } else {
    out << j.dump(2) << '\n';
  }
}

inline std::string bracket_text(const BoundsReport& r) {
  if (r.exact()) return std::to_string(r.lo) + " (" + r.rule + ")";
  return "[" + std::to_string(r.lo) + ", " + std::to_string(r.hi) + "]";
}

inline void print_report(std::ostream& out, const BoundsReport& r) {
  out << r.group.to_string() << ", weights " << make_weightset(r.weights, r.group).to_string() << ": "
      << bracket_text(r) << '\n';
  for (const auto& l : r.lower) {
    out << "  lower " << l.value << "  " << l.method;
    if (l.certificate) out << "  (" << l.certificate->provenance << ")";
    out << '\n';
  }
  for (const auto& u : r.upper) out << "  upper " << u.value << "  " << u.method << '\n';
  if (r.normalization)
    out << "  reduced to " << r.normalization->group.to_string() << " with weights " << r.normalization->weights
        << " (factor " << r.normalization->factor << ")\n";
}

}  // namespace detail

inline int run_command(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted Davenport constants of finite abelian groups", "davenport"};
  app.require_subcommand(1);

  std::string group_text;
  std::string weights_text = "pm";
  bool pretty = false;
  bool tsv = false;
  bool resolve = false;
  bool symmetry = false;
  unsigned threads = default_threads();
  std::uint64_t budget = kDefaultNodeBudget;
  std::optional<std::size_t> max_depth;
  std::uint64_t max_order = 100;
  std::optional<std::string> out_path;
  std::string cert_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--pretty", pretty, "human-readable output");
    sub->add_option("--out", out_path, "write JSON to a file");
  };
  auto add_group = [&](CLI::App* sub) {
    sub->add_option("group", group_text, "group, e.g. C3*C3*C9 or [3,3,9]")->required();
    sub->add_option("--weights", weights_text, "pm | full | set:a,b,...");
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "worker threads (default $DAVENPORT_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget", budget, "node budget for exhaustive search");
  };

  auto* info = app.add_subcommand("info", "group statistics");
  info->add_option("group", group_text)->required();
  add_common(info);
  auto* bounds = app.add_subcommand("bounds", "all known bounds with certificates");
  add_group(bounds);
  add_common(bounds);
  auto* exact = app.add_subcommand("exact", "exact value or bracket, optionally resolved by search");
  add_group(exact);
  add_common(exact);
  add_search(exact);
  exact->add_flag("--resolve", resolve, "search when only a bracket is known");
  auto* search = app.add_subcommand("search", "exhaustive search for the longest dissociated sequence");
  add_group(search);
  add_common(search);
  add_search(search);
  search->add_option("--max-depth", max_depth, "longest sequence to explore");
  search->add_flag("--symmetry", symmetry, "reduce the first element modulo automorphisms");
  auto* table = app.add_subcommand("table", "plus-minus constants for all groups up to an order");
  table->add_option("--max-order", max_order, "largest group order")->check(CLI::PositiveNumber);
  table->add_flag("--resolve", resolve, "search bracketed rows");
  table->add_flag("--tsv", tsv, "tab-separated output");
  add_common(table);
  add_search(table);
  auto* verify = app.add_subcommand("verify", "check a certificate file");
  verify->add_option("certificate", cert_path, "certificate JSON")->required();
  add_common(verify);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitBadInput;
  }

  try {
    if (info->parsed()) {
      auto g = parse_group(group_text);
      if (pretty) {
        auto s = group_stats(g);
        out << g.to_string() << ": order " << s.order << ", exponent " << s.exponent << ", rank " << s.rank
            << ", total rank " << s.total_rank << '\n';
      } else {
        detail::emit(out, group_stats_to_json(g), out_path);
      }
      return kExitOk;
    }
    if (bounds->parsed() || exact->parsed()) {
      auto g = parse_group(group_text);
      auto a = make_weightset(parse_weights(weights_text), g);
      auto rep = exact_value(g, a);
      std::optional<SearchResult> sr;
      if (exact->parsed() && resolve && !rep.exact()) {
        SearchConfig cfg;
        cfg.node_budget = budget;
        cfg.threads = threads;
        if (const auto* c = rep.best_certificate()) cfg.lower_hint = c->length();
        sr = max_dissociated(g, a, cfg);
        if (sr->exhausted) {
          rep.status = Status::Exact;
          rep.lo = rep.hi = sr->max_len + 1;
          rep.rule = "search";
          rep.lower.push_back({rep.lo, "search", sr->witness});
        }
      }
      if (pretty) {
        detail::print_report(out, rep);
        if (sr) out << "  search: max_len " << sr->max_len << ", exhausted " << sr->exhausted << ", nodes "
                    << sr->nodes << '\n';
      } else {
        auto j = bounds_report_to_json(rep, bounds->parsed());
        if (bounds->parsed()) {
          auto ags = ags_bounds(g);
          j["ags"] = {{"chain_lower", ags.chain_lower}, {"log2_upper", ags.log2_upper}};
          if (g.total_rank() <= kMaxDecompositionRank) {
            auto star = star_lower(g);
            j["star"] = {{"value", star.value}, {"parts", star.parts.parts}};
          }
        } else {
          auto shift = g.order() - 1;
          j["e_constant"] = rep.exact() ? nlohmann::json(rep.lo + shift)
                                        : nlohmann::json{{"lower", rep.lo + shift}, {"upper", rep.hi + shift}};
        }
        if (sr) j["search"] = search_result_to_json(*sr);
        detail::emit(out, j, out_path);
      }
      return sr && !sr->exhausted ? kExitBudget : kExitOk;
    }
    if (search->parsed()) {
      auto g = parse_group(group_text);
      auto a = make_weightset(parse_weights(weights_text), g);
      SearchConfig cfg;
      cfg.node_budget = budget;
      cfg.threads = threads;
      cfg.max_depth = max_depth;
      cfg.symmetry = symmetry;
      auto r = max_dissociated(g, a, cfg);
      if (pretty) {
        out << g.to_string() << ": max_len " << r.max_len << (r.exhausted ? " (exhausted)" : " (not exhausted)")
            << ", nodes " << r.nodes << ", " << r.elapsed.count() << " ms\n";
      } else {
        auto j = search_result_to_json(r);
        j["group"] = g.moduli();
        j["weights"] = weights_to_json(to_spec(a));
        j["budget"] = budget;
        j["threads"] = threads;
        detail::emit(out, j, out_path);
      }
      return r.exhausted ? kExitOk : kExitBudget;
    }
    if (table->parsed()) {
      TableOptions opt{max_order, resolve, budget, threads};
      auto rows = run_table(opt);
      if (tsv) {
        out << table_to_tsv(rows);
      } else if (pretty) {
        for (const auto& r : rows) {
          out << r.group.to_string() << '\t' << r.order << '\t';
          if (r.status == Status::Exact)
            out << r.lo;
          else
            out << "[" << r.lo << ", " << r.hi << "]";
          out << '\t' << r.method << (r.search_verified ? "\tsearch-verified" : "") << '\n';
        }
      } else {
        detail::emit(out, table_to_json(rows, opt), out_path);
      }
      bool pending = false;
      for (const auto& r : rows)
        if (r.search && !r.search->exhausted) pending = true;
      return pending ? kExitBudget : kExitOk;
    }
    if (verify->parsed()) {
      std::ifstream f(cert_path);
      if (!f) throw InvalidInput("cannot read " + cert_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
      }
      auto cert = certificate_from_json(j);
      auto rep = verify_certificate(cert);
      if (pretty) {
        out << (rep.valid ? "valid" : "invalid") << ": " << rep.message << '\n';
        for (const auto& t : rep.violating) out << "  " << (t.weight >= 0 ? "+" : "") << t.weight << " * element "
                                                << t.position << '\n';
      } else {
        nlohmann::json o{{"valid", rep.valid}, {"message", rep.message}, {"length", cert.length()}};
        if (!rep.valid) {
          auto v = nlohmann::json::array();
          for (const auto& t : rep.violating) v.push_back({{"position", t.position}, {"weight", t.weight}});
          o["violating"] = std::move(v);
        }
        detail::emit(out, o, out_path);
      }
      return rep.valid ? kExitOk : kExitInvalidCertificate;
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const LimitExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitBadInput;
}

inline int run_command(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_command(std::move(args), out, err);
}

}  // namespace davenport
