#pragma once

// Certificates: explicit sequences claimed to have no A-weighted zero-subsum,
// with an independent verifier and the shared JSON schema.

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "davenport/error.hpp"
#include "davenport/group.hpp"
#include "davenport/weights.hpp"

namespace davenport {

// `moduli` is the presentation the coordinates refer to; it need not be a
// divisor chain (rank-two constructions live on C_{m1} + C_{m2} as given).
struct Certificate {
  std::vector<std::uint64_t> moduli;
  WeightSpec weights;
  std::vector<GroupElement> elements;
  std::string provenance;

  [[nodiscard]] std::size_t length() const { return elements.size(); }
  [[nodiscard]] std::uint64_t exponent() const {
    std::uint64_t e = 1;
    for (auto m : moduli) e = std::lcm(e, m);
    return e;
  }
  [[nodiscard]] WeightSet weight_set() const { return make_weightset(weights, exponent()); }
};

struct WeightedTerm {
  std::size_t position = 0;  // index into Certificate::elements
  std::int64_t weight = 0;
};

struct VerificationReport {
  bool valid = false;
  std::string message;
  std::vector<WeightedTerm> violating;  // a weighted zero-subsum when invalid
};

// Recomputes Sigma_A(elements) with back-pointers so that a zero sum can be
// unwound into an explicit index set and weight assignment.
inline VerificationReport verify_certificate(const Certificate& cert) {
  VerificationReport rep;
  for (auto m : cert.moduli)
    if (m == 0) {
      rep.message = "moduli must be positive";
      return rep;
    }
  for (std::size_t i = 0; i < cert.elements.size(); ++i) {
    try {
      check_element(cert.moduli, cert.elements[i]);
    } catch (const InvalidInput& e) {
      rep.message = "element " + std::to_string(i) + ": " + e.what();
      return rep;
    }
  }
  auto weights = cert.weight_set();
  const Moduli mod(cert.moduli);
  struct Step {
    std::size_t position;
    std::uint64_t residue;
    std::optional<std::uint64_t> prev;  // index of the partial sum extended
  };
  // reached sum (by mixed-radix index) -> how it was first produced
  std::map<std::uint64_t, Step> reach;
  auto unwind = [&](std::uint64_t key) {
    std::vector<WeightedTerm> out;
    std::optional<std::uint64_t> cur = key;
    while (cur) {
      const auto& st = reach.at(*cur);
      out.push_back({st.position, weights.centered(st.residue)});
      cur = st.prev;
    }
    std::ranges::reverse(out);
    return out;
  };
  for (std::size_t i = 0; i < cert.elements.size(); ++i) {
    const auto& g = cert.elements[i];
    std::vector<std::pair<std::uint64_t, Step>> fresh;
    auto snapshot = reach;
    for (auto r : weights.residues()) {
      auto ag = scale(mod, static_cast<std::int64_t>(r), g);
      fresh.push_back({index(mod, ag), {i, r, std::nullopt}});
      for (const auto& [key, st] : snapshot) {
        auto s = add(mod, element_at(mod, key), ag);
        fresh.push_back({index(mod, s), {i, r, key}});
      }
    }
    for (auto& [key, st] : fresh) {
      if (key == 0) {
        reach.insert_or_assign(0, st);
        rep.violating = unwind(0);
        rep.message = "weighted zero-subsum found";
        return rep;
      }
      reach.try_emplace(key, st);
    }
  }
  rep.valid = true;
  rep.message = "no weighted zero-subsum";
  return rep;
}

// ---- JSON ---------------------------------------------------------------

inline nlohmann::json weights_to_json(const WeightSpec& w) {
  nlohmann::json j;
  j["kind"] = to_string(w.kind);
  if (w.kind == WeightKind::Custom) j["values"] = w.values;
  return j;
}

inline WeightSpec weights_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_weights(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind")) throw InvalidInput("weights must be an object with a \"kind\" field");
  auto kind = j.at("kind").get<std::string>();
  if (kind == "pm") return WeightSpec::plus_minus();
  if (kind == "full") return WeightSpec::full();
  if (kind == "set") {
    if (!j.contains("values")) throw InvalidInput("weights of kind \"set\" need \"values\"");
    auto v = j.at("values").get<std::vector<std::int64_t>>();
    if (v.empty()) throw InvalidInput("explicit weight list is empty");
    return WeightSpec::set(std::move(v));
  }
  throw InvalidInput("unknown weight kind \"" + kind + "\"");
}

inline nlohmann::json certificate_to_json(const Certificate& c) {
  nlohmann::json j;
  j["group"] = c.moduli;
  j["weights"] = weights_to_json(c.weights);
  auto elems = nlohmann::json::array();
  for (const auto& e : c.elements) elems.push_back(e.coords);
  j["elements"] = std::move(elems);
  j["provenance"] = c.provenance;
  return j;
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
  try {
    Certificate c;
    c.moduli = j.at("group").get<std::vector<std::uint64_t>>();
    c.weights = j.contains("weights") ? weights_from_json(j.at("weights")) : WeightSpec::plus_minus();
    for (const auto& e : j.at("elements")) c.elements.push_back({e.get<std::vector<std::uint64_t>>()});
    if (j.contains("provenance")) c.provenance = j.at("provenance").get<std::string>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace davenport
