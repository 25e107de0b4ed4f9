#pragma once

// Reference oracle for D_A(G) on tiny groups. Shares no arithmetic with the
// search engine: elements are plain coordinate vectors, and every multiset is
// checked by enumerating subsets and weight assignments directly.

#include <cstdint>
#include <string>
#include <vector>

#include "davenport/error.hpp"
#include "davenport/group.hpp"
#include "davenport/weights.hpp"

namespace davenport {

inline constexpr std::uint64_t kBruteForceCap = 16;

namespace detail {

class BruteForce {
 public:
  BruteForce(const AbelianGroup& g, const WeightSet& a) : mod_(g.moduli()) {
    for (auto r : a.residues()) weights_.push_back(r);
    std::uint64_t n = 1;
    for (auto m : mod_) n *= m;
    for (std::uint64_t i = 0; i < n; ++i) {
      std::vector<std::uint64_t> c(mod_.size());
      auto x = i;
      for (std::size_t k = mod_.size(); k-- > 0;) {
        c[k] = x % mod_[k];
        x /= mod_[k];
      }
      elements_.push_back(std::move(c));
    }
  }

  // Length of the longest sequence without a weighted zero-subsum.
  std::size_t longest() {
    seq_.clear();
    best_ = 0;
    extend(0);
    return best_;
  }

 private:
  // True if some nonempty subset containing the last element, with some weight
  // on each chosen term, sums to zero.
  bool last_closes_zero() const {
    auto last = seq_.size() - 1;
    std::vector<std::uint64_t> acc(mod_.size(), 0);
    return choose(0, last, acc);
  }

  bool choose(std::size_t pos, std::size_t last, std::vector<std::uint64_t>& acc) const {
    if (pos == last) {
      for (auto w : weights_) {
        bool zero = true;
        for (std::size_t k = 0; k < mod_.size(); ++k)
          if ((acc[k] + w % mod_[k] * elements_[seq_[last]][k]) % mod_[k] != 0) zero = false;
        if (zero) return true;
      }
      return false;
    }
    if (choose(pos + 1, last, acc)) return true;  // term left out
    for (auto w : weights_) {
      auto saved = acc;
      for (std::size_t k = 0; k < mod_.size(); ++k)
        acc[k] = (acc[k] + w % mod_[k] * elements_[seq_[pos]][k]) % mod_[k];
      bool hit = choose(pos + 1, last, acc);
      acc = saved;
      if (hit) return true;
    }
    return false;
  }

  void extend(std::size_t from) {
    if (seq_.size() > best_) best_ = seq_.size();
    for (auto i = from; i < elements_.size(); ++i) {
      seq_.push_back(i);
      if (!last_closes_zero()) extend(i);
      seq_.pop_back();
    }
  }

  std::vector<std::uint64_t> mod_;
  std::vector<std::uint64_t> weights_;
  std::vector<std::vector<std::uint64_t>> elements_;
  std::vector<std::size_t> seq_;
  std::size_t best_ = 0;
};

}  // namespace detail

// Smallest l such that every length-l sequence over g has an a-weighted
// zero-subsum.
inline std::uint64_t brute_force_davenport(const AbelianGroup& g, const WeightSet& a,
                                           std::uint64_t cap = kBruteForceCap) {
  if (g.order() > cap)
    throw LimitExceeded("brute force is limited to groups of order <= " + std::to_string(cap));
  if (a.exponent() != g.exponent()) throw InvalidInput("weight set does not match group exponent");
  detail::BruteForce bf(g, a);
  return bf.longest() + 1;
}

}  // namespace davenport
