#pragma once

// Sigma_A(S) as a membership bitmap over the elements of a finite abelian
// group, indexed by mixed-radix rank.

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "davenport/error.hpp"
#include "davenport/group.hpp"
#include "davenport/weights.hpp"

namespace davenport {

inline constexpr std::uint64_t kDefaultMaxElements = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kAdditionTableLimit = 1024;

// Index arithmetic for a product of cyclic groups. Keeps a full addition table
// for small groups and falls back to per-coordinate arithmetic otherwise.
class ElementTable {
 public:
  explicit ElementTable(Moduli moduli, std::uint64_t max_elements = kDefaultMaxElements)
      : moduli_(moduli.begin(), moduli.end()) {
    size_ = moduli_order(moduli_);
    if (size_ > max_elements)
      throw LimitExceeded("group of order " + std::to_string(size_) + " exceeds the element cap of " +
                          std::to_string(max_elements));
    rank_ = moduli_.size();
    coords_.resize(size_ * rank_);
    for (std::uint64_t i = 0; i < size_; ++i) {
      auto x = i;
      for (std::size_t k = rank_; k-- > 0;) {
        coords_[i * rank_ + k] = static_cast<std::uint32_t>(x % moduli_[k]);
        x /= moduli_[k];
      }
    }
    neg_.resize(size_);
    for (std::uint64_t i = 0; i < size_; ++i) {
      std::uint64_t idx = 0;
      for (std::size_t k = 0; k < rank_; ++k) {
        auto c = coords_[i * rank_ + k];
        idx = idx * moduli_[k] + (c == 0 ? 0 : moduli_[k] - c);
      }
      neg_[i] = static_cast<std::uint32_t>(idx);
    }
    if (size_ <= kAdditionTableLimit) {
      sum_.resize(size_ * size_);
      for (std::uint64_t i = 0; i < size_; ++i)
        for (std::uint64_t j = 0; j < size_; ++j) sum_[i * size_ + j] = compute_add(i, j);
    }
  }

  [[nodiscard]] std::uint64_t size() const { return size_; }
  [[nodiscard]] const std::vector<std::uint64_t>& moduli() const { return moduli_; }

  [[nodiscard]] std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    return sum_.empty() ? compute_add(a, b) : sum_[static_cast<std::uint64_t>(a) * size_ + b];
  }
  [[nodiscard]] std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }

  [[nodiscard]] std::uint32_t scale(std::int64_t k, std::uint32_t a) const {
    std::uint64_t idx = 0;
    for (std::size_t c = 0; c < rank_; ++c) {
      auto n = static_cast<std::int64_t>(moduli_[c]);
      auto v = static_cast<std::int64_t>((static_cast<__int128>(k % n) * coords_[a * rank_ + c]) % n);
      if (v < 0) v += n;
      idx = idx * moduli_[c] + static_cast<std::uint64_t>(v);
    }
    return static_cast<std::uint32_t>(idx);
  }

  [[nodiscard]] std::uint32_t index_of(const GroupElement& g) const {
    check_element(moduli_, g);
    return static_cast<std::uint32_t>(index(Moduli(moduli_), g));
  }
  [[nodiscard]] GroupElement element(std::uint32_t i) const {
    GroupElement g{std::vector<std::uint64_t>(rank_)};
    for (std::size_t k = 0; k < rank_; ++k) g.coords[k] = coords_[i * rank_ + k];
    return g;
  }

 private:
  [[nodiscard]] std::uint32_t compute_add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < rank_; ++k) {
      auto s = static_cast<std::uint64_t>(coords_[a * rank_ + k]) + coords_[b * rank_ + k];
      if (s >= moduli_[k]) s -= moduli_[k];
      idx = idx * moduli_[k] + s;
    }
    return static_cast<std::uint32_t>(idx);
  }

  std::vector<std::uint64_t> moduli_;
  std::uint64_t size_ = 1;
  std::size_t rank_ = 0;
  std::vector<std::uint32_t> coords_;
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint32_t> sum_;
};

// Distinct residues a*g for a in A, as element indices.
inline std::vector<std::uint32_t> weighted_multiples(const ElementTable& t, const WeightSet& a, std::uint32_t g) {
  std::vector<std::uint32_t> out;
  for (auto r : a.residues()) out.push_back(t.scale(static_cast<std::int64_t>(r), g));
  std::ranges::sort(out);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

class SumSet {
 public:
  SumSet() = default;
  explicit SumSet(std::uint64_t size) : size_(size), words_((size + 63) / 64, 0) {}

  [[nodiscard]] std::uint64_t size() const { return size_; }
  [[nodiscard]] bool contains(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

  [[nodiscard]] std::uint64_t count() const {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      auto bits = words_[w];
      while (bits) {
        auto b = static_cast<std::uint64_t>(std::countr_zero(bits));
        f(static_cast<std::uint32_t>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

  [[nodiscard]] std::vector<std::uint32_t> members() const {
    std::vector<std::uint32_t> out;
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
  }

  // Sigma <- Sigma u H u (Sigma + H), where H = A*g given as distinct indices.
  [[nodiscard]] SumSet extended(const ElementTable& t, std::span<const std::uint32_t> multiples) const {
    SumSet out(*this);
    for_each([&](std::uint32_t s) {
      for (auto h : multiples) out.set(t.add(s, h));
    });
    for (auto h : multiples) out.set(h);
    return out;
  }

  // Same as extended(), writing into `out` to reuse its storage.
  void extend_into(const ElementTable& t, std::span<const std::uint32_t> multiples, SumSet& out) const {
    out.size_ = size_;
    out.words_.assign(words_.begin(), words_.end());
    for_each([&](std::uint32_t s) {
      for (auto h : multiples) out.set(t.add(s, h));
    });
    for (auto h : multiples) out.set(h);
  }

  friend bool operator==(const SumSet&, const SumSet&) = default;

 private:
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

inline SumSet weighted_sumset(std::span<const GroupElement> seq, const WeightSet& a, Moduli moduli) {
  ElementTable t(moduli);
  SumSet sigma(t.size());
  for (const auto& g : seq) {
    auto mult = weighted_multiples(t, a, t.index_of(g));
    sigma = sigma.extended(t, mult);
  }
  return sigma;
}

inline SumSet weighted_sumset(std::span<const GroupElement> seq, const WeightSet& a, const AbelianGroup& g) {
  return weighted_sumset(seq, a, Moduli(g.moduli()));
}

inline bool has_weighted_zero_subsum(std::span<const GroupElement> seq, const WeightSet& a, Moduli moduli) {
  return weighted_sumset(seq, a, moduli).contains(0);
}

inline bool has_weighted_zero_subsum(std::span<const GroupElement> seq, const WeightSet& a, const AbelianGroup& g) {
  return has_weighted_zero_subsum(seq, a, Moduli(g.moduli()));
}

}  // namespace davenport
