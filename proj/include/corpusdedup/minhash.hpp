#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "corpusdedup/textprep.hpp"

namespace corpusdedup {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;
/// Value of every slot in the signature of an empty set.
inline constexpr std::uint64_t kSentinel = std::numeric_limits<std::uint64_t>::max();

__extension__ typedef unsigned __int128 uint128_t;

/// x mod (2^61 - 1) for any 128-bit x.
constexpr std::uint64_t mod_mersenne61(uint128_t x) noexcept {
  x = (x & kMersenne61) + (x >> 61);
  auto r = static_cast<std::uint64_t>((x & kMersenne61) + (x >> 61));
  return r >= kMersenne61 ? r - kMersenne61 : r;
}

struct MinHashSignature {
  std::vector<std::uint64_t> mins;

  std::size_t k() const noexcept { return mins.size(); }
  bool is_sentinel() const noexcept;
  bool operator==(const MinHashSignature&) const = default;
};

/// k universal hash functions h_i(x) = (a_i·x + b_i) mod (2^61 − 1).
///
/// Parameters come from SplitMix64(seed), drawn in order
/// a_0, b_0, a_1, b_1, …, with a_i = (next() mod (p − 1)) | 1 and
/// b_i = next() mod p.
class MinHasher {
 public:
  std::size_t k() const noexcept { return a_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const std::uint64_t> a() const noexcept { return a_; }
  std::span<const std::uint64_t> b() const noexcept { return b_; }

  MinHashSignature signature(const ShingleSet& set) const;

 private:
  friend MinHasher make_hasher(std::size_t k, std::uint64_t seed);

  std::uint64_t seed_ = 0;
  std::vector<std::uint64_t> a_;
  std::vector<std::uint64_t> b_;
};

/// Throws Error{InvalidK} when k is 0.
MinHasher make_hasher(std::size_t k, std::uint64_t seed);

inline MinHashSignature signature(const MinHasher& hasher, const ShingleSet& set) {
  return hasher.signature(set);
}

/// Fraction of agreeing slots. Throws Error{KMismatch}.
double estimate_jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
inline double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  return estimate_jaccard(a.mins, b.mins);
}

/// |A∩B| / |A∪B|, 1.0 when both are empty.
double exact_jaccard(const ShingleSet& a, const ShingleSet& b) noexcept;

}  // namespace corpusdedup
