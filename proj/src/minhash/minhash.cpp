#include "corpusdedup/minhash.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "corpusdedup/error.hpp"
#include "corpusdedup/hashing.hpp"

namespace corpusdedup {

bool MinHashSignature::is_sentinel() const noexcept {
  return std::all_of(mins.begin(), mins.end(), [](std::uint64_t v) { return v == kSentinel; });
}

MinHasher make_hasher(std::size_t k, std::uint64_t seed) {
  if (k == 0) throw Error(ErrorCode::InvalidK, "k must be at least 1");
  MinHasher h;
  h.seed_ = seed;
  h.a_.resize(k);
  h.b_.resize(k);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    h.a_[i] = (rng.next() % (kMersenne61 - 1)) | 1;
    h.b_[i] = rng.next() % kMersenne61;
  }
  return h;
}

MinHashSignature MinHasher::signature(const ShingleSet& set) const {
  MinHashSignature sig{std::vector<std::uint64_t>(k(), kSentinel)};
  auto* mins = sig.mins.data();
  for (const std::uint64_t x : set.hashes()) {
    for (std::size_t i = 0; i < a_.size(); ++i) {
      const auto v = mod_mersenne61(static_cast<uint128_t>(a_[i]) * x + b_[i]);
      if (v < mins[i]) mins[i] = v;
    }
  }
  return sig;
}

double estimate_jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::KMismatch, fmt::format("signature lengths differ: {} vs {}", a.size(), b.size()));
  }
  if (a.empty()) return 1.0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

double exact_jaccard(const ShingleSet& a, const ShingleSet& b) noexcept {
  if (a.empty() && b.empty()) return 1.0;
  const auto x = a.hashes();
  const auto y = b.hashes();
  std::size_t i = 0, j = 0, common = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] < y[j]) {
      ++i;
    } else if (y[j] < x[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(common) / static_cast<double>(x.size() + y.size() - common);
}

}  // namespace corpusdedup
