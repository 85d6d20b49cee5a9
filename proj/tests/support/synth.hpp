#pragma once

// Synthetic corpora and brute-force oracles shared by the unit and
// acceptance tests. The oracles use their own tokenizer and std::hash, so they
// share no code with the library under test.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace synth {

inline std::string random_words(std::mt19937_64& rng, std::size_t n, std::size_t vocab = 5000) {
  std::uniform_int_distribution<std::size_t> pick(0, vocab - 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != 0) out += ' ';
    out += 'w';
    out += std::to_string(pick(rng));
  }
  return out;
}

inline std::vector<std::string> split_words(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

/// Replaces `m` tokens with fresh ones. Positions are spread evenly over the
/// interior so each replacement removes exactly `n` distinct n-grams when the
/// gaps are at least `n`.
inline std::string perturb(std::string_view text, std::size_t m, std::uint64_t& fresh, std::size_t n = 3) {
  auto words = split_words(text);
  if (m == 0 || words.size() < 2 * n) return std::string(text);
  const std::size_t lo = n - 1, hi = words.size() - n;  // interior [lo, hi]
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t pos = lo + (hi - lo) * (2 * i + 1) / (2 * m);
    words[pos] = "fresh" + std::to_string(fresh++);
  }
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i != 0) out += ' ';
    out += words[i];
  }
  return out;
}

/// Like perturb, but at `m` random interior positions at least `n` apart, so
/// the Jaccard value is the same while the removed n-grams differ per call.
inline std::string perturb_random(std::string_view text, std::size_t m, std::mt19937_64& rng, std::uint64_t& fresh,
                                  std::size_t n = 3) {
  auto words = split_words(text);
  if (m == 0 || words.size() < 2 * n) return std::string(text);
  const std::size_t lo = n - 1, hi = words.size() - n;
  std::uniform_int_distribution<std::size_t> pick(lo, hi);
  std::set<std::size_t> chosen;
  while (chosen.size() < m) {
    const std::size_t p = pick(rng);
    const auto next = chosen.lower_bound(p);
    if (next != chosen.end() && *next - p < n) continue;
    if (next != chosen.begin() && p - *std::prev(next) < n) continue;
    chosen.insert(p);
  }
  for (std::size_t p : chosen) words[p] = "fresh" + std::to_string(fresh++);
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i != 0) out += ' ';
    out += words[i];
  }
  return out;
}

/// Brute-force n-gram set: sorted std::hash values of the joined n-grams.
inline std::vector<std::size_t> oracle_shingles(std::string_view text, std::size_t n = 3) {
  const auto words = split_words(text);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    std::string gram = words[i];
    for (std::size_t j = 1; j < n; ++j) gram += ' ' + words[i + j];
    out.push_back(std::hash<std::string>{}(gram));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline double oracle_jaccard(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::vector<std::size_t> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(a.size() + b.size() - common.size());
}

/// Two random 64-bit sets with |A ∪ B| = universe and |A ∩ B| = shared.
inline std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> planted_pair(std::mt19937_64& rng,
                                                                                     std::size_t universe,
                                                                                     std::size_t shared) {
  std::vector<std::uint64_t> a, b;
  for (std::size_t i = 0; i < universe; ++i) {
    const std::uint64_t x = rng();
    if (i < shared) {
      a.push_back(x);
      b.push_back(x);
    } else if ((i - shared) % 2 == 0) {
      a.push_back(x);
    } else {
      b.push_back(x);
    }
  }
  return {a, b};
}

/// All (i, j) with oracle Jaccard(a[i], b[j]) >= t, found through shared
/// n-grams (pairs sharing none have Jaccard 0).
inline std::map<std::size_t, std::set<std::size_t>> oracle_pairs(const std::vector<std::string>& a,
                                                                 const std::vector<std::string>& b, double t,
                                                                 std::size_t n = 3) {
  std::vector<std::vector<std::size_t>> bs(b.size());
  std::unordered_map<std::size_t, std::vector<std::size_t>> postings;
  for (std::size_t j = 0; j < b.size(); ++j) {
    bs[j] = oracle_shingles(b[j], n);
    for (auto h : bs[j]) postings[h].push_back(j);
  }
  std::map<std::size_t, std::set<std::size_t>> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto as = oracle_shingles(a[i], n);
    std::set<std::size_t> seen;
    auto& row = out[i];
    for (auto h : as) {
      const auto it = postings.find(h);
      if (it == postings.end()) continue;
      for (auto j : it->second) {
        if (seen.insert(j).second && oracle_jaccard(as, bs[j]) >= t) row.insert(j);
      }
    }
  }
  return out;
}

}  // namespace synth
