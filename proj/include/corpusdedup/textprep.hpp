#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace corpusdedup {

/// Word-token n-gram shingling. Tokens are maximal runs of non-whitespace
/// bytes; each n-gram is the tokens joined by one space, hashed with
/// hash_bytes(…, seed).
struct ShingleConfig {
  std::size_t n = 3;
  bool lowercase = false;  // ASCII only
  std::uint64_t seed = 0;

  /// Stable 64-bit identity of the configuration; stored in index files so a
  /// query with a different scheme is rejected.
  std::uint64_t fingerprint() const noexcept;

  bool operator==(const ShingleConfig&) const = default;
};

/// Sorted, duplicate-free set of 64-bit shingle hashes.
class ShingleSet {
 public:
  ShingleSet() = default;
  /// Sorts and deduplicates.
  explicit ShingleSet(std::vector<std::uint64_t> hashes);

  std::span<const std::uint64_t> hashes() const noexcept { return hashes_; }
  std::size_t size() const noexcept { return hashes_.size(); }
  bool empty() const noexcept { return hashes_.empty(); }
  bool contains(std::uint64_t h) const noexcept;

  bool operator==(const ShingleSet&) const = default;

 private:
  std::vector<std::uint64_t> hashes_;
};

/// Empty when the text has fewer than config.n tokens. Throws
/// Error{InvalidArgument} when config.n is 0.
ShingleSet shingle(std::string_view text, const ShingleConfig& config = {});

}  // namespace corpusdedup
