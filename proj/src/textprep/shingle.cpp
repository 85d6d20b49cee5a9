#include <algorithm>
#include <cctype>
#include <string>

#include "corpusdedup/error.hpp"
#include "corpusdedup/hashing.hpp"
#include "corpusdedup/textprep.hpp"

namespace corpusdedup {

std::uint64_t ShingleConfig::fingerprint() const noexcept {
  std::uint64_t h = hash_bytes("word_token-v1");
  h = hash_combine(h, n);
  h = hash_combine(h, lowercase ? 1 : 0);
  return hash_combine(h, seed);
}

ShingleSet::ShingleSet(std::vector<std::uint64_t> hashes) : hashes_(std::move(hashes)) {
  std::sort(hashes_.begin(), hashes_.end());
  hashes_.erase(std::unique(hashes_.begin(), hashes_.end()), hashes_.end());
}

bool ShingleSet::contains(std::uint64_t h) const noexcept {
  return std::binary_search(hashes_.begin(), hashes_.end(), h);
}

ShingleSet shingle(std::string_view text, const ShingleConfig& config) {
  if (config.n == 0) throw Error(ErrorCode::InvalidArgument, "shingle width must be at least 1");

  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])) != 0) ++i;
    const std::size_t start = i;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])) == 0) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  if (tokens.size() < config.n) return {};

  std::vector<std::uint64_t> hashes;
  hashes.reserve(tokens.size() - config.n + 1);
  std::string gram;
  for (std::size_t t = 0; t + config.n <= tokens.size(); ++t) {
    gram.clear();
    for (std::size_t k = 0; k < config.n; ++k) {
      if (k != 0) gram += ' ';
      gram += tokens[t + k];
    }
    if (config.lowercase) {
      std::transform(gram.begin(), gram.end(), gram.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
      });
    }
    hashes.push_back(hash_bytes(gram, config.seed));
  }
  return ShingleSet(std::move(hashes));
}

}  // namespace corpusdedup
