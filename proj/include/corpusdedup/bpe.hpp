#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corpusdedup {

using TokenId = std::uint32_t;

/// GPT-2 style byte-level BPE vocabulary.
///
/// Loaded from the published text layouts: a JSON token→id map
/// (`encoder.json` or `vocab.json`) and a ranked merge list (`vocab.bpe` or
/// `merges.txt`, optional `#version` first line, one "left right" pair per
/// line). Symbols are stored in their byte-to-unicode spelling, as in the
/// files.
class BpeVocab {
 public:
  static BpeVocab load(const std::filesystem::path& dir);
  /// Throws Error{VocabMissingSymbol} if a merge is duplicated or the
  /// end-of-text token is absent.
  static BpeVocab from_parts(std::unordered_map<std::string, TokenId> token_to_id,
                             std::vector<std::pair<std::string, std::string>> merges,
                             std::string_view end_of_text = "<|endoftext|>");

  std::size_t size() const noexcept { return id_to_token_.size(); }
  TokenId end_of_text() const noexcept { return eot_; }
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  /// Rank of the merge (left, right), or -1.
  std::int64_t merge_rank(std::string_view left, std::string_view right) const;
  const std::string* token(TokenId id) const noexcept;
  const TokenId* id(std::string_view symbol) const noexcept;

  /// Maps each byte to its printable unicode stand-in (UTF-8 encoded).
  static const std::array<std::string, 256>& byte_encoder();

 private:
  std::unordered_map<std::string, TokenId> token_to_id_;
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, std::uint32_t> ranks_;  // "left right" -> rank
  TokenId eot_ = 0;
  std::uint64_t fingerprint_ = 0;
};

/// Splits text the way the GPT-2 pre-tokenizer regex does:
/// 's|'t|'re|'ve|'m|'ll|'d| ?\p{L}+| ?\p{N}+| ?[^\s\p{L}\p{N}]+|\s+(?!\S)|\s+
/// Invalid UTF-8 bytes are treated as single non-letter, non-number symbols.
std::vector<std::string_view> gpt2_pretokenize(std::string_view text);

/// Throws Error{VocabMissingSymbol} if a merged symbol has no id.
std::vector<TokenId> bpe_encode(std::string_view text, const BpeVocab& vocab);
/// Throws Error{UnknownTokenId}.
std::string bpe_decode(std::span<const TokenId> ids, const BpeVocab& vocab);

}  // namespace corpusdedup
