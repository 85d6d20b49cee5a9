#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>

#include "corpusdedup/bpe.hpp"
#include "corpusdedup/corpus.hpp"

namespace corpusdedup {

struct TokenFileInfo {
  std::string file;
  std::uint64_t tokens = 0;
  std::uint64_t documents = 0;
};

/// Contents of `manifest.txt` next to the token shards.
struct TokenShardManifest {
  TokenFileInfo train{"train.bin"};
  TokenFileInfo val{"val.bin"};
  std::uint64_t excluded = 0;
  std::uint64_t seed = 0;
  double split = 0.0;
  std::uint64_t vocab_fingerprint = 0;

  std::string to_text() const;
};

struct TokenShardOptions {
  double split = 0.005;
  std::uint64_t seed = 1234;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Seeded per-document validation assignment, independent of stream order.
bool assign_to_validation(DocId id, double split, std::uint64_t seed) noexcept;

/// Writes `train.bin`, `val.bin` (headerless little-endian u16 ids, each
/// document followed by the end-of-text id) and `manifest.txt` into out_dir.
/// Documents whose id is in `exclusion` are skipped.
///
/// Throws Error{InvalidArgument} unless 0 <= split < 1, Error{TokenIdOverflow}
/// for ids that do not fit 16 bits, Error{IoFailure}.
TokenShardManifest write_token_shards(std::span<const Document> docs, const BpeVocab& vocab,
                                      const std::set<DocId>& exclusion,
                                      const TokenShardOptions& options,
                                      const std::filesystem::path& out_dir);

struct CorpusStats {
  std::uint64_t context = 0;
  std::uint64_t document_count = 0;
  std::uint64_t token_count = 0;
  std::uint64_t within_context = 0;  // documents with <= context tokens

  /// Fraction of documents that fit the context; 1.0 for an empty corpus.
  double coverage() const noexcept;
  /// Throws Error{InvalidArgument} when the context lengths differ.
  CorpusStats& merge(const CorpusStats& other);

  bool operator==(const CorpusStats&) const = default;
};

/// Throws Error{InvalidArgument} when context is 0.
CorpusStats corpus_stats(std::span<const Document> docs, const BpeVocab& vocab,
                         std::uint64_t context, unsigned threads = 0);

}  // namespace corpusdedup
