#include "corpusdedup/token_shards.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <thread>

#include <fmt/format.h>

#include "corpusdedup/error.hpp"
#include "corpusdedup/hashing.hpp"

namespace corpusdedup {
namespace {

constexpr std::size_t kBatch = 512;

unsigned worker_count(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

// Encodes docs[begin, end) across workers; result order matches input order.
std::vector<std::vector<TokenId>> encode_batch(std::span<const Document* const> docs,
                                               const BpeVocab& vocab, unsigned threads) {
  std::vector<std::vector<TokenId>> out(docs.size());
  const std::size_t per = (docs.size() + threads - 1) / threads;
  std::vector<std::future<void>> jobs;
  for (std::size_t lo = 0; lo < docs.size(); lo += per) {
    const std::size_t hi = std::min(docs.size(), lo + per);
    jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = bpe_encode(docs[i]->text, vocab);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

class TokenFile {
 public:
  explicit TokenFile(const std::filesystem::path& path) : path_(path), tmp_(path) {
    tmp_ += ".tmp";
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error(ErrorCode::IoFailure, "cannot write " + tmp_.string());
  }

  void append(const std::vector<TokenId>& ids, TokenId eot, TokenFileInfo& info) {
    buf_.clear();
    for (TokenId id : ids) push(id);
    push(eot);
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    info.tokens += ids.size() + 1;
    info.documents += 1;
  }

  void commit() {
    out_.close();
    if (!out_) throw Error(ErrorCode::IoFailure, "write failed: " + tmp_.string());
    std::error_code ec;
    std::filesystem::rename(tmp_, path_, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot rename to " + path_.string());
  }

 private:
  void push(TokenId id) {
    if (id > 0xFFFF) throw Error(ErrorCode::TokenIdOverflow, fmt::format("token id {} exceeds 16 bits", id));
    buf_.push_back(static_cast<char>(id & 0xFF));
    buf_.push_back(static_cast<char>(id >> 8));
  }

  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  std::string buf_;
};

}  // namespace

std::string TokenShardManifest::to_text() const {
  std::string s;
  for (const auto* f : {&train, &val}) {
    s += fmt::format("file={} tokens={} documents={}\n", f->file, f->tokens, f->documents);
  }
  s += fmt::format("excluded={}\nseed={}\nsplit={}\nvocab_fingerprint={:016x}\n", excluded, seed,
                   split, vocab_fingerprint);
  return s;
}

bool assign_to_validation(DocId id, double split, std::uint64_t seed) noexcept {
  const std::uint64_t h = mix64(seed ^ mix64(id + 0x9E3779B97F4A7C15ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53 < split;
}

TokenShardManifest write_token_shards(std::span<const Document> docs, const BpeVocab& vocab,
                                      const std::set<DocId>& exclusion,
                                      const TokenShardOptions& options,
                                      const std::filesystem::path& out_dir) {
  if (!(options.split >= 0.0 && options.split < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("split {} outside [0, 1)", options.split));
  }
  if (vocab.end_of_text() > 0xFFFF) {
    throw Error(ErrorCode::TokenIdOverflow, "end-of-text id exceeds 16 bits");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string());

  TokenShardManifest m;
  m.seed = options.seed;
  m.split = options.split;
  m.vocab_fingerprint = vocab.fingerprint();

  TokenFile train(out_dir / m.train.file);
  TokenFile val(out_dir / m.val.file);
  const unsigned threads = worker_count(options.threads);

  std::vector<const Document*> batch;
  auto flush = [&] {
    const auto encoded = encode_batch(batch, vocab, threads);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (assign_to_validation(batch[i]->id, options.split, options.seed)) {
        val.append(encoded[i], vocab.end_of_text(), m.val);
      } else {
        train.append(encoded[i], vocab.end_of_text(), m.train);
      }
    }
    batch.clear();
  };
  for (const auto& doc : docs) {
    if (exclusion.contains(doc.id)) {
      ++m.excluded;
      continue;
    }
    batch.push_back(&doc);
    if (batch.size() == kBatch * threads) flush();
  }
  flush();
  train.commit();
  val.commit();

  std::ofstream mf(out_dir / "manifest.txt", std::ios::trunc);
  mf << m.to_text();
  if (!mf) throw Error(ErrorCode::IoFailure, "cannot write manifest in " + out_dir.string());
  return m;
}

double CorpusStats::coverage() const noexcept {
  if (document_count == 0) return 1.0;
  return static_cast<double>(within_context) / static_cast<double>(document_count);
}

CorpusStats& CorpusStats::merge(const CorpusStats& other) {
  if (other.context != context) {
    throw Error(ErrorCode::InvalidArgument, "cannot merge stats for different context lengths");
  }
  document_count += other.document_count;
  token_count += other.token_count;
  within_context += other.within_context;
  return *this;
}

CorpusStats corpus_stats(std::span<const Document> docs, const BpeVocab& vocab,
                         std::uint64_t context, unsigned threads) {
  if (context == 0) throw Error(ErrorCode::InvalidArgument, "context length must be at least 1");
  const unsigned n = worker_count(threads);
  std::vector<CorpusStats> partial(n, CorpusStats{context});
  const std::size_t per = (docs.size() + n - 1) / std::max(1U, n);
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < n && w * per < docs.size(); ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      const std::size_t hi = std::min(docs.size(), (w + 1) * per);
      for (std::size_t i = w * per; i < hi; ++i) {
        const auto len = bpe_encode(docs[i].text, vocab).size();
        auto& s = partial[w];
        ++s.document_count;
        s.token_count += len;
        if (len <= context) ++s.within_context;
      }
    }));
  }
  for (auto& j : jobs) j.get();
  CorpusStats total{context};
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace corpusdedup
