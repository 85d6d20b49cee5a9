#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "corpusdedup/codec.hpp"
#include "corpusdedup/corpus.hpp"
#include "corpusdedup/minhash.hpp"

namespace corpusdedup {

struct BandPlan {
  std::uint32_t bands = 1;
  std::uint32_t rows = 1;
  double threshold = 0.5;

  bool operator==(const BandPlan&) const = default;
};

/// Minimizes FP + FN area of the S-curve over all b·r <= k (midpoint rule,
/// step 0.001). Ties go to smaller r, then smaller b.
/// Throws Error{InvalidThreshold} unless 0 < threshold < 1, Error{InvalidK}
/// when k is 0.
BandPlan optimal_bands(double threshold, std::size_t k);

/// 1 − (1 − s^r)^b.
double candidate_probability(double s, const BandPlan& plan) noexcept;

/// Identity of the hashing scheme an index was built with.
struct HasherMeta {
  std::uint32_t k = 0;
  std::uint64_t seed = 0;
  std::uint64_t shingle_fingerprint = 0;

  bool operator==(const HasherMeta&) const = default;
};

struct PartInfo {
  std::uint32_t index = 0;
  std::uint32_t count = 1;

  bool operator==(const PartInfo&) const = default;
};

/// Bucket key of one band: a hash_combine chain seeded by the band index over
/// the band's r slots, so equal slot values in different bands get unrelated
/// keys.
std::uint64_t band_key(std::span<const std::uint64_t> mins, std::uint32_t band, std::uint32_t rows) noexcept;

/// Sorted, duplicate-free candidate ids.
using CandidateSet = std::vector<DocId>;

/// Banded bucket index over one corpus part. Always backed by its serialized
/// image (in memory after building, memory-mapped after loading), so a saved
/// and reloaded shard answers queries from identical bytes.
///
/// File layout, little-endian:
///   header   "CDLSHIDX" u32 version, u32 k, u64 seed, u64 shingle_fp,
///            u32 bands, u32 rows, f64 threshold, u32 part_index,
///            u32 part_count, u64 doc_count
///   bands ×  {u64 key_count, u64 table_offset}
///   tables   per band, key_count × {u64 key, u64 run_offset, u32 run_len, u32 0}
///            sorted by key
///   runs     ascending ids, varint delta-encoded
///   u32      crc32 of everything before it
class LshIndexShard {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  const HasherMeta& hasher() const noexcept { return meta_; }
  const BandPlan& plan() const noexcept { return plan_; }
  const PartInfo& part() const noexcept { return part_; }
  std::uint64_t doc_count() const noexcept { return doc_count_; }

  /// Throws Error{HasherMismatch} when `expected` (or the signature length)
  /// differs from the shard's hasher.
  CandidateSet query(const MinHashSignature& sig, const HasherMeta& expected) const;
  /// Members of one bucket, ascending.
  std::vector<DocId> bucket(std::uint32_t band, std::uint64_t key) const;
  std::size_t bucket_count(std::uint32_t band) const;
  /// Sum of all bucket sizes.
  std::uint64_t membership_count() const;

  std::span<const std::uint8_t> image() const noexcept { return bytes_; }
  /// Throws Error{IoFailure}.
  void save(const std::filesystem::path& path) const;
  /// Throws Error{IoFailure}, Error{FormatVersionMismatch}, Error{ChecksumMismatch}.
  static LshIndexShard load(const std::filesystem::path& path);
  /// Parses an in-memory image with the same checks as load().
  static LshIndexShard from_image(std::vector<std::uint8_t> image);

 private:
  static LshIndexShard parse(std::shared_ptr<const void> owner, std::span<const std::uint8_t> bytes);
  void decode_run(std::uint64_t offset, std::uint32_t len, std::vector<DocId>& out) const;
  const std::uint8_t* find_key(std::uint32_t band, std::uint64_t key) const;

  std::shared_ptr<const void> owner_;
  std::span<const std::uint8_t> bytes_;
  HasherMeta meta_;
  BandPlan plan_;
  PartInfo part_;
  std::uint64_t doc_count_ = 0;
};

/// Streams signatures into a shard. Sentinel signatures are accepted but not
/// indexed.
class ShardBuilder {
 public:
  /// Throws Error{InvalidArgument} when the plan needs more than k slots or
  /// the part index is out of range.
  ShardBuilder(HasherMeta meta, BandPlan plan, PartInfo part);

  /// Throws Error{DuplicateId}, Error{HasherMismatch} on a wrong-length signature.
  void add(DocId id, const MinHashSignature& sig);
  LshIndexShard build() &&;

 private:
  HasherMeta meta_;
  BandPlan plan_;
  PartInfo part_;
  std::vector<std::vector<std::pair<std::uint64_t, DocId>>> entries_;  // per band
  std::vector<DocId> seen_;
  std::uint64_t indexed_ = 0;
};

LshIndexShard build_shard(std::span<const std::pair<DocId, ShingleSet>> docs, const MinHasher& hasher,
                          const ShingleConfig& shingles, const BandPlan& plan, PartInfo part = {});

/// Optional sidecar holding raw signatures of a shard's documents, used by
/// signature verification. Memory-mapped on load. Layout: "CDSIGS01" u32 k,
/// u32 0, u64 seed, u64 count, count × {u64 id, k × u64 mins} sorted by id,
/// u32 crc32.
class SignatureSidecar {
 public:
  static void save(const std::filesystem::path& path, const HasherMeta& meta,
                   std::vector<std::pair<DocId, MinHashSignature>> entries);
  /// Throws Error{IoFailure}, Error{FormatVersionMismatch}, Error{ChecksumMismatch}.
  static SignatureSidecar load(const std::filesystem::path& path);

  std::uint32_t k() const noexcept { return k_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t size() const noexcept { return count_; }
  /// Signature slots of `id`, or an empty span when absent.
  std::span<const std::uint64_t> find(DocId id) const;

 private:
  std::shared_ptr<const MappedFile> file_;
  const std::uint64_t* entries_ = nullptr;
  std::uint32_t k_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t count_ = 0;
};

}  // namespace corpusdedup
