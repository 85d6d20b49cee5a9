#include <algorithm>
#include <bit>
#include <cstring>
#include <unordered_set>

#include <fmt/format.h>

#include "corpusdedup/codec.hpp"
#include "corpusdedup/error.hpp"
#include "corpusdedup/hashing.hpp"
#include "corpusdedup/lsh.hpp"

namespace corpusdedup {
namespace {

static_assert(std::endian::native == std::endian::little, "mapped index files assume a little-endian host");

constexpr char kShardMagic[8] = {'C', 'D', 'L', 'S', 'H', 'I', 'D', 'X'};
constexpr char kSigMagic[8] = {'C', 'D', 'S', 'I', 'G', 'S', '0', '1'};
constexpr std::size_t kHeaderSize = 64;
constexpr std::size_t kDirEntry = 16;
constexpr std::size_t kTableEntry = 24;
constexpr std::size_t kSigHeaderSize = 32;

void check_crc(std::span<const std::uint8_t> bytes, const char* what) {
  if (bytes.size() < 4) throw Error(ErrorCode::ChecksumMismatch, fmt::format("{} is truncated", what));
  const auto body = bytes.first(bytes.size() - 4);
  if (crc32(body) != load_u32(bytes.data() + body.size())) {
    throw Error(ErrorCode::ChecksumMismatch, fmt::format("{} checksum mismatch", what));
  }
}

void check_magic(std::span<const std::uint8_t> bytes, const char (&magic)[8], const char* what) {
  if (bytes.size() < 12) throw Error(ErrorCode::ChecksumMismatch, fmt::format("{} is truncated", what));
  if (std::memcmp(bytes.data(), magic, 8) != 0) {
    throw Error(ErrorCode::FormatVersionMismatch, fmt::format("not a {}", what));
  }
}

}  // namespace

std::uint64_t band_key(std::span<const std::uint64_t> mins, std::uint32_t band, std::uint32_t rows) noexcept {
  std::uint64_t h = mix64(0xB7E151628AED2A6BULL ^ band);
  const std::size_t base = static_cast<std::size_t>(band) * rows;
  for (std::uint32_t j = 0; j < rows; ++j) h = hash_combine(h, mins[base + j]);
  return h;
}

// ---- builder ---------------------------------------------------------------

ShardBuilder::ShardBuilder(HasherMeta meta, BandPlan plan, PartInfo part)
    : meta_(meta), plan_(plan), part_(part), entries_(plan.bands) {
  if (plan.bands == 0 || plan.rows == 0 ||
      static_cast<std::uint64_t>(plan.bands) * plan.rows > meta.k) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("band plan {}x{} does not fit k={}", plan.bands, plan.rows, meta.k));
  }
  if (part.index >= part.count) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("part {} of {}", part.index, part.count));
  }
}

void ShardBuilder::add(DocId id, const MinHashSignature& sig) {
  if (sig.k() != meta_.k) {
    throw Error(ErrorCode::HasherMismatch, fmt::format("signature has k={}, shard expects {}", sig.k(), meta_.k));
  }
  seen_.push_back(id);
  if (sig.is_sentinel()) return;
  for (std::uint32_t band = 0; band < plan_.bands; ++band) {
    entries_[band].emplace_back(band_key(sig.mins, band, plan_.rows), id);
  }
  ++indexed_;
}

LshIndexShard ShardBuilder::build() && {
  std::sort(seen_.begin(), seen_.end());
  if (const auto dup = std::adjacent_find(seen_.begin(), seen_.end()); dup != seen_.end()) {
    throw Error(ErrorCode::DuplicateId, fmt::format("document id {} added twice", *dup));
  }

  struct Key {
    std::uint64_t key;
    std::uint64_t run_offset;  // relative to the runs section
    std::uint32_t run_len;
  };
  std::vector<std::vector<Key>> tables(plan_.bands);
  ByteWriter runs;
  std::size_t total_keys = 0;
  for (std::uint32_t band = 0; band < plan_.bands; ++band) {
    auto& e = entries_[band];
    std::sort(e.begin(), e.end());
    for (std::size_t i = 0; i < e.size();) {
      const std::size_t start = runs.size();
      DocId prev = 0;
      std::size_t j = i;
      for (; j < e.size() && e[j].first == e[i].first; ++j) {
        runs.varint(j == i ? e[j].second : e[j].second - prev);
        prev = e[j].second;
      }
      tables[band].push_back({e[i].first, start, static_cast<std::uint32_t>(runs.size() - start)});
      i = j;
    }
    total_keys += tables[band].size();
    e = {};
  }

  const std::uint64_t runs_base = kHeaderSize + kDirEntry * plan_.bands + kTableEntry * total_keys;
  ByteWriter w;
  w.bytes(std::string_view(kShardMagic, 8));
  w.u32(LshIndexShard::kFormatVersion);
  w.u32(meta_.k);
  w.u64(meta_.seed);
  w.u64(meta_.shingle_fingerprint);
  w.u32(plan_.bands);
  w.u32(plan_.rows);
  w.f64(plan_.threshold);
  w.u32(part_.index);
  w.u32(part_.count);
  w.u64(indexed_);
  std::uint64_t table_offset = kHeaderSize + kDirEntry * plan_.bands;
  for (const auto& t : tables) {
    w.u64(t.size());
    w.u64(table_offset);
    table_offset += kTableEntry * t.size();
  }
  for (const auto& t : tables) {
    for (const auto& k : t) {
      w.u64(k.key);
      w.u64(runs_base + k.run_offset);
      w.u32(k.run_len);
      w.u32(0);
    }
  }
  auto& buf = w.data();
  const auto run_bytes = runs.release();
  buf.insert(buf.end(), run_bytes.begin(), run_bytes.end());
  w.u32(crc32(buf));
  return LshIndexShard::from_image(w.release());
}

LshIndexShard build_shard(std::span<const std::pair<DocId, ShingleSet>> docs, const MinHasher& hasher,
                          const ShingleConfig& shingles, const BandPlan& plan, PartInfo part) {
  ShardBuilder builder(
      HasherMeta{static_cast<std::uint32_t>(hasher.k()), hasher.seed(), shingles.fingerprint()}, plan, part);
  for (const auto& [id, set] : docs) builder.add(id, hasher.signature(set));
  return std::move(builder).build();
}

// ---- shard -----------------------------------------------------------------

LshIndexShard LshIndexShard::from_image(std::vector<std::uint8_t> image) {
  auto owner = std::make_shared<const std::vector<std::uint8_t>>(std::move(image));
  const std::span<const std::uint8_t> bytes(*owner);
  return parse(std::move(owner), bytes);
}

LshIndexShard LshIndexShard::load(const std::filesystem::path& path) {
  auto file = MappedFile::open(path);
  const auto bytes = file->bytes();
  return parse(std::move(file), bytes);
}

void LshIndexShard::save(const std::filesystem::path& path) const { write_file_atomic(path, bytes_); }

LshIndexShard LshIndexShard::parse(std::shared_ptr<const void> owner, std::span<const std::uint8_t> bytes) {
  check_magic(bytes, kShardMagic, "shard file");
  const std::uint32_t version = load_u32(bytes.data() + 8);
  if (version != kFormatVersion) {
    throw Error(ErrorCode::FormatVersionMismatch,
                fmt::format("shard format version {}, expected {}", version, kFormatVersion));
  }
  check_crc(bytes, "shard file");
  const std::size_t end = bytes.size() - 4;

  ByteReader r(bytes.first(end), 12);
  LshIndexShard s;
  s.meta_.k = r.u32();
  s.meta_.seed = r.u64();
  s.meta_.shingle_fingerprint = r.u64();
  s.plan_.bands = r.u32();
  s.plan_.rows = r.u32();
  s.plan_.threshold = r.f64();
  s.part_.index = r.u32();
  s.part_.count = r.u32();
  s.doc_count_ = r.u64();
  if (s.plan_.bands == 0 || s.plan_.rows == 0 ||
      static_cast<std::uint64_t>(s.plan_.bands) * s.plan_.rows > s.meta_.k || s.part_.index >= s.part_.count) {
    throw Error(ErrorCode::ChecksumMismatch, "shard header is inconsistent");
  }
  for (std::uint32_t band = 0; band < s.plan_.bands; ++band) {
    const std::uint64_t count = r.u64();
    const std::uint64_t offset = r.u64();
    if (offset > end || count > (end - offset) / kTableEntry) {
      throw Error(ErrorCode::ChecksumMismatch, fmt::format("band {} table out of bounds", band));
    }
  }
  s.owner_ = std::move(owner);
  s.bytes_ = bytes;
  return s;
}

const std::uint8_t* LshIndexShard::find_key(std::uint32_t band, std::uint64_t key) const {
  const std::uint8_t* dir = bytes_.data() + kHeaderSize + kDirEntry * band;
  const std::uint64_t count = load_u64(dir);
  const std::uint8_t* table = bytes_.data() + load_u64(dir + 8);
  std::uint64_t lo = 0, hi = count;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (load_u64(table + mid * kTableEntry) < key) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < count && load_u64(table + lo * kTableEntry) == key) return table + lo * kTableEntry;
  return nullptr;
}

void LshIndexShard::decode_run(std::uint64_t offset, std::uint32_t len, std::vector<DocId>& out) const {
  const std::size_t end = bytes_.size() - 4;
  if (offset > end || len > end - offset) throw Error(ErrorCode::ChecksumMismatch, "bucket run out of bounds");
  ByteReader r(bytes_.first(offset + len), offset);
  DocId id = 0;
  bool first = true;
  while (r.position() < offset + len) {
    const std::uint64_t v = r.varint();
    id = first ? v : id + v;
    first = false;
    out.push_back(id);
  }
}

std::vector<DocId> LshIndexShard::bucket(std::uint32_t band, std::uint64_t key) const {
  std::vector<DocId> out;
  if (band >= plan_.bands) return out;
  if (const auto* e = find_key(band, key)) decode_run(load_u64(e + 8), load_u32(e + 16), out);
  return out;
}

std::size_t LshIndexShard::bucket_count(std::uint32_t band) const {
  if (band >= plan_.bands) return 0;
  return load_u64(bytes_.data() + kHeaderSize + kDirEntry * band);
}

std::uint64_t LshIndexShard::membership_count() const {
  std::uint64_t total = 0;
  std::vector<DocId> ids;
  for (std::uint32_t band = 0; band < plan_.bands; ++band) {
    const std::uint8_t* dir = bytes_.data() + kHeaderSize + kDirEntry * band;
    const std::uint8_t* table = bytes_.data() + load_u64(dir + 8);
    for (std::uint64_t i = 0; i < load_u64(dir); ++i) {
      ids.clear();
      decode_run(load_u64(table + i * kTableEntry + 8), load_u32(table + i * kTableEntry + 16), ids);
      total += ids.size();
    }
  }
  return total;
}

CandidateSet LshIndexShard::query(const MinHashSignature& sig, const HasherMeta& expected) const {
  if (!(expected == meta_) || sig.k() != meta_.k) {
    throw Error(ErrorCode::HasherMismatch,
                fmt::format("query hasher (k={}, seed={}, shingle={:016x}) does not match shard (k={}, seed={}, "
                            "shingle={:016x})",
                            sig.k(), expected.seed, expected.shingle_fingerprint, meta_.k, meta_.seed,
                            meta_.shingle_fingerprint));
  }
  CandidateSet out;
  if (sig.is_sentinel()) return out;
  for (std::uint32_t band = 0; band < plan_.bands; ++band) {
    if (const auto* e = find_key(band, band_key(sig.mins, band, plan_.rows))) {
      decode_run(load_u64(e + 8), load_u32(e + 16), out);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- signature sidecar -----------------------------------------------------

void SignatureSidecar::save(const std::filesystem::path& path, const HasherMeta& meta,
                            std::vector<std::pair<DocId, MinHashSignature>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  ByteWriter w;
  w.bytes(std::string_view(kSigMagic, 8));
  w.u32(meta.k);
  w.u32(0);
  w.u64(meta.seed);
  w.u64(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [id, sig] = entries[i];
    if (i > 0 && entries[i - 1].first == id) {
      throw Error(ErrorCode::DuplicateId, fmt::format("document id {} added twice", id));
    }
    if (sig.k() != meta.k) throw Error(ErrorCode::HasherMismatch, "signature length differs from k");
    w.u64(id);
    for (const auto v : sig.mins) w.u64(v);
  }
  w.u32(crc32(w.data()));
  write_file_atomic(path, w.data());
}

SignatureSidecar SignatureSidecar::load(const std::filesystem::path& path) {
  SignatureSidecar s;
  s.file_ = MappedFile::open(path);
  const auto bytes = s.file_->bytes();
  check_magic(bytes, kSigMagic, "signature sidecar");
  check_crc(bytes, "signature sidecar");
  if (bytes.size() < kSigHeaderSize + 4) throw Error(ErrorCode::ChecksumMismatch, "signature sidecar is truncated");
  s.k_ = load_u32(bytes.data() + 8);
  s.seed_ = load_u64(bytes.data() + 16);
  s.count_ = load_u64(bytes.data() + 24);
  const std::uint64_t stride = (static_cast<std::uint64_t>(s.k_) + 1) * 8;
  if (s.k_ == 0 || s.count_ > (bytes.size() - kSigHeaderSize - 4) / stride ||
      kSigHeaderSize + s.count_ * stride + 4 != bytes.size()) {
    throw Error(ErrorCode::ChecksumMismatch, "signature sidecar size does not match its header");
  }
  s.entries_ = reinterpret_cast<const std::uint64_t*>(bytes.data() + kSigHeaderSize);
  return s;
}

std::span<const std::uint64_t> SignatureSidecar::find(DocId id) const {
  const std::size_t stride = static_cast<std::size_t>(k_) + 1;
  std::uint64_t lo = 0, hi = count_;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (entries_[mid * stride] < id) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < count_ && entries_[lo * stride] == id) return {entries_ + lo * stride + 1, k_};
  return {};
}

}  // namespace corpusdedup
