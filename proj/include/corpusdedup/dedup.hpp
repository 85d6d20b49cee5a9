#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpusdedup/corpus.hpp"
#include "corpusdedup/lsh.hpp"
#include "corpusdedup/minhash.hpp"
#include "corpusdedup/textprep.hpp"

namespace corpusdedup {

enum class VerifyMode { none, signature, exact };

std::string_view to_string(VerifyMode mode) noexcept;
/// Throws Error{InvalidArgument}.
VerifyMode parse_verify_mode(std::string_view name);

/// Threshold as written in file names and reports ("0.70").
std::string format_threshold(double threshold);

// ---- index build -----------------------------------------------------------

/// Describes the shard set of one dataset at one threshold.
struct IndexManifest {
  struct Part {
    std::uint32_t index = 0;
    std::uint64_t begin = 0;  // ordinal range [begin, end) in the store
    std::uint64_t end = 0;
    std::uint64_t doc_count = 0;  // documents with a nonempty signature
    std::string shard_file;       // relative to the manifest's directory
    std::string signature_file;   // empty when no sidecar was written
  };

  std::string dataset;
  double threshold = 0.0;
  BandPlan plan;
  HasherMeta hasher;
  ShingleConfig shingle;
  std::uint32_t part_count = 1;
  std::uint64_t document_count = 0;
  std::string store;  // absolute path of the corpus store, may be empty
  std::vector<Part> parts;

  std::uint64_t indexed_count() const noexcept;
  std::string to_json() const;
  /// Throws Error{MalformedRecord}.
  static IndexManifest from_json(std::string_view text);
  /// Throws Error{IoFailure}, Error{MalformedRecord}.
  static IndexManifest load(const std::filesystem::path& path);
};

std::string manifest_filename(std::string_view dataset, double threshold);
std::string shard_filename(std::string_view dataset, double threshold, std::uint32_t part, std::uint32_t parts);

/// Ordinal range [begin, end) of part `part` under the contiguous ceil(N/P) rule.
std::pair<std::uint64_t, std::uint64_t> part_range(std::uint64_t n, std::uint32_t part, std::uint32_t parts) noexcept;

struct IndexBuildOptions {
  std::string dataset = "corpus";
  double threshold = 0.7;
  std::uint32_t parts = 1;
  std::size_t k = 256;
  std::uint64_t seed = 1;
  ShingleConfig shingle;
  bool write_signatures = true;
  /// Recorded in the manifest so exact verification can find the texts.
  std::filesystem::path store_path;
  unsigned threads = 0;
};

struct IndexBuildResult {
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> shards;
};

/// Throws Error{InvalidArgument}, Error{IoFailure}.
IndexBuildResult build_corpus_indexes(const CorpusStore& corpus, const IndexBuildOptions& options,
                                      const std::filesystem::path& out_dir);

/// Finds `<dataset>.t<threshold>.manifest.json` in `dir` (any dataset when
/// `dataset` is empty; it must then be unique). `dir` may also name the
/// manifest file itself. Throws Error{ManifestMismatch}.
std::filesystem::path find_manifest(const std::filesystem::path& dir, double threshold,
                                    std::string_view dataset = {});

// ---- reports ---------------------------------------------------------------

/// Matches of each test document, per part.
using PartMatches = std::map<DocId, std::set<DocId>>;

/// Identity of the job that produced a report.
struct ReportMeta {
  std::string dataset;
  double threshold = 0.0;
  HasherMeta hasher;
  std::string verify = "signature";  // a VerifyMode name or "mixed"
  std::uint32_t part_start = 0;
  std::uint32_t part_end = 0;
  bool merged = false;

  /// Same dataset, threshold and hasher.
  bool same_job(const ReportMeta& other) const noexcept;
};

/// Report file format: an optional `# corpusdedup key=value …` header line,
/// then one line per (test id, part), `17\t{3, 905}`, ordered by part then
/// test id. A merged report holds a single block.
struct DedupReport {
  std::optional<ReportMeta> meta;
  std::map<std::uint32_t, PartMatches> parts;

  /// Union across parts per test id.
  PartMatches merged() const;
  std::string serialize() const;
  /// Merged lines sorted by test id, no header.
  std::string canonical() const;
  /// Throws Error{MalformedRecord}.
  static DedupReport parse(std::string_view text);
  static DedupReport load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

/// Idempotent, order-independent union. Throws Error{JobMismatch}.
DedupReport merge_reports(std::span<const DedupReport> reports);
/// Test ids with a nonempty merged match set, ascending.
std::vector<DocId> removal_list(const DedupReport& report);

// ---- checking --------------------------------------------------------------

struct TestDoc {
  DocId id = 0;
  std::string text;
};

/// Reads store-format records (`id TAB kind TAB base64 …`), or with `raw`
/// either a directory (one document per file, sorted by name) or a file (one
/// document per line), ids assigned by position. Throws Error{IoFailure},
/// Error{MalformedRecord}.
std::vector<TestDoc> read_test_file(const std::filesystem::path& path, bool raw);

struct ScoredMatch {
  DocId id = 0;
  double similarity = -1.0;  // negative when unknown (no signature available)

  bool operator==(const ScoredMatch&) const = default;
};

/// A test document prepared for querying.
struct Probe {
  ShingleSet shingles;
  MinHashSignature signature;
};

/// One part ready for queries: the mapped shard and, if present, its sidecar.
struct LoadedPart {
  IndexManifest::Part info;
  LshIndexShard shard;
  std::optional<SignatureSidecar> signatures;
};

/// Resident state for checking against one manifest.
class IndexSet {
 public:
  /// Loads parts [part_start, part_end). Throws Error{ManifestMismatch} when a
  /// shard disagrees with the manifest, Error{MissingPart}.
  static IndexSet open(const std::filesystem::path& manifest_path, std::uint32_t part_start,
                       std::uint32_t part_end);
  static IndexSet open(const std::filesystem::path& manifest_path);

  const IndexManifest& manifest() const noexcept { return manifest_; }
  const MinHasher& hasher() const noexcept { return hasher_; }
  std::span<const LoadedPart> parts() const noexcept { return parts_; }

  Probe probe(std::string_view text) const;
  /// Verified matches within one loaded part, ascending by id. Exact mode
  /// needs `store`; signature mode needs the part's sidecar.
  /// Throws Error{InvalidArgument} when that input is missing.
  std::vector<ScoredMatch> match(const LoadedPart& part, const Probe& probe, VerifyMode mode,
                                 const CorpusStore* store) const;

 private:
  IndexManifest manifest_;
  MinHasher hasher_;
  std::vector<LoadedPart> parts_;
};

struct DedupJob {
  std::filesystem::path test_file;
  bool raw = false;
  std::filesystem::path lsh_dir;  // directory holding manifests, or a manifest
  std::string dataset;            // optional when the directory has one dataset
  double threshold = 0.7;
  std::uint32_t part_start = 0;
  std::optional<std::uint32_t> part_end;  // defaults to the manifest's part count
  VerifyMode verify = VerifyMode::signature;
  std::filesystem::path store;  // overrides the manifest's store for exact mode
  std::filesystem::path out;    // report path; nothing written when empty
  unsigned threads = 0;
};

/// Throws Error{ManifestMismatch}, Error{MissingPart}, Error{InvalidArgument},
/// Error{IoFailure}.
DedupReport dedup_testset(const DedupJob& job);
/// Same, over already-read test documents.
DedupReport dedup_documents(std::span<const TestDoc> tests, const DedupJob& job);

// ---- threshold sweep -------------------------------------------------------

struct SweepOptions {
  std::vector<double> thresholds{0.5, 0.6, 0.7, 0.8};
  std::size_t k = 256;
  std::uint64_t seed = 1;
  ShingleConfig shingle;
  unsigned threads = 0;
};

struct ThresholdSweep {
  std::vector<double> thresholds;
  std::vector<std::uint64_t> counts;  // test documents with at least one match
  std::string verification = "exact";
  std::vector<DedupReport> reports;  // merged report per threshold

  std::string to_text() const;
};

/// Builds an in-memory index per threshold, takes each test document's
/// candidates as the union over all of them, and verifies that common
/// candidate set exactly at every threshold. Throws Error{InvalidThreshold}
/// unless the thresholds are strictly increasing within (0, 1).
ThresholdSweep threshold_sweep(std::span<const TestDoc> tests, const CorpusStore& corpus,
                               const SweepOptions& options);

}  // namespace corpusdedup
