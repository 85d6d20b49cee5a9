#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace corpusdedup {

using DocId = std::uint64_t;

enum class DocKind : std::uint8_t { java_method, discussion_thread };

std::string_view to_string(DocKind kind) noexcept;
/// Throws Error{MalformedRecord} for anything but the two kind names.
DocKind parse_doc_kind(std::string_view name);

/// Where a document came from. Threads carry the thread id in `project`, an
/// empty file path and zero line numbers.
struct Provenance {
  std::string project;
  std::string file_path;
  std::uint32_t start_line = 0;
  std::uint32_t end_line = 0;

  bool operator==(const Provenance&) const = default;
};

struct Document {
  DocId id = 0;
  DocKind kind = DocKind::java_method;
  std::string text;
  Provenance provenance;

  bool operator==(const Document&) const = default;
};

/// One method or constructor found by extract_java_methods. document.id is
/// unassigned (0) until the record is appended to a CorpusStore.
struct MethodRecord {
  Document document;
  std::string signature_text;
  std::optional<std::string> doc_comment;
  std::uint32_t doc_comment_line = 0;  // first line of doc_comment, 0 if none
  /// Set when the lexer hit something it could not make sense of inside the
  /// member (unterminated literal, unbalanced parentheses).
  bool parse_error = false;
};

/// Extracts every method and constructor declared directly in a named type
/// body (classes, interfaces with default/static methods, enums, records,
/// nested member types). Methods of anonymous or local classes stay part of
/// their enclosing method's text. Static and instance initializers, abstract
/// methods and enum-constant bodies are skipped.
///
/// Throws Error{NotUtf8} for undecodable input and Error{UnbalancedBraces}
/// when the file's braces do not balance (or it ends inside a comment or
/// text block); callers discard the whole file in that case.
std::vector<MethodRecord> extract_java_methods(std::string_view source, std::string_view project,
                                               std::string_view file_path);

/// Drops records with a whitespace-only body or a parse error; keeps order.
std::vector<MethodRecord> filter_methods(std::vector<MethodRecord> records);

/// True when everything between the body braces is whitespace.
bool has_empty_body(const MethodRecord& record);

/// Append-only document collection. Ids are unique; iteration order is the
/// insertion order. Immutable (and safe for concurrent readers) once ingestion
/// is finished.
class CorpusStore {
 public:
  /// Appends with a freshly assigned sequential id (doc.id is ignored).
  DocId append(Document doc);
  /// Appends keeping doc.id. Throws Error{DuplicateId}.
  void insert(Document doc);

  const Document* find(DocId id) const noexcept;
  /// Throws Error{UnknownId}.
  const Document& at(DocId id) const;
  bool contains(DocId id) const noexcept { return by_id_.contains(id); }

  std::span<const Document> documents() const noexcept { return documents_; }
  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }
  std::size_t count(DocKind kind) const noexcept;
  DocId next_id() const noexcept { return next_id_; }

  /// Writes `docs.txt` and `meta` into `dir` (created if needed).
  void save(const std::filesystem::path& dir) const;
  /// Throws Error{IoFailure} / Error{MalformedRecord} / Error{FormatVersionMismatch}.
  static CorpusStore load(const std::filesystem::path& dir);

 private:
  std::vector<Document> documents_;
  std::unordered_map<DocId, std::size_t> by_id_;
  std::size_t counts_[2] = {0, 0};
  DocId next_id_ = 0;
};

inline constexpr std::uint32_t kStoreFormatVersion = 1;

/// One `docs.txt` line (without the newline):
/// id TAB kind TAB base64(text) TAB project TAB file_path TAB start TAB end
std::string format_record(const Document& doc);
/// Throws Error{MalformedRecord}.
Document parse_record(std::string_view line);

/// Throws Error{UnknownId}.
Provenance trace(const CorpusStore& store, DocId id);

struct HoldoutSplit {
  std::vector<Document> holdout;  // ascending id
  std::set<DocId> remainder_ids;
};

/// Throws Error{UnknownId} if a holdout id is not in the store.
HoldoutSplit extract_holdout(const CorpusStore& store, const std::set<DocId>& holdout_ids);

/// Holdout id list: one decimal id per line; blank lines and `#` comments are
/// ignored. Throws Error{MalformedRecord}.
std::set<DocId> read_id_list(std::istream& in);
std::set<DocId> read_id_list(const std::filesystem::path& path);

struct ThreadOptions {
  bool strip_markup = true;
};

struct ThreadIngest {
  std::vector<Document> documents;  // ids unassigned; thread id in provenance.project
  std::size_t skipped = 0;
};

/// Reads the thread interchange format: one JSON object per line with
/// `thread_id`, `title` and `posts` (list of strings). Lines missing an id or
/// title are skipped and counted. Text is the title, a blank line, then the
/// posts separated by blank lines.
ThreadIngest ingest_threads(std::istream& jsonl, const ThreadOptions& options = {});

/// Removes HTML-style tags and decodes the common character entities.
std::string strip_markup(std::string_view html);

struct JavaIngestOptions {
  /// Prepend the method's doc comment to the stored (and deduplicated) text.
  bool include_doc_comment = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct JavaIngestStats {
  std::size_t files = 0;
  std::size_t corrupt_files = 0;
  std::size_t methods_found = 0;
  std::size_t methods_kept = 0;
};

/// Walks `root` for `.java` files (sorted path order). The first path
/// component below root is the project, the rest the file path. Corrupt files
/// contribute nothing; kept methods are appended to `store` in file order.
JavaIngestStats ingest_java_tree(const std::filesystem::path& root, CorpusStore& store,
                                 const JavaIngestOptions& options = {});

}  // namespace corpusdedup
