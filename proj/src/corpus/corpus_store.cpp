#include <algorithm>
#include <charconv>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "corpusdedup/codec.hpp"
#include "corpusdedup/corpus.hpp"
#include "corpusdedup/error.hpp"

namespace corpusdedup {
namespace {

// Fields other than the base64 text are escaped so a tab or newline in a
// project name cannot break the framing.
std::string escape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw Error(ErrorCode::MalformedRecord, "dangling escape");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw Error(ErrorCode::MalformedRecord, "unknown escape");
    }
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedRecord, fmt::format("bad {} '{}'", what, s));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(DocKind kind) noexcept {
  return kind == DocKind::java_method ? "java_method" : "discussion_thread";
}

DocKind parse_doc_kind(std::string_view name) {
  if (name == "java_method") return DocKind::java_method;
  if (name == "discussion_thread") return DocKind::discussion_thread;
  throw Error(ErrorCode::MalformedRecord, fmt::format("unknown document kind '{}'", name));
}

DocId CorpusStore::append(Document doc) {
  while (by_id_.contains(next_id_)) ++next_id_;
  doc.id = next_id_;
  insert(std::move(doc));
  return documents_.back().id;
}

void CorpusStore::insert(Document doc) {
  if (by_id_.contains(doc.id)) {
    throw Error(ErrorCode::DuplicateId, fmt::format("document id {} already in store", doc.id));
  }
  by_id_.emplace(doc.id, documents_.size());
  ++counts_[static_cast<int>(doc.kind)];
  next_id_ = std::max(next_id_, doc.id + 1);
  documents_.push_back(std::move(doc));
}

const Document* CorpusStore::find(DocId id) const noexcept {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &documents_[it->second];
}

const Document& CorpusStore::at(DocId id) const {
  if (const auto* d = find(id)) return *d;
  throw Error(ErrorCode::UnknownId, fmt::format("document id {} not in store", id));
}

std::size_t CorpusStore::count(DocKind kind) const noexcept { return counts_[static_cast<int>(kind)]; }

std::string format_record(const Document& doc) {
  return fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}", doc.id, to_string(doc.kind), base64_encode(doc.text),
                     escape_field(doc.provenance.project), escape_field(doc.provenance.file_path),
                     doc.provenance.start_line, doc.provenance.end_line);
}

Document parse_record(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = split(line, '\t');
  if (f.size() != 7) {
    throw Error(ErrorCode::MalformedRecord, fmt::format("expected 7 fields, got {}", f.size()));
  }
  Document doc;
  doc.id = parse_number<DocId>(f[0], "id");
  doc.kind = parse_doc_kind(f[1]);
  doc.text = base64_decode(f[2]);
  doc.provenance.project = unescape_field(f[3]);
  doc.provenance.file_path = unescape_field(f[4]);
  doc.provenance.start_line = parse_number<std::uint32_t>(f[5], "start line");
  doc.provenance.end_line = parse_number<std::uint32_t>(f[6], "end line");
  return doc;
}

void CorpusStore::save(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

  std::string docs;
  for (const auto& d : documents_) {
    docs += format_record(d);
    docs += '\n';
  }
  write_file_atomic(dir / "docs.txt", docs);
  write_file_atomic(dir / "meta", fmt::format("format_version={}\ndocuments={}\njava_method={}\n"
                                              "discussion_thread={}\nnext_id={}\n",
                                              kStoreFormatVersion, documents_.size(), counts_[0],
                                              counts_[1], next_id_));
}

CorpusStore CorpusStore::load(const std::filesystem::path& dir) {
  const std::string meta = read_file(dir / "meta");
  std::uint32_t version = 0;
  std::size_t expected = 0;
  DocId next_id = 0;
  for (auto line : split(meta, '\n')) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    const auto key = line.substr(0, eq);
    const auto value = line.substr(eq + 1);
    if (key == "format_version") version = parse_number<std::uint32_t>(value, "format version");
    if (key == "documents") expected = parse_number<std::size_t>(value, "document count");
    if (key == "next_id") next_id = parse_number<DocId>(value, "next id");
  }
  if (version != kStoreFormatVersion) {
    throw Error(ErrorCode::FormatVersionMismatch,
                fmt::format("store format {} (expected {})", version, kStoreFormatVersion));
  }

  std::ifstream in(dir / "docs.txt", std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + (dir / "docs.txt").string());
  CorpusStore store;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    store.insert(parse_record(line));
  }
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed for docs.txt");
  if (store.size() != expected) {
    throw Error(ErrorCode::MalformedRecord,
                fmt::format("meta lists {} documents, docs.txt has {}", expected, store.size()));
  }
  store.next_id_ = std::max(store.next_id_, next_id);
  return store;
}

Provenance trace(const CorpusStore& store, DocId id) { return store.at(id).provenance; }

HoldoutSplit extract_holdout(const CorpusStore& store, const std::set<DocId>& holdout_ids) {
  HoldoutSplit out;
  out.holdout.reserve(holdout_ids.size());
  for (DocId id : holdout_ids) out.holdout.push_back(store.at(id));
  for (const auto& d : store.documents()) {
    if (!holdout_ids.contains(d.id)) out.remainder_ids.insert(d.id);
  }
  return out;
}

std::set<DocId> read_id_list(std::istream& in) {
  std::set<DocId> ids;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view v = line;
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back())) != 0) v.remove_suffix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front())) != 0) v.remove_prefix(1);
    if (v.empty() || v.front() == '#') continue;
    ids.insert(parse_number<DocId>(v, "id"));
  }
  return ids;
}

std::set<DocId> read_id_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return read_id_list(in);
}

std::string strip_markup(std::string_view html) {
  std::string out;
  out.reserve(html.size());
  for (std::size_t i = 0; i < html.size(); ++i) {
    const char c = html[i];
    if (c == '<' && i + 1 < html.size() &&
        (std::isalpha(static_cast<unsigned char>(html[i + 1])) != 0 || html[i + 1] == '/' ||
         html[i + 1] == '!' || html[i + 1] == '?')) {
      const auto close = html.find('>', i + 1);
      if (close != std::string_view::npos) {
        i = close;
        continue;
      }
    }
    if (c == '&') {
      static constexpr std::pair<std::string_view, std::string_view> kEntities[] = {
          {"&lt;", "<"}, {"&gt;", ">"}, {"&amp;", "&"}, {"&quot;", "\""}, {"&#39;", "'"}, {"&apos;", "'"},
          {"&nbsp;", " "}};
      bool replaced = false;
      for (const auto& [entity, repl] : kEntities) {
        if (html.substr(i, entity.size()) == entity) {
          out += repl;
          i += entity.size() - 1;
          replaced = true;
          break;
        }
      }
      if (replaced) continue;
    }
    out += c;
  }
  return out;
}

ThreadIngest ingest_threads(std::istream& jsonl, const ThreadOptions& options) {
  ThreadIngest result;
  std::string line;
  while (std::getline(jsonl, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object()) {
      ++result.skipped;
      continue;
    }
    std::optional<std::uint64_t> id;
    if (const auto it = j.find("thread_id"); it != j.end()) {
      if (it->is_number_unsigned()) {
        id = it->get<std::uint64_t>();
      } else if (it->is_string()) {
        const auto& s = it->get_ref<const std::string&>();
        std::uint64_t v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc{} && p == s.data() + s.size() && !s.empty()) id = v;
      }
    }
    const auto title_it = j.find("title");
    if (!id || title_it == j.end() || !title_it->is_string()) {
      ++result.skipped;
      continue;
    }
    auto clean = [&](const std::string& s) { return options.strip_markup ? strip_markup(s) : s; };

    std::string text = clean(title_it->get<std::string>());
    if (const auto posts = j.find("posts"); posts != j.end() && posts->is_array()) {
      for (const auto& p : *posts) {
        if (!p.is_string()) continue;
        text += "\n\n";
        text += clean(p.get<std::string>());
      }
    }
    Document doc;
    doc.kind = DocKind::discussion_thread;
    doc.text = std::move(text);
    doc.provenance.project = std::to_string(*id);
    result.documents.push_back(std::move(doc));
  }
  return result;
}

JavaIngestStats ingest_java_tree(const std::filesystem::path& root, CorpusStore& store,
                                 const JavaIngestOptions& options) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  std::error_code ec;
  for (fs::recursive_directory_iterator it(root, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".java") files.push_back(it->path());
  }
  if (ec) throw Error(ErrorCode::IoFailure, "cannot walk " + root.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  struct FileResult {
    std::vector<MethodRecord> kept;
    std::size_t found = 0;
    bool corrupt = false;
  };
  auto process = [&](const fs::path& file) {
    FileResult r;
    const auto rel = fs::relative(file, root);
    std::string project;
    std::string path;
    if (std::distance(rel.begin(), rel.end()) > 1) {
      project = rel.begin()->string();
      path = rel.lexically_relative(*rel.begin()).generic_string();
    } else {
      project = root.filename().string();
      path = rel.generic_string();
    }
    try {
      auto records = extract_java_methods(read_file(file), project, path);
      r.found = records.size();
      r.kept = filter_methods(std::move(records));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnbalancedBraces && e.code() != ErrorCode::NotUtf8) throw;
      r.corrupt = true;
    }
    return r;
  };

  unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  JavaIngestStats stats;
  const std::size_t batch = std::max<std::size_t>(threads * 8, 1);
  for (std::size_t start = 0; start < files.size(); start += batch) {
    const std::size_t stop = std::min(files.size(), start + batch);
    std::vector<std::future<FileResult>> pending;
    for (std::size_t k = start; k < stop; ++k) {
      pending.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, process,
                                   std::cref(files[k])));
    }
    // Appends happen here, in file order, on the calling thread only.
    for (auto& f : pending) {
      FileResult r = f.get();
      ++stats.files;
      stats.corrupt_files += r.corrupt ? 1 : 0;
      stats.methods_found += r.found;
      for (auto& rec : r.kept) {
        if (options.include_doc_comment && rec.doc_comment) {
          rec.document.text = *rec.doc_comment + "\n" + rec.document.text;
          rec.document.provenance.start_line = rec.doc_comment_line;
        }
        store.append(std::move(rec.document));
        ++stats.methods_kept;
      }
    }
  }
  return stats;
}

}  // namespace corpusdedup
