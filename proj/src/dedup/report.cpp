#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "corpusdedup/codec.hpp"
#include "corpusdedup/dedup.hpp"
#include "corpusdedup/error.hpp"

namespace corpusdedup {
namespace {

constexpr std::string_view kHeaderTag = "# corpusdedup";

template <class T>
T parse_number(std::string_view s, std::string_view what, int base = 10) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedRecord, fmt::format("bad {} '{}' in report", what, s));
  }
  return v;
}

double parse_double(std::string_view s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::MalformedRecord, fmt::format("bad threshold '{}' in report", s));
}

std::string header_line(const ReportMeta& m) {
  auto line = fmt::format("{} dataset={} threshold={} k={} seed={} shingle={:016x} verify={} parts={}-{}", kHeaderTag,
                          m.dataset, m.threshold, m.hasher.k, m.hasher.seed, m.hasher.shingle_fingerprint, m.verify,
                          m.part_start, m.part_end);
  if (m.merged) line += " merged=1";
  return line;
}

ReportMeta parse_header(std::string_view line) {
  ReportMeta m;
  std::istringstream in{std::string(line.substr(kHeaderTag.size()))};
  std::string field;
  while (in >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::MalformedRecord, "bad report header field " + field);
    const std::string_view key(field.data(), eq);
    const std::string_view value(field.data() + eq + 1, field.size() - eq - 1);
    if (key == "dataset") {
      m.dataset = value;
    } else if (key == "threshold") {
      m.threshold = parse_double(value);
    } else if (key == "k") {
      m.hasher.k = parse_number<std::uint32_t>(value, "k");
    } else if (key == "seed") {
      m.hasher.seed = parse_number<std::uint64_t>(value, "seed");
    } else if (key == "shingle") {
      m.hasher.shingle_fingerprint = parse_number<std::uint64_t>(value, "shingle fingerprint", 16);
    } else if (key == "verify") {
      m.verify = value;
    } else if (key == "parts") {
      const auto dash = value.find('-');
      if (dash == std::string_view::npos) throw Error(ErrorCode::MalformedRecord, "bad parts range in report");
      m.part_start = parse_number<std::uint32_t>(value.substr(0, dash), "part");
      m.part_end = parse_number<std::uint32_t>(value.substr(dash + 1), "part");
    } else if (key == "merged") {
      m.merged = value == "1";
    }
  }
  return m;
}

void append_line(std::string& out, DocId test_id, const std::set<DocId>& ids) {
  out += fmt::format("{}\t{{{}}}\n", test_id, fmt::join(ids, ", "));
}

std::pair<DocId, std::set<DocId>> parse_line(std::string_view line) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos || line.size() < tab + 3 || line[tab + 1] != '{' || line.back() != '}') {
    throw Error(ErrorCode::MalformedRecord, fmt::format("bad report line '{}'", line));
  }
  const DocId id = parse_number<DocId>(line.substr(0, tab), "test id");
  std::set<DocId> ids;
  std::string_view body = line.substr(tab + 2, line.size() - tab - 3);
  while (!body.empty()) {
    const auto comma = body.find(',');
    auto item = body.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    ids.insert(parse_number<DocId>(item, "matched id"));
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
  }
  return {id, std::move(ids)};
}

}  // namespace

bool ReportMeta::same_job(const ReportMeta& other) const noexcept {
  return dataset == other.dataset && format_threshold(threshold) == format_threshold(other.threshold) &&
         hasher == other.hasher;
}

PartMatches DedupReport::merged() const {
  PartMatches out;
  for (const auto& [part, entries] : parts) {
    for (const auto& [test_id, ids] : entries) out[test_id].insert(ids.begin(), ids.end());
  }
  return out;
}

std::string DedupReport::serialize() const {
  std::string out;
  if (meta) out += header_line(*meta) + "\n";
  for (const auto& [part, entries] : parts) {
    for (const auto& [test_id, ids] : entries) append_line(out, test_id, ids);
  }
  return out;
}

std::string DedupReport::canonical() const {
  std::string out;
  for (const auto& [test_id, ids] : merged()) append_line(out, test_id, ids);
  return out;
}

DedupReport DedupReport::parse(std::string_view text) {
  DedupReport report;
  std::vector<PartMatches> blocks;
  bool have_prev = false;
  DocId prev = 0;
  std::size_t pos = 0;
  bool first_line = true;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.starts_with('#')) {
      if (first_line && line.starts_with(kHeaderTag)) report.meta = parse_header(line);
      first_line = false;
      continue;
    }
    first_line = false;
    auto [id, ids] = parse_line(line);
    // Lines run part by part with ascending ids, so a non-increasing id opens
    // the next part's block.
    if (!have_prev || id <= prev) blocks.emplace_back();
    have_prev = true;
    prev = id;
    blocks.back().emplace(id, std::move(ids));
  }

  std::uint32_t first_part = 0;
  if (report.meta) {
    const auto& m = *report.meta;
    const std::size_t expected = m.merged ? 1 : m.part_end - m.part_start;
    if (m.part_end < m.part_start || (!blocks.empty() && blocks.size() != expected)) {
      throw Error(ErrorCode::MalformedRecord,
                  fmt::format("report has {} part blocks, header announces {}", blocks.size(), expected));
    }
    first_part = m.part_start;
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    report.parts.emplace(first_part + static_cast<std::uint32_t>(i), std::move(blocks[i]));
  }
  return report;
}

DedupReport DedupReport::load(const std::filesystem::path& path) { return parse(read_file(path)); }

void DedupReport::save(const std::filesystem::path& path) const { write_file_atomic(path, serialize()); }

DedupReport merge_reports(std::span<const DedupReport> reports) {
  DedupReport out;
  for (const auto& r : reports) {
    if (!r.meta) continue;
    if (!out.meta) {
      out.meta = r.meta;
      continue;
    }
    auto& m = *out.meta;
    if (!m.same_job(*r.meta)) {
      throw Error(ErrorCode::JobMismatch,
                  fmt::format("cannot merge reports of different jobs ({} t={} vs {} t={})", m.dataset,
                              format_threshold(m.threshold), r.meta->dataset, format_threshold(r.meta->threshold)));
    }
    if (m.verify != r.meta->verify) m.verify = "mixed";
    m.part_start = std::min(m.part_start, r.meta->part_start);
    m.part_end = std::max(m.part_end, r.meta->part_end);
  }
  const std::uint32_t key = out.meta ? out.meta->part_start : 0;
  if (out.meta) out.meta->merged = true;
  auto& block = out.parts[key];
  for (const auto& r : reports) {
    for (auto& [test_id, ids] : r.merged()) block[test_id].insert(ids.begin(), ids.end());
  }
  if (block.empty()) out.parts.clear();
  return out;
}

std::vector<DocId> removal_list(const DedupReport& report) {
  std::vector<DocId> out;
  for (const auto& [test_id, ids] : report.merged()) {
    if (!ids.empty()) out.push_back(test_id);
  }
  return out;
}

}  // namespace corpusdedup
