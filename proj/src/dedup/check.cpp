#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "../common/parallel.hpp"
#include "corpusdedup/codec.hpp"
#include "corpusdedup/dedup.hpp"
#include "corpusdedup/error.hpp"

namespace corpusdedup {

std::vector<TestDoc> read_test_file(const std::filesystem::path& path, bool raw) {
  std::vector<TestDoc> out;
  if (raw && std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back({out.size(), read_file(f)});
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open test file " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (raw) {
      out.push_back({out.size(), line});
    } else if (!line.empty()) {
      Document d = parse_record(line);
      out.push_back({d.id, std::move(d.text)});
    }
  }
  return out;
}

IndexSet IndexSet::open(const std::filesystem::path& manifest_path) {
  const auto m = IndexManifest::load(manifest_path);
  return open(manifest_path, 0, m.part_count);
}

IndexSet IndexSet::open(const std::filesystem::path& manifest_path, std::uint32_t part_start,
                        std::uint32_t part_end) {
  IndexSet set;
  set.manifest_ = IndexManifest::load(manifest_path);
  const auto& m = set.manifest_;
  if (part_start > part_end || part_end > m.part_count) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("part range [{}, {}) outside the {} parts of {}", part_start, part_end, m.part_count,
                            manifest_path.string()));
  }
  set.hasher_ = make_hasher(m.hasher.k, m.hasher.seed);
  const auto dir = manifest_path.parent_path();
  for (std::uint32_t p = part_start; p < part_end; ++p) {
    const auto& info = m.parts.at(p);
    const auto shard_path = dir / info.shard_file;
    if (info.index != p || !std::filesystem::exists(shard_path)) {
      throw Error(ErrorCode::MissingPart, fmt::format("part {} missing: {}", p, shard_path.string()));
    }
    LoadedPart part{info, LshIndexShard::load(shard_path), std::nullopt};
    const auto& s = part.shard;
    if (!(s.hasher() == m.hasher) || s.plan().bands != m.plan.bands || s.plan().rows != m.plan.rows ||
        format_threshold(s.plan().threshold) != format_threshold(m.threshold) ||
        !(s.part() == PartInfo{p, m.part_count})) {
      throw Error(ErrorCode::ManifestMismatch, fmt::format("{} does not belong to this manifest", shard_path.string()));
    }
    if (!info.signature_file.empty() && std::filesystem::exists(dir / info.signature_file)) {
      part.signatures = SignatureSidecar::load(dir / info.signature_file);
      if (part.signatures->k() != m.hasher.k || part.signatures->seed() != m.hasher.seed) {
        throw Error(ErrorCode::ManifestMismatch, fmt::format("{} has a different hasher", info.signature_file));
      }
    }
    set.parts_.push_back(std::move(part));
  }
  return set;
}

Probe IndexSet::probe(std::string_view text) const {
  Probe p{shingle(text, manifest_.shingle), {}};
  p.signature = hasher_.signature(p.shingles);
  return p;
}

std::vector<ScoredMatch> IndexSet::match(const LoadedPart& part, const Probe& probe, VerifyMode mode,
                                         const CorpusStore* store) const {
  if (mode == VerifyMode::signature && !part.signatures) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("signature verification needs the sidecar of part {}", part.info.index));
  }
  if (mode == VerifyMode::exact && store == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "exact verification needs the corpus store");
  }
  const double t = manifest_.threshold;
  std::vector<ScoredMatch> out;
  for (const DocId id : part.shard.query(probe.signature, manifest_.hasher)) {
    double estimate = -1.0;
    if (part.signatures) {
      const auto mins = part.signatures->find(id);
      if (!mins.empty()) estimate = estimate_jaccard(probe.signature.mins, mins);
    }
    switch (mode) {
      case VerifyMode::none:
        out.push_back({id, estimate});
        break;
      case VerifyMode::signature:
        if (estimate >= t) out.push_back({id, estimate});
        break;
      case VerifyMode::exact: {
        const Document* doc = store->find(id);
        if (doc == nullptr) {
          throw Error(ErrorCode::ManifestMismatch, fmt::format("indexed document {} is not in the store", id));
        }
        const double j = exact_jaccard(probe.shingles, shingle(doc->text, manifest_.shingle));
        if (j >= t) out.push_back({id, j});
        break;
      }
    }
  }
  return out;
}

DedupReport dedup_documents(std::span<const TestDoc> tests, const DedupJob& job) {
  const auto manifest_path = find_manifest(job.lsh_dir, job.threshold, job.dataset);
  const IndexSet base = IndexSet::open(manifest_path, 0, 0);
  const auto& m = base.manifest();
  if (format_threshold(m.threshold) != format_threshold(job.threshold)) {
    throw Error(ErrorCode::ManifestMismatch,
                fmt::format("{} was built at threshold {}, job asks for {}", manifest_path.string(),
                            format_threshold(m.threshold), format_threshold(job.threshold)));
  }
  const std::uint32_t part_end = job.part_end.value_or(m.part_count);
  if (job.part_start >= part_end || part_end > m.part_count) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("part range [{}, {}) invalid for {} parts", job.part_start, part_end, m.part_count));
  }

  std::optional<CorpusStore> store;
  if (job.verify == VerifyMode::exact) {
    const std::filesystem::path store_path = job.store.empty() ? std::filesystem::path(m.store) : job.store;
    if (store_path.empty()) throw Error(ErrorCode::InvalidArgument, "exact verification needs --store");
    store = CorpusStore::load(store_path);
  }

  std::vector<DocId> ids;
  for (const auto& t : tests) ids.push_back(t.id);
  std::sort(ids.begin(), ids.end());
  if (const auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw Error(ErrorCode::DuplicateId, fmt::format("test id {} appears twice", *dup));
  }

  std::vector<Probe> probes(tests.size());
  detail::parallel_for(tests.size(), job.threads, [&](std::size_t i) { probes[i] = base.probe(tests[i].text); });

  DedupReport report;
  report.meta = ReportMeta{m.dataset, m.threshold, m.hasher, std::string(to_string(job.verify)), job.part_start,
                           part_end, false};
  // One shard resident at a time.
  for (std::uint32_t p = job.part_start; p < part_end; ++p) {
    const IndexSet one = IndexSet::open(manifest_path, p, p + 1);
    const auto& part = one.parts().front();
    std::vector<std::vector<ScoredMatch>> found(tests.size());
    detail::parallel_for(tests.size(), job.threads, [&](std::size_t i) {
      found[i] = one.match(part, probes[i], job.verify, store ? &*store : nullptr);
    });
    auto& block = report.parts[p];
    for (std::size_t i = 0; i < tests.size(); ++i) {
      auto& set = block[tests[i].id];
      for (const auto& match : found[i]) set.insert(match.id);
    }
  }
  if (!job.out.empty()) report.save(job.out);
  return report;
}

DedupReport dedup_testset(const DedupJob& job) {
  const auto tests = read_test_file(job.test_file, job.raw);
  return dedup_documents(tests, job);
}

}  // namespace corpusdedup
