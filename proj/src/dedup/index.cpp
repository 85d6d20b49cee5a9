#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "../common/parallel.hpp"
#include "corpusdedup/codec.hpp"
#include "corpusdedup/dedup.hpp"
#include "corpusdedup/error.hpp"

namespace corpusdedup {

using nlohmann::json;

std::string_view to_string(VerifyMode mode) noexcept {
  switch (mode) {
    case VerifyMode::none: return "none";
    case VerifyMode::signature: return "signature";
    case VerifyMode::exact: return "exact";
  }
  return "signature";
}

VerifyMode parse_verify_mode(std::string_view name) {
  if (name == "none") return VerifyMode::none;
  if (name == "signature") return VerifyMode::signature;
  if (name == "exact") return VerifyMode::exact;
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown verification mode '{}'", name));
}

std::string format_threshold(double threshold) { return fmt::format("{:.2f}", threshold); }

std::string manifest_filename(std::string_view dataset, double threshold) {
  return fmt::format("{}.t{}.manifest.json", dataset, format_threshold(threshold));
}

std::string shard_filename(std::string_view dataset, double threshold, std::uint32_t part, std::uint32_t parts) {
  return fmt::format("{}.t{}.part{}of{}.lsh", dataset, format_threshold(threshold), part, parts);
}

std::pair<std::uint64_t, std::uint64_t> part_range(std::uint64_t n, std::uint32_t part, std::uint32_t parts) noexcept {
  const std::uint64_t per = parts == 0 ? n : (n + parts - 1) / parts;
  const std::uint64_t begin = std::min(n, per * part);
  return {begin, std::min(n, begin + per)};
}

std::uint64_t IndexManifest::indexed_count() const noexcept {
  std::uint64_t n = 0;
  for (const auto& p : parts) n += p.doc_count;
  return n;
}

std::string IndexManifest::to_json() const {
  json j;
  j["format_version"] = 1;
  j["dataset"] = dataset;
  j["threshold"] = threshold;
  j["plan"] = {{"bands", plan.bands}, {"rows", plan.rows}};
  j["hasher"] = {{"k", hasher.k}, {"seed", hasher.seed},
                 {"shingle_fingerprint", fmt::format("{:016x}", hasher.shingle_fingerprint)}};
  j["shingle"] = {{"unit", "word_token"}, {"n", shingle.n}, {"lowercase", shingle.lowercase}, {"seed", shingle.seed}};
  j["part_count"] = part_count;
  j["document_count"] = document_count;
  j["store"] = store;
  j["parts"] = json::array();
  for (const auto& p : parts) {
    j["parts"].push_back({{"index", p.index},
                          {"begin", p.begin},
                          {"end", p.end},
                          {"doc_count", p.doc_count},
                          {"shard", p.shard_file},
                          {"signatures", p.signature_file}});
  }
  return j.dump(2) + "\n";
}

IndexManifest IndexManifest::from_json(std::string_view text) {
  const json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw Error(ErrorCode::MalformedRecord, "index manifest is not valid JSON");
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw Error(ErrorCode::FormatVersionMismatch, "unsupported index manifest version");
    }
    IndexManifest m;
    m.dataset = j.at("dataset").get<std::string>();
    m.threshold = j.at("threshold").get<double>();
    m.plan = {j.at("plan").at("bands").get<std::uint32_t>(), j.at("plan").at("rows").get<std::uint32_t>(),
              m.threshold};
    m.hasher.k = j.at("hasher").at("k").get<std::uint32_t>();
    m.hasher.seed = j.at("hasher").at("seed").get<std::uint64_t>();
    m.hasher.shingle_fingerprint =
        std::stoull(j.at("hasher").at("shingle_fingerprint").get<std::string>(), nullptr, 16);
    m.shingle.n = j.at("shingle").at("n").get<std::size_t>();
    m.shingle.lowercase = j.at("shingle").at("lowercase").get<bool>();
    m.shingle.seed = j.at("shingle").at("seed").get<std::uint64_t>();
    m.part_count = j.at("part_count").get<std::uint32_t>();
    m.document_count = j.at("document_count").get<std::uint64_t>();
    m.store = j.value("store", "");
    for (const auto& p : j.at("parts")) {
      m.parts.push_back({p.at("index").get<std::uint32_t>(), p.at("begin").get<std::uint64_t>(),
                         p.at("end").get<std::uint64_t>(), p.at("doc_count").get<std::uint64_t>(),
                         p.at("shard").get<std::string>(), p.value("signatures", "")});
    }
    if (m.parts.size() != m.part_count) throw Error(ErrorCode::MalformedRecord, "manifest part list is incomplete");
    if (m.shingle.fingerprint() != m.hasher.shingle_fingerprint) {
      throw Error(ErrorCode::ManifestMismatch, "manifest shingle settings do not match their fingerprint");
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, fmt::format("index manifest: {}", e.what()));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::MalformedRecord, "index manifest: bad shingle fingerprint");
  }
}

IndexManifest IndexManifest::load(const std::filesystem::path& path) { return from_json(read_file(path)); }

IndexBuildResult build_corpus_indexes(const CorpusStore& corpus, const IndexBuildOptions& options,
                                      const std::filesystem::path& out_dir) {
  if (options.parts == 0) throw Error(ErrorCode::InvalidArgument, "part count must be at least 1");
  if (options.dataset.empty() || options.dataset.find_first_of("/\\") != std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("bad dataset name '{}'", options.dataset));
  }
  const MinHasher hasher = make_hasher(options.k, options.seed);
  const BandPlan plan = optimal_bands(options.threshold, options.k);
  const HasherMeta meta{static_cast<std::uint32_t>(options.k), options.seed, options.shingle.fingerprint()};

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));

  IndexManifest manifest;
  manifest.dataset = options.dataset;
  manifest.threshold = options.threshold;
  manifest.plan = plan;
  manifest.hasher = meta;
  manifest.shingle = options.shingle;
  manifest.part_count = options.parts;
  manifest.document_count = corpus.size();
  if (!options.store_path.empty()) manifest.store = std::filesystem::absolute(options.store_path).string();

  IndexBuildResult result;
  const auto docs = corpus.documents();
  for (std::uint32_t p = 0; p < options.parts; ++p) {
    const auto [begin, end] = part_range(docs.size(), p, options.parts);
    std::vector<std::pair<DocId, MinHashSignature>> sigs(end - begin);
    detail::parallel_for(sigs.size(), options.threads, [&](std::size_t i) {
      const auto& d = docs[begin + i];
      sigs[i] = {d.id, hasher.signature(shingle(d.text, options.shingle))};
    });

    ShardBuilder builder(meta, plan, PartInfo{p, options.parts});
    for (const auto& [id, sig] : sigs) builder.add(id, sig);
    const LshIndexShard shard = std::move(builder).build();

    IndexManifest::Part part{p, begin, end, shard.doc_count(),
                             shard_filename(options.dataset, options.threshold, p, options.parts), ""};
    shard.save(out_dir / part.shard_file);
    if (options.write_signatures) {
      part.signature_file = part.shard_file + ".sig";
      SignatureSidecar::save(out_dir / part.signature_file, meta, std::move(sigs));
    }
    result.shards.push_back(out_dir / part.shard_file);
    manifest.parts.push_back(std::move(part));
  }
  result.manifest = out_dir / manifest_filename(options.dataset, options.threshold);
  write_file_atomic(result.manifest, manifest.to_json());
  return result;
}

std::filesystem::path find_manifest(const std::filesystem::path& dir, double threshold, std::string_view dataset) {
  if (std::filesystem::is_regular_file(dir)) return dir;
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::ManifestMismatch, fmt::format("no index directory {}", dir.string()));
  }
  if (!dataset.empty()) {
    auto p = dir / manifest_filename(dataset, threshold);
    if (!std::filesystem::exists(p)) {
      throw Error(ErrorCode::ManifestMismatch,
                  fmt::format("no index for dataset {} at threshold {} in {}", dataset,
                              format_threshold(threshold), dir.string()));
    }
    return p;
  }
  const std::string suffix = fmt::format(".t{}.manifest.json", format_threshold(threshold));
  std::vector<std::filesystem::path> found;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().filename().string().ends_with(suffix)) found.push_back(e.path());
  }
  if (found.empty()) {
    throw Error(ErrorCode::ManifestMismatch,
                fmt::format("no index at threshold {} in {}", format_threshold(threshold), dir.string()));
  }
  if (found.size() > 1) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("{} datasets at threshold {} in {}; name one", found.size(),
                            format_threshold(threshold), dir.string()));
  }
  return found.front();
}

}  // namespace corpusdedup
