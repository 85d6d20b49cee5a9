#include <algorithm>
#include <unordered_map>

#include <fmt/format.h>

#include "../common/parallel.hpp"
#include "corpusdedup/dedup.hpp"
#include "corpusdedup/error.hpp"

namespace corpusdedup {

std::string ThresholdSweep::to_text() const {
  std::string out = fmt::format("# verify={}\nthreshold\tcount\n", verification);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    out += fmt::format("{}\t{}\n", format_threshold(thresholds[i]), counts[i]);
  }
  return out;
}

ThresholdSweep threshold_sweep(std::span<const TestDoc> tests, const CorpusStore& corpus,
                               const SweepOptions& options) {
  const auto& ts = options.thresholds;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0.0 && ts[i] < 1.0) || (i > 0 && !(ts[i] > ts[i - 1]))) {
      throw Error(ErrorCode::InvalidThreshold, "sweep thresholds must be strictly increasing within (0, 1)");
    }
  }
  const MinHasher hasher = make_hasher(options.k, options.seed);
  const HasherMeta meta{static_cast<std::uint32_t>(options.k), options.seed, options.shingle.fingerprint()};

  const auto docs = corpus.documents();
  std::vector<ShingleSet> doc_sets(docs.size());
  std::vector<MinHashSignature> doc_sigs(docs.size());
  detail::parallel_for(docs.size(), options.threads, [&](std::size_t i) {
    doc_sets[i] = shingle(docs[i].text, options.shingle);
    doc_sigs[i] = hasher.signature(doc_sets[i]);
  });
  std::unordered_map<DocId, std::size_t> ordinal;
  for (std::size_t i = 0; i < docs.size(); ++i) ordinal.emplace(docs[i].id, i);

  std::vector<LshIndexShard> shards;
  for (const double t : ts) {
    ShardBuilder builder(meta, optimal_bands(t, options.k), PartInfo{});
    for (std::size_t i = 0; i < docs.size(); ++i) builder.add(docs[i].id, doc_sigs[i]);
    shards.push_back(std::move(builder).build());
  }

  // Candidate generation is shared by every threshold so that only the
  // verification cut-off varies across the sweep.
  struct Scored {
    DocId id;
    double jaccard;
  };
  std::vector<std::vector<Scored>> scored(tests.size());
  detail::parallel_for(tests.size(), options.threads, [&](std::size_t i) {
    const ShingleSet set = shingle(tests[i].text, options.shingle);
    const MinHashSignature sig = hasher.signature(set);
    CandidateSet all;
    for (const auto& s : shards) {
      const auto c = s.query(sig, meta);
      all.insert(all.end(), c.begin(), c.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    for (const DocId id : all) scored[i].push_back({id, exact_jaccard(set, doc_sets[ordinal.at(id)])});
  });

  ThresholdSweep sweep;
  sweep.thresholds = ts;
  for (const double t : ts) {
    DedupReport report;
    report.meta = ReportMeta{"sweep", t, meta, "exact", 0, 1, true};
    auto& block = report.parts[0];
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < tests.size(); ++i) {
      auto& set = block[tests[i].id];
      for (const auto& s : scored[i]) {
        if (s.jaccard >= t) set.insert(s.id);
      }
      if (!set.empty()) ++count;
    }
    sweep.counts.push_back(count);
    sweep.reports.push_back(std::move(report));
  }
  return sweep;
}

}  // namespace corpusdedup
