// corpusdedup: corpus ingestion, index building, duplicate checking and
// token shard preparation.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "corpusdedup/bpe.hpp"
#include "corpusdedup/codec.hpp"
#include "corpusdedup/corpus.hpp"
#include "corpusdedup/dedup.hpp"
#include "corpusdedup/error.hpp"
#include "corpusdedup/token_shards.hpp"

namespace fs = std::filesystem;
using namespace corpusdedup;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoFailure: return kExitIo;
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidThreshold:
    case ErrorCode::InvalidK: return kExitUsage;
    default: return kExitData;
  }
}

CorpusStore open_or_create_store(const fs::path& dir) {
  if (fs::exists(dir / "meta")) return CorpusStore::load(dir);
  return {};
}

std::vector<double> parse_thresholds(const std::string& list) {
  std::vector<double> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("bad threshold '{}'", item));
    }
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-duplicate detection and dataset preparation for code corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "corpusdedup 1.0.0");
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Add Java project trees or thread dumps to a corpus store");
  std::string kind, input, store_dir;
  bool keep_markup = false, include_doc = false;
  ingest->add_option("--kind", kind, "java or threads")->required()->check(CLI::IsMember({"java", "threads"}));
  ingest->add_option("--input", input, "Directory of projects (java) or JSONL file (threads)")->required();
  ingest->add_option("--store", store_dir, "Corpus store directory (created or appended to)")->required();
  ingest->add_flag("--keep-markup", keep_markup, "Keep HTML tags in thread text");
  ingest->add_flag("--include-doc-comments", include_doc, "Prepend each method's /** */ comment to its text");

  // build-index
  auto* build = app.add_subcommand("build-index", "Build LSH shards over a corpus store");
  IndexBuildOptions bopt;
  std::string build_store, build_out;
  std::optional<double> build_threshold;
  build->add_option("--store", build_store, "Corpus store directory")->required();
  build->add_option("--threshold", build_threshold, "Jaccard threshold (default 0.70 code, 0.50 threads)");
  build->add_option("--parts", bopt.parts, "Number of parts")->capture_default_str()->check(CLI::PositiveNumber);
  build->add_option("--out", build_out, "Index directory")->required();
  build->add_option("--dataset", bopt.dataset, "Dataset name (default: store directory name)");
  build->add_option("--k", bopt.k, "MinHash permutations")->capture_default_str()->check(CLI::PositiveNumber);
  build->add_option("--seed", bopt.seed, "MinHash seed")->capture_default_str();
  build->add_option("--shingle-n", bopt.shingle.n, "Shingle width in tokens")->capture_default_str();
  build->add_flag("--lowercase", bopt.shingle.lowercase, "Lowercase shingles (ASCII)");
  bool no_sigs = false;
  build->add_flag("--no-signatures", no_sigs, "Skip the signature sidecars");

  // check
  auto* check = app.add_subcommand("check", "Check a test set against built shards");
  DedupJob job;
  std::string test_file, lsh_dir, verify = "signature", check_out, check_store;
  std::uint32_t partstart = 0;
  std::optional<std::uint32_t> partend;
  check->add_option("--test-file", test_file, "Test documents (store records, or raw with --raw)")->required();
  check->add_option("--lsh-dir", lsh_dir, "Index directory or manifest")->required();
  check->add_option("--threshold", job.threshold, "Threshold the index was built at")->capture_default_str();
  check->add_option("--partstart", partstart, "First part (inclusive)")->capture_default_str();
  check->add_option("--partend", partend, "Last part (exclusive; default all)");
  check->add_option("--verify", verify, "none, signature or exact")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "signature", "exact"}));
  check->add_option("--out", check_out, "Report file (default stdout)");
  check->add_option("--dataset", job.dataset, "Dataset, when the directory holds several");
  check->add_option("--store", check_store, "Corpus store for exact verification (default from manifest)");
  check->add_flag("--raw", job.raw, "Test file is raw text: a directory (one file per document) or one per line");

  // merge
  auto* merge = app.add_subcommand("merge", "Union per-part reports");
  std::vector<std::string> merge_in;
  std::string merge_out;
  merge->add_option("--in", merge_in, "Report files")->required();
  merge->add_option("--out", merge_out, "Merged report (default stdout)");

  // removal-list
  auto* removal = app.add_subcommand("removal-list", "Test ids with at least one match");
  std::string removal_report, removal_out;
  removal->add_option("--report", removal_report, "Report file")->required();
  removal->add_option("--out", removal_out, "Id list (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Count matched test documents across thresholds (exact verification)");
  SweepOptions sopt;
  std::string sweep_thresholds = "0.5,0.6,0.7,0.8", sweep_store, sweep_test, sweep_out, sweep_reports;
  bool sweep_raw = false;
  sweep->add_option("--thresholds", sweep_thresholds, "Comma-separated increasing thresholds")->capture_default_str();
  sweep->add_option("--store", sweep_store, "Corpus store directory")->required();
  sweep->add_option("--test-file", sweep_test, "Test documents")->required();
  sweep->add_flag("--raw", sweep_raw, "Test file is raw text");
  sweep->add_option("--out", sweep_out, "Count table (default stdout)");
  sweep->add_option("--reports-dir", sweep_reports, "Also write the merged report of each threshold here");
  sweep->add_option("--k", sopt.k, "MinHash permutations")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sopt.seed, "MinHash seed")->capture_default_str();
  sweep->add_option("--shingle-n", sopt.shingle.n, "Shingle width in tokens")->capture_default_str();
  sweep->add_flag("--lowercase", sopt.shingle.lowercase, "Lowercase shingles (ASCII)");

  // shards
  auto* shards = app.add_subcommand("shards", "Write train.bin/val.bin token shards");
  std::string shards_store, vocab_dir, exclude_file, shards_out, holdout_out;
  TokenShardOptions topt;
  shards->add_option("--store", shards_store, "Corpus store directory")->required();
  shards->add_option("--vocab", vocab_dir, "Directory with encoder.json/vocab.json and vocab.bpe/merges.txt")
      ->required();
  shards->add_option("--exclude", exclude_file, "Holdout id list (one id per line)");
  shards->add_option("--split", topt.split, "Validation fraction")->capture_default_str();
  shards->add_option("--seed", topt.seed, "Validation assignment seed")->capture_default_str();
  shards->add_option("--out", shards_out, "Output directory")->required();
  shards->add_option("--holdout-out", holdout_out, "Write the excluded documents here as a test file");

  // stats
  auto* stats = app.add_subcommand("stats", "Document/token counts and context-length coverage");
  std::string stats_store, stats_vocab;
  std::uint64_t context = 256;
  stats->add_option("--store", stats_store, "Corpus store directory")->required();
  stats->add_option("--vocab", stats_vocab, "Vocabulary directory")->required();
  stats->add_option("--context", context, "Context length in tokens")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest) {
      CorpusStore store = open_or_create_store(store_dir);
      if (kind == "java") {
        JavaIngestOptions opt;
        opt.include_doc_comment = include_doc;
        opt.threads = threads;
        const auto s = ingest_java_tree(input, store, opt);
        std::cout << fmt::format("files={} corrupt_files={} methods_found={} methods_kept={}\n", s.files,
                                 s.corrupt_files, s.methods_found, s.methods_kept);
      } else {
        std::ifstream in(input, std::ios::binary);
        if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + input);
        auto r = ingest_threads(in, ThreadOptions{!keep_markup});
        for (auto& d : r.documents) store.append(std::move(d));
        std::cout << fmt::format("threads={} skipped={}\n", r.documents.size(), r.skipped);
      }
      store.save(store_dir);
      std::cout << fmt::format("store={} documents={}\n", store_dir, store.size());
    } else if (*build) {
      const CorpusStore store = CorpusStore::load(build_store);
      if (bopt.dataset == "corpus" && build->count("--dataset") == 0) {
        bopt.dataset = fs::absolute(build_store).lexically_normal().filename().string();
        if (bopt.dataset.empty()) bopt.dataset = fs::absolute(build_store).parent_path().filename().string();
      }
      bopt.threshold = build_threshold.value_or(
          store.count(DocKind::discussion_thread) > store.count(DocKind::java_method) ? 0.5 : 0.7);
      bopt.write_signatures = !no_sigs;
      bopt.store_path = build_store;
      bopt.threads = threads;
      const auto r = build_corpus_indexes(store, bopt, build_out);
      for (const auto& s : r.shards) std::cout << s.string() << '\n';
      std::cout << r.manifest.string() << '\n';
    } else if (*check) {
      job.test_file = test_file;
      job.lsh_dir = lsh_dir;
      job.part_start = partstart;
      job.part_end = partend;
      job.verify = parse_verify_mode(verify);
      job.store = check_store;
      job.threads = threads;
      const auto report = dedup_testset(job);
      if (check_out.empty()) std::cout << report.serialize();
      else report.save(check_out);
    } else if (*merge) {
      std::vector<DedupReport> reports;
      for (const auto& p : merge_in) reports.push_back(DedupReport::load(p));
      write_output(merge_out, merge_reports(reports).serialize());
    } else if (*removal) {
      std::string text;
      for (const auto id : removal_list(DedupReport::load(removal_report))) text += fmt::format("{}\n", id);
      write_output(removal_out, text);
    } else if (*sweep) {
      sopt.thresholds = parse_thresholds(sweep_thresholds);
      sopt.threads = threads;
      const CorpusStore store = CorpusStore::load(sweep_store);
      const auto tests = read_test_file(sweep_test, sweep_raw);
      const auto result = threshold_sweep(tests, store, sopt);
      if (!sweep_reports.empty()) {
        fs::create_directories(sweep_reports);
        for (std::size_t i = 0; i < result.thresholds.size(); ++i) {
          result.reports[i].save(fs::path(sweep_reports) /
                                 fmt::format("sweep.t{}.report", format_threshold(result.thresholds[i])));
        }
      }
      write_output(sweep_out, result.to_text());
    } else if (*shards) {
      const CorpusStore store = CorpusStore::load(shards_store);
      const BpeVocab vocab = BpeVocab::load(vocab_dir);
      std::set<DocId> exclusion;
      if (!exclude_file.empty()) {
        exclusion = read_id_list(fs::path(exclude_file));
        const auto split = extract_holdout(store, exclusion);
        if (!holdout_out.empty()) {
          std::string text;
          for (const auto& d : split.holdout) text += format_record(d) + "\n";
          write_file_atomic(holdout_out, text);
        }
      }
      topt.threads = threads;
      const auto m = write_token_shards(store.documents(), vocab, exclusion, topt, shards_out);
      std::cout << m.to_text();
    } else if (*stats) {
      const CorpusStore store = CorpusStore::load(stats_store);
      const BpeVocab vocab = BpeVocab::load(stats_vocab);
      const auto s = corpus_stats(store.documents(), vocab, context, threads);
      std::cout << fmt::format("documents={}\njava_method={}\ndiscussion_thread={}\ntokens={}\ncontext={}\n"
                               "within_context={}\ncoverage={:.6f}\n",
                               s.document_count, store.count(DocKind::java_method),
                               store.count(DocKind::discussion_thread), s.token_count, s.context, s.within_context,
                               s.coverage());
    }
  } catch (const Error& e) {
    std::cerr << "corpusdedup: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "corpusdedup: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "corpusdedup: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
