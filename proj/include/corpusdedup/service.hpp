#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "corpusdedup/dedup.hpp"

namespace corpusdedup {

/// Service configuration, read from `key=value` lines (`#` starts a comment):
///
///   listen=127.0.0.1:8080
///   dataset.<name>=<manifest file | directory | comma-separated manifests>
///   store.<name>=<corpus store dir>      (defaults to the manifest's store)
///   max_document_bytes=1048576
///   request_timeout_seconds=30
///   static_dir=<built UI bundle>
///   access_log=on|off                    (one line per request on stdout)
///   worker_threads=32                    (concurrent connections served)
///
/// A dataset given as a directory picks up every `<name>.t*.manifest.json` in
/// it, so a reload sees newly built thresholds.
struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::map<std::string, std::string> datasets;
  std::map<std::string, std::filesystem::path> stores;
  std::size_t max_document_bytes = 1 << 20;
  int request_timeout_seconds = 30;
  std::filesystem::path static_dir;
  bool access_log = true;
  std::size_t worker_threads = 32;
  std::filesystem::path source;  // config file, re-read on reload

  /// Throws Error{InvalidArgument}.
  static ServiceConfig parse(std::string_view text);
  /// Throws Error{IoFailure}, Error{InvalidArgument}.
  static ServiceConfig load(const std::filesystem::path& path);
  /// Applies CORPUSDEDUP_LISTEN (host:port) when set.
  void apply_environment();
  /// Throws Error{InvalidArgument} for anything but host:port.
  void set_listen(std::string_view host_port);
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Duplicate checker behind the HTTP API. All index state lives in an
/// immutable snapshot; reload builds a new snapshot and swaps it in whole, so
/// requests see either the old or the new set of indexes.
class DedupService {
 public:
  explicit DedupService(ServiceConfig config);
  ~DedupService();

  DedupService(const DedupService&) = delete;
  DedupService& operator=(const DedupService&) = delete;

  /// Loads indexes on a background thread; /api/check answers 503 until done.
  void start_loading();
  /// Blocks until the initial load has finished.
  void wait_loaded();
  /// Re-reads the config file (if any) and manifests, then swaps. Throws on
  /// failure and keeps the previous snapshot.
  void reload();
  /// Drops one dataset (all datasets when name is empty). Returns the number
  /// of shards released.
  std::size_t unload(std::string_view name);

  bool loading() const noexcept { return loading_.load(); }
  std::size_t loaded_shards() const noexcept { return loaded_shards_.load(); }

  HttpResponse check(std::string_view body) const;
  HttpResponse datasets() const;
  HttpResponse health() const;

  /// Binds the listen address (port 0 picks a free port) and returns the port.
  /// Throws Error{IoFailure}.
  int bind();
  /// Serves until stop(); call after bind().
  void serve();
  void stop();

 private:
  struct Snapshot;
  struct Server;

  std::shared_ptr<const Snapshot> snapshot() const;
  std::shared_ptr<const Snapshot> build_snapshot(const ServiceConfig& config, bool count_progress);

  ServiceConfig config_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::atomic<bool> loading_{false};
  std::atomic<std::size_t> loaded_shards_{0};
  std::string load_error_;
  std::unique_ptr<Server> server_;
  std::unique_ptr<std::thread> loader_;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace corpusdedup
