#include "corpusdedup/service.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "corpusdedup/codec.hpp"
#include "corpusdedup/error.hpp"

namespace corpusdedup {

using nlohmann::json;

namespace {

constexpr std::size_t kPreviewChars = 500;
constexpr std::size_t kPayloadCeiling = std::size_t{64} << 20;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
  return s;
}

std::size_t parse_size(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(std::string(value), &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, fmt::format("{} expects a number, got '{}'", key, value));
}

// First `n` code points of valid UTF-8.
std::string utf8_prefix(std::string_view text, std::size_t n) {
  std::size_t i = 0;
  for (std::size_t count = 0; i < text.size() && count < n; ++count) {
    const auto c = static_cast<unsigned char>(text[i]);
    i += c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
  }
  return std::string(text.substr(0, std::min(i, text.size())));
}

HttpResponse error_response(int status, std::string_view message) {
  return {status, json{{"error", message}}.dump()};
}

std::vector<std::filesystem::path> resolve_manifests(const std::string& name, const std::string& value) {
  std::vector<std::filesystem::path> out;
  std::stringstream items(value);
  std::string item;
  while (std::getline(items, item, ',')) {
    const std::filesystem::path p(trim(item));
    if (p.empty()) continue;
    if (std::filesystem::is_directory(p)) {
      const std::string prefix = name + ".t";
      for (const auto& e : std::filesystem::directory_iterator(p)) {
        const auto file = e.path().filename().string();
        if (file.starts_with(prefix) && file.ends_with(".manifest.json")) out.push_back(e.path());
      }
    } else {
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(ErrorCode::ManifestMismatch, fmt::format("dataset {} has no index manifests", name));
  return out;
}

}  // namespace

// ---- config ----------------------------------------------------------------

void ServiceConfig::set_listen(std::string_view host_port) {
  const auto colon = host_port.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("listen address '{}' is not host:port", host_port));
  }
  const auto p = parse_size("listen port", host_port.substr(colon + 1));
  if (p > 65535) throw Error(ErrorCode::InvalidArgument, fmt::format("port {} out of range", p));
  host = std::string(host_port.substr(0, colon));
  port = static_cast<int>(p);
}

ServiceConfig ServiceConfig::parse(std::string_view text) {
  ServiceConfig c;
  std::stringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("config line {}: expected key=value", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "listen") {
      c.set_listen(value);
    } else if (key.starts_with("dataset.") && key.size() > 8) {
      c.datasets[std::string(key.substr(8))] = value;
    } else if (key.starts_with("store.") && key.size() > 6) {
      c.stores[std::string(key.substr(6))] = value;
    } else if (key == "max_document_bytes") {
      c.max_document_bytes = parse_size(key, value);
    } else if (key == "request_timeout_seconds") {
      c.request_timeout_seconds = static_cast<int>(parse_size(key, value));
    } else if (key == "static_dir") {
      c.static_dir = value;
    } else if (key == "worker_threads") {
      c.worker_threads = std::max<std::size_t>(1, parse_size(key, value));
    } else if (key == "access_log") {
      if (value != "on" && value != "off") {
        throw Error(ErrorCode::InvalidArgument, fmt::format("config line {}: access_log must be on or off", line_no));
      }
      c.access_log = value == "on";
    } else {
      throw Error(ErrorCode::InvalidArgument, fmt::format("config line {}: unknown key '{}'", line_no, key));
    }
  }
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  auto c = parse(read_file(path));
  c.source = path;
  return c;
}

void ServiceConfig::apply_environment() {
  if (const char* listen = std::getenv("CORPUSDEDUP_LISTEN"); listen != nullptr && *listen != '\0') {
    set_listen(listen);
  }
}

// ---- snapshot --------------------------------------------------------------

struct DedupService::Snapshot {
  struct Threshold {
    IndexManifest manifest;
    std::vector<IndexSet> parts;  // one loaded part each
  };
  struct Dataset {
    std::map<std::string, Threshold> thresholds;  // keyed by format_threshold
    std::shared_ptr<const CorpusStore> store;
  };
  std::map<std::string, Dataset> datasets;
  std::size_t shard_count = 0;
};

struct DedupService::Server {
  httplib::Server http;
};

DedupService::DedupService(ServiceConfig config)
    : config_(std::move(config)), started_(std::chrono::steady_clock::now()) {}

DedupService::~DedupService() {
  stop();
  if (loader_ && loader_->joinable()) loader_->join();
}

std::shared_ptr<const DedupService::Snapshot> DedupService::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

std::shared_ptr<const DedupService::Snapshot> DedupService::build_snapshot(const ServiceConfig& config,
                                                                           bool count_progress) {
  auto snap = std::make_shared<Snapshot>();
  for (const auto& [name, value] : config.datasets) {
    Snapshot::Dataset ds;
    std::string store_path;
    for (const auto& path : resolve_manifests(name, value)) {
      Snapshot::Threshold t;
      t.manifest = IndexManifest::load(path);
      if (t.manifest.dataset != name) {
        throw Error(ErrorCode::ManifestMismatch,
                    fmt::format("{} belongs to dataset {}, configured as {}", path.string(), t.manifest.dataset, name));
      }
      if (store_path.empty()) store_path = t.manifest.store;
      for (std::uint32_t p = 0; p < t.manifest.part_count; ++p) {
        t.parts.push_back(IndexSet::open(path, p, p + 1));
        ++snap->shard_count;
        if (count_progress) ++loaded_shards_;
      }
      ds.thresholds[format_threshold(t.manifest.threshold)] = std::move(t);
    }
    if (const auto it = config.stores.find(name); it != config.stores.end()) store_path = it->second.string();
    if (!store_path.empty()) ds.store = std::make_shared<const CorpusStore>(CorpusStore::load(store_path));
    snap->datasets.emplace(name, std::move(ds));
  }
  return snap;
}

void DedupService::start_loading() {
  loading_ = true;
  loaded_shards_ = 0;
  loader_ = std::make_unique<std::thread>([this] {
    try {
      auto snap = build_snapshot(config_, true);
      std::lock_guard lock(mutex_);
      loaded_shards_ = snap->shard_count;
      snapshot_ = std::move(snap);
    } catch (const std::exception& e) {
      std::lock_guard lock(mutex_);
      load_error_ = e.what();
      std::cerr << "corpusdedup-serve: loading failed: " << e.what() << '\n';
    }
    loading_ = false;
  });
}

void DedupService::wait_loaded() {
  if (loader_ && loader_->joinable()) loader_->join();
}

void DedupService::reload() {
  ServiceConfig next = config_;
  if (!config_.source.empty()) {
    const auto fresh = ServiceConfig::load(config_.source);
    next.datasets = fresh.datasets;
    next.stores = fresh.stores;
  }
  auto snap = build_snapshot(next, false);
  std::lock_guard lock(mutex_);
  config_.datasets = next.datasets;
  config_.stores = next.stores;
  loaded_shards_ = snap->shard_count;
  snapshot_ = std::move(snap);
  load_error_.clear();
}

std::size_t DedupService::unload(std::string_view name) {
  std::lock_guard lock(mutex_);
  if (!snapshot_) return 0;
  auto next = std::make_shared<Snapshot>(*snapshot_);
  std::size_t released = 0;
  for (auto it = next->datasets.begin(); it != next->datasets.end();) {
    if (name.empty() || it->first == name) {
      for (const auto& [key, t] : it->second.thresholds) released += t.parts.size();
      it = next->datasets.erase(it);
    } else {
      ++it;
    }
  }
  next->shard_count -= released;
  loaded_shards_ = next->shard_count;
  snapshot_ = std::move(next);
  return released;
}

// ---- handlers --------------------------------------------------------------

HttpResponse DedupService::check(std::string_view body) const {
  const auto start = std::chrono::steady_clock::now();
  const auto snap = snapshot();
  if (!snap) {
    return loading_ ? error_response(503, "indexes are still loading") : error_response(503, "no indexes loaded");
  }
  if (body.size() > config_.max_document_bytes + 4096) return error_response(400, "request body too large");
  if (!is_valid_utf8(body)) return error_response(422, "request body is not valid UTF-8");

  const json req = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (!req.is_object()) return error_response(400, "request body must be a JSON object");
  if (!req.contains("text") || !req["text"].is_string()) return error_response(400, "missing string field 'text'");
  if (!req.contains("dataset") || !req["dataset"].is_string()) {
    return error_response(400, "missing string field 'dataset'");
  }
  const auto& text = req["text"].get_ref<const std::string&>();
  if (text.size() > config_.max_document_bytes) {
    return error_response(400, fmt::format("text exceeds {} bytes", config_.max_document_bytes));
  }
  const auto& dataset = req["dataset"].get_ref<const std::string&>();
  const auto ds = snap->datasets.find(dataset);
  if (ds == snap->datasets.end()) return error_response(400, fmt::format("unknown dataset '{}'", dataset));

  double threshold = 0.0;
  if (req.contains("threshold") && req["threshold"].is_number()) {
    threshold = req["threshold"].get<double>();
  } else if (req.contains("threshold") && req["threshold"].is_string()) {
    try {
      threshold = std::stod(req["threshold"].get<std::string>());
    } catch (const std::exception&) {
      return error_response(400, "threshold is not a number");
    }
  } else {
    return error_response(400, "missing field 'threshold'");
  }
  const auto th = ds->second.thresholds.find(format_threshold(threshold));
  if (th == ds->second.thresholds.end()) {
    return error_response(400, fmt::format("dataset '{}' has no index at threshold {}", dataset,
                                           format_threshold(threshold)));
  }

  VerifyMode mode = VerifyMode::signature;
  if (req.contains("verify") && !req["verify"].is_null()) {
    if (!req["verify"].is_string()) return error_response(400, "verify must be a string");
    try {
      mode = parse_verify_mode(req["verify"].get<std::string>());
    } catch (const Error& e) {
      return error_response(400, e.what());
    }
  }
  const CorpusStore* store = ds->second.store.get();
  if (mode == VerifyMode::exact && store == nullptr) {
    return error_response(400, fmt::format("dataset '{}' has no corpus store for exact verification", dataset));
  }

  const auto& parts = th->second.parts;
  if (mode == VerifyMode::signature) {
    for (const auto& set : parts) {
      if (!set.parts().front().signatures) {
        return error_response(400, fmt::format("dataset '{}' at threshold {} has no signature sidecars", dataset,
                                               format_threshold(threshold)));
      }
    }
  }
  std::vector<ScoredMatch> matches;
  std::uint32_t consulted = 0;
  try {
    const Probe probe = parts.front().probe(text);
    for (const auto& set : parts) {
      const auto found = set.match(set.parts().front(), probe, mode, store);
      matches.insert(matches.end(), found.begin(), found.end());
      ++consulted;
    }
  } catch (const Error& e) {
    return error_response(500, e.what());
  }
  std::sort(matches.begin(), matches.end(), [](const ScoredMatch& a, const ScoredMatch& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.id < b.id;
  });

  json out_matches = json::array();
  for (const auto& m : matches) {
    json row{{"id", m.id}};
    row["similarity"] = m.similarity >= 0.0 ? json(m.similarity) : json(nullptr);
    const Document* doc = store != nullptr ? store->find(m.id) : nullptr;
    if (doc != nullptr) {
      row["provenance"] = {{"project", doc->provenance.project},
                           {"file_path", doc->provenance.file_path},
                           {"start_line", doc->provenance.start_line},
                           {"end_line", doc->provenance.end_line}};
      row["preview"] = utf8_prefix(doc->text, kPreviewChars);
    } else {
      row["provenance"] = nullptr;
      row["preview"] = "";
    }
    out_matches.push_back(std::move(row));
  }
  const double elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const json res{{"dataset", dataset},
                 {"threshold", th->second.manifest.threshold},
                 {"verify", to_string(mode)},
                 {"parts_consulted", consulted},
                 {"elapsed_ms", elapsed},
                 {"matches", std::move(out_matches)}};
  return {200, res.dump()};
}

HttpResponse DedupService::datasets() const {
  json list = json::array();
  if (const auto snap = snapshot()) {
    for (const auto& [name, ds] : snap->datasets) {
      json thresholds = json::array();
      std::uint64_t docs = 0;
      std::uint32_t parts = 0;
      for (const auto& [key, t] : ds.thresholds) {
        thresholds.push_back(t.manifest.threshold);
        docs = std::max(docs, t.manifest.document_count);
        parts = std::max(parts, t.manifest.part_count);
      }
      list.push_back({{"name", name}, {"thresholds", thresholds}, {"doc_count", docs}, {"part_count", parts}});
    }
  }
  return {200, list.dump()};
}

HttpResponse DedupService::health() const {
  std::string status = "ok";
  {
    std::lock_guard lock(mutex_);
    if (loading_) {
      status = "loading";
    } else if (!snapshot_ && !load_error_.empty()) {
      status = "error";
    }
  }
  const double uptime = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  return {200, json{{"status", status}, {"loaded_shards", loaded_shards_.load()}, {"uptime_seconds", uptime}}.dump()};
}

// ---- HTTP ------------------------------------------------------------------

int DedupService::bind() {
  server_ = std::make_unique<Server>();
  auto& http = server_->http;
  const auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };

  // Keep-alive connections hold a worker each, so the pool must exceed the
  // expected number of concurrent clients.
  http.new_task_queue = [n = config_.worker_threads] { return new httplib::ThreadPool(n); };
  http.set_keep_alive_max_count(1000);
  http.set_payload_max_length(std::max(kPayloadCeiling, config_.max_document_bytes * 2));
  http.set_read_timeout(config_.request_timeout_seconds, 0);
  http.set_write_timeout(config_.request_timeout_seconds, 0);
  if (config_.access_log) {
    http.set_logger([](const httplib::Request& req, const httplib::Response& res) {
      static std::mutex log_mutex;
      const auto line = fmt::format("{} \"{} {}\" {} {}\n", req.remote_addr, req.method, req.path, res.status,
                                    res.body.size());
      std::lock_guard lock(log_mutex);
      std::cout << line << std::flush;
    });
  }

  http.Post("/api/check", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, check(req.body));
  });
  http.Get("/api/datasets", [this, send](const httplib::Request&, httplib::Response& res) { send(res, datasets()); });
  http.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  http.Post("/api/admin/reload", [this, send](const httplib::Request&, httplib::Response& res) {
    try {
      reload();
      send(res, {200, json{{"status", "ok"}, {"loaded_shards", loaded_shards()}}.dump()});
    } catch (const std::exception& e) {
      send(res, error_response(500, e.what()));
    }
  });
  http.Post("/api/admin/unload", [this, send](const httplib::Request& req, httplib::Response& res) {
    const auto released = unload(req.has_param("dataset") ? req.get_param_value("dataset") : std::string());
    send(res, {200, json{{"released", released}, {"loaded_shards", loaded_shards()}}.dump()});
  });

  if (!config_.static_dir.empty() && !http.set_mount_point("/", config_.static_dir.string())) {
    throw Error(ErrorCode::IoFailure, fmt::format("static_dir {} does not exist", config_.static_dir.string()));
  }

  const int port = config_.port == 0 ? http.bind_to_any_port(config_.host)
                                     : (http.bind_to_port(config_.host, config_.port) ? config_.port : -1);
  if (port < 0) {
    throw Error(ErrorCode::IoFailure, fmt::format("cannot listen on {}:{}", config_.host, config_.port));
  }
  return port;
}

void DedupService::serve() {
  if (server_) server_->http.listen_after_bind();
}

void DedupService::stop() {
  if (server_) server_->http.stop();
}

}  // namespace corpusdedup
