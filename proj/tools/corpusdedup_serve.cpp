// corpusdedup-serve: HTTP duplicate checker and UI host.

#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "corpusdedup/error.hpp"
#include "corpusdedup/service.hpp"

using namespace corpusdedup;

int main(int argc, char** argv) {
  CLI::App app{"HTTP service for online duplicate checks"};
  std::string config_path, listen, static_dir;
  std::vector<std::string> datasets, stores;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--listen", listen, "host:port (overrides config and CORPUSDEDUP_LISTEN)");
  app.add_option("--dataset", datasets, "name=manifest|dir, repeatable");
  app.add_option("--store", stores, "name=store dir, repeatable");
  app.add_option("--static-dir", static_dir, "Directory served at /");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  // SIGHUP reloads, SIGINT/SIGTERM stop; handled on a dedicated thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGHUP);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    ServiceConfig config = config_path.empty() ? ServiceConfig{} : ServiceConfig::load(config_path);
    config.apply_environment();
    if (!listen.empty()) config.set_listen(listen);
    if (!static_dir.empty()) config.static_dir = static_dir;
    for (const auto* list : {&datasets, &stores}) {
      for (const auto& item : *list) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "expected name=path, got " + item);
        if (list == &datasets) config.datasets[item.substr(0, eq)] = item.substr(eq + 1);
        else config.stores[item.substr(0, eq)] = item.substr(eq + 1);
      }
    }

    DedupService service(config);
    const int port = service.bind();
    std::cout << "listening on " << config.host << ':' << port << std::endl;
    service.start_loading();

    std::thread waiter([&] {
      for (;;) {
        int sig = 0;
        sigwait(&signals, &sig);
        if (sig == SIGHUP) {
          try {
            service.reload();
            std::cout << "reloaded, " << service.loaded_shards() << " shards" << std::endl;
          } catch (const std::exception& e) {
            std::cerr << "reload failed: " << e.what() << std::endl;
          }
        } else {
          service.stop();
          return;
        }
      }
    });
    service.serve();
    waiter.join();
  } catch (const Error& e) {
    std::cerr << "corpusdedup-serve: " << e.what() << '\n';
    return e.code() == ErrorCode::IoFailure ? 4 : e.code() == ErrorCode::InvalidArgument ? 2 : 3;
  }
  return 0;
}
