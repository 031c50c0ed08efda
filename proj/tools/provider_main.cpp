// provider serve --config FILE [--host H] [--port N]
// provider ask [--config FILE] 'verb=...'

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "oai/provider.hpp"

namespace {

oai::provider::ProviderSettings fixture_settings() {
  return {oai::provider::ProviderConfig{
              oai::RepositoryDescription("Example repository", "http://localhost/oai1", {"admin@localhost"}),
              100,
              {},
              {},
              std::chrono::minutes{0}},
          "fixture"};
}

oai::provider::HttpFrontend* g_frontend = nullptr;

void on_signal(int) {
  if (g_frontend) g_frontend->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metadata harvesting protocol 1.0 data provider"};
  app.require_subcommand(1);

  std::string config_path;
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve over HTTP");
  serve->add_option("-c,--config", config_path, "Provider config file")->required()->check(CLI::ExistingFile);
  serve->add_option("--host", host, "Listen address");
  serve->add_option("-p,--port", port, "Listen port (0 picks one)");

  std::string raw;
  auto* ask = app.add_subcommand("ask", "Answer one request and print it CGI-style");
  ask->add_option("-c,--config", config_path, "Provider config file (default: built-in fixture)")
      ->check(CLI::ExistingFile);
  ask->add_option("request", raw, "urlencoded request, e.g. verb=Identify");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto settings = config_path.empty() ? fixture_settings() : oai::provider::load_provider_config(config_path);
    oai::provider::Provider provider(settings.config, oai::provider::open_store(settings));
    oai::SystemClock clock;

    if (*ask) {
      const auto res = provider.handle("127.0.0.1", oai::HttpMethod::Get, raw, clock.now());
      if (res.status != 200) std::cout << "Status: " << res.status << ' ' << oai::reason_phrase(res.status) << '\n';
      for (const auto& [key, value] : res.headers) std::cout << key << ": " << value << '\n';
      std::cout << "Content-Type: " << res.content_type << "\n\n" << res.body;
      return res.status == 200 ? 0 : 1;
    }

    oai::provider::HttpFrontend frontend(provider, clock);
    const int bound = frontend.bind(host, port);
    std::cerr << "provider: serving " << settings.config.repository.base_url() << " on http://" << host << ':'
              << bound << "/\n";
    g_frontend = &frontend;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    frontend.run();
    g_frontend = nullptr;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "provider: " << e.what() << '\n';
    return 1;
  }
}
