// harvest [flags] <base-url>
//
// Exit status: 0 done, 1 transport/parse/usage failure, 2 done but the
// Identify response differs from the -i reference.

#include <CLI11.hpp>

#include <iostream>

#include "oai/harvester.hpp"

namespace {

oai::Datestamp to_date(const std::string& text) { return oai::Datestamp::parse(text); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metadata harvester"};

  oai::harvester::HarvestPlan plan;
  oai::client::ClientConfig client_cfg;
  std::string out_dir, prev_identify, from, until, merge_path;
  bool use_get = false;

  app.add_option("base-url", plan.base_url, "Repository base URL")->required();
  app.add_option("-d,--dir", out_dir, "Output directory (created; must be empty)")->required();
  app.add_option("-i,--identify", prev_identify, "Identify file from an earlier harvest")->check(CLI::ExistingFile);
  app.add_option("-m,--prefix", plan.prefix, "metadataPrefix for --records")->capture_default_str();
  app.add_flag("--records", plan.records, "Harvest ListRecords instead of ListIdentifiers");
  app.add_option("--from", from, "Explicit from date YYYY-MM-DD");
  app.add_option("--until", until, "until date YYYY-MM-DD");
  app.add_option("-e,--email", client_cfg.contact_email, "Contact address sent in From")->required();
  app.add_option("--user-agent", client_cfg.user_agent, "User-Agent header")->capture_default_str();
  app.add_flag("--get", use_get, "Use GET instead of POST");
  app.add_flag("-v,--verbose", client_cfg.verbose, "Log every request");
  app.add_option("--merge", merge_path, "Merge a --records harvest into this catalog file");

  CLI11_PARSE(app, argc, argv);

  try {
    plan.out_dir = out_dir;
    if (!prev_identify.empty()) plan.prev_identify = prev_identify;
    if (!from.empty()) plan.from = to_date(from);
    if (!until.empty()) plan.until = to_date(until);
    if (use_get) client_cfg.method = oai::HttpMethod::Get;
    if (!merge_path.empty() && !plan.records) throw oai::InvalidValue("--merge needs --records");

    oai::client::HttplibTransport transport;
    oai::SystemClock clock;
    oai::client::OaiClient client(client_cfg, transport, clock, std::cerr);
    const auto outcome = oai::harvester::run_harvest(plan, client, std::cerr);

    if (!merge_path.empty()) {
      oai::store::FileStore catalog(merge_path, oai::store::CatalogPolicy{plan.prefix == oai::kDcPrefix});
      const auto r = oai::harvester::merge_into_catalog(plan.out_dir, catalog);
      std::cerr << "harvest: merged into " << merge_path << ": " << r.added << " added, " << r.updated
                << " updated, " << r.deleted << " deleted, " << r.unchanged << " unchanged, " << r.skipped
                << " skipped\n";
    }
    return outcome.identify_changed ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "harvest: " << e.what() << '\n';
    return 1;
  }
}
