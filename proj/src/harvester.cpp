#include "oai/harvester.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oai/wire.hpp"

namespace oai::harvester {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kPrefix = "harvest: ";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw Error("cannot write " + path.string());
}

void prepare_out_dir(const fs::path& dir) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw Error(dir.string() + " is not a directory");
    if (!fs::is_empty(dir)) throw Error("refusing to harvest into non-empty directory " + dir.string());
  } else {
    fs::create_directories(dir);
  }
}

}  // namespace

void HarvestPlan::validate() const {
  if (base_url.empty()) throw InvalidValue("no base URL");
  if (out_dir.empty()) throw InvalidValue("no output directory");
  if (records && !is_valid_prefix(prefix)) throw InvalidValue("bad metadata prefix '" + prefix + "'");
}

Datestamp extract_from_date(std::string_view identify_doc) {
  return wire::extract_response_date(identify_doc).date_part();
}

HarvestOutcome run_harvest(const HarvestPlan& plan, client::OaiClient& client, std::ostream& log) {
  plan.validate();
  std::optional<std::string> reference;
  if (plan.prev_identify) reference = read_file(*plan.prev_identify);
  prepare_out_dir(plan.out_dir);

  HarvestOutcome outcome;
  log << kPrefix << "Harvest from " << plan.base_url << " using " << to_string(client.config().method) << '\n';

  const auto identify = client.get(plan.base_url, OaiRequest{Verb::Identify, {}});
  outcome.identify_file = plan.out_dir / "Identify";
  write_file(outcome.identify_file, identify.body);
  wire::parse_list_response(identify.body, Verb::Identify);

  if (reference) {
    outcome.identify_changed = !wire::identify_equal_ignoring_date(*reference, identify.body);
    if (outcome.identify_changed) {
      log << kPrefix << "WARNING: Identify response differs from reference " << plan.prev_identify->string()
          << '\n';
    } else {
      log << kPrefix << "Identify response unchanged from reference (except date)\n";
    }
  }

  if (plan.from) {
    outcome.from = plan.from;
    log << kPrefix << "Incremental harvest from " << plan.from->str() << " (from command line)\n";
  } else if (reference) {
    log << kPrefix << "Reading " << plan.prev_identify->string() << " to get from date\n";
    outcome.from = extract_from_date(*reference);
    log << kPrefix << "Incremental harvest from " << outcome.from->str() << " (from "
        << plan.prev_identify->string() << ")\n";
  } else {
    log << kPrefix << "Doing complete harvest.\n";
  }

  const Verb verb = plan.verb();
  const std::string noun = plan.records ? "records" : "identifiers";
  nlohmann::json pages = nlohmann::json::array();
  std::optional<ResumptionToken> token;

  for (int n = 1;; ++n) {
    OaiRequest req{verb, {}};
    if (token) {
      req.args.emplace_back("resumptionToken", token->value());
    } else {
      if (outcome.from) req.args.emplace_back("from", outcome.from->str());
      if (plan.until) req.args.emplace_back("until", plan.until->str());
      if (plan.records) req.args.emplace_back("metadataPrefix", plan.prefix);
    }

    const auto page = client.get(plan.base_url, req);
    const fs::path file = plan.out_dir / (std::string(to_string(verb)) + "." + std::to_string(n));
    write_file(file, page.body);
    outcome.page_files.push_back(file);

    const auto parsed = wire::parse_list_response(page.body, verb);
    const std::size_t count = parsed.envelope.item_count();
    outcome.total_items += count;
    log << kPrefix << "Got " << count << ' ' << noun << " (running total: " << outcome.total_items << ")\n";

    nlohmann::json entry{{"file", file.filename().string()}, {"items", count}};
    if (parsed.token) entry["resumptionToken"] = parsed.token->value();
    pages.push_back(std::move(entry));

    if (!parsed.token) {
      log << kPrefix << "No resumptionToken, request complete.\n";
      break;
    }
    if (token && *token == *parsed.token) {
      throw ParseError("resumptionToken '" + token->value() + "' repeated by " + plan.base_url);
    }
    token = parsed.token;
    log << kPrefix << "Got resumptionToken: `" << token->value() << "'\n";
  }

  nlohmann::json manifest{
      {"base_url", plan.base_url},
      {"verb", to_string(verb)},
      {"identify", outcome.identify_file.filename().string()},
      {"identify_changed", outcome.identify_changed},
      {"from", outcome.from ? nlohmann::json(outcome.from->str()) : nlohmann::json(nullptr)},
      {"until", plan.until ? nlohmann::json(plan.until->str()) : nlohmann::json(nullptr)},
      {"pages", std::move(pages)},
      {"total_items", outcome.total_items},
  };
  if (plan.records) manifest["metadataPrefix"] = plan.prefix;
  outcome.manifest_file = plan.out_dir / kManifestName;
  write_file(outcome.manifest_file, manifest.dump(2) + "\n");

  log << kPrefix << "Done.\n";
  return outcome;
}

}  // namespace oai::harvester
