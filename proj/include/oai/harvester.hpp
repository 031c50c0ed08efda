#pragma once

// Service-provider side: full and incremental harvests into a directory of
// raw response pages, and merging those pages into a local catalog.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "oai/client.hpp"
#include "oai/model.hpp"
#include "oai/store.hpp"

namespace oai::harvester {

inline constexpr std::string_view kManifestName = "manifest.json";

struct HarvestPlan {
  std::string base_url;
  /// Explicit from date; wins over prev_identify.
  std::optional<Datestamp> from;
  std::optional<Datestamp> until;
  /// ListRecords instead of ListIdentifiers.
  bool records = false;
  std::string prefix{kDcPrefix};
  std::filesystem::path out_dir;
  /// Identify stored by an earlier harvest: change reference and from source.
  std::optional<std::filesystem::path> prev_identify;

  /// Throws InvalidValue.
  void validate() const;
  Verb verb() const noexcept { return records ? Verb::ListRecords : Verb::ListIdentifiers; }
};

struct HarvestOutcome {
  std::filesystem::path identify_file;
  /// <Verb>.1, <Verb>.2, ... in fetch order.
  std::vector<std::filesystem::path> page_files;
  std::size_t total_items = 0;
  bool identify_changed = false;
  /// The from date actually sent, if any.
  std::optional<Datestamp> from;
  std::filesystem::path manifest_file;
};

/// Date part of the document's responseDate, read in repository-local time.
/// Throws ParseError when there is none.
Datestamp extract_from_date(std::string_view identify_doc);

/// Creates out_dir when missing and refuses a non-empty one. Every raw body is
/// written before it is parsed. Throws TransportError, ParseError, Error.
HarvestOutcome run_harvest(const HarvestPlan& plan, client::OaiClient& client, std::ostream& log);

struct MergeReport {
  std::size_t added = 0;
  std::size_t updated = 0;
  std::size_t deleted = 0;
  std::size_t unchanged = 0;
  /// Live records that arrived without a payload and could not be stored.
  std::size_t skipped = 0;

  bool operator==(const MergeReport&) const = default;
};

/// Upserts the records of a completed ListRecords harvest into store, keyed
/// by identifier, as one batch. Throws ParseError on corrupt pages and
/// InvalidValue when out_dir holds no ListRecords harvest.
MergeReport merge_into_catalog(const std::filesystem::path& out_dir, store::RecordStore& store);

}  // namespace oai::harvester
