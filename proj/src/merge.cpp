#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include <json.hpp>

#include "oai/harvester.hpp"
#include "oai/wire.hpp"
#include "xml_dom.hpp"

namespace oai::harvester {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct HarvestPages {
  std::string prefix;
  std::vector<fs::path> files;
};

HarvestPages locate_pages(const fs::path& dir) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(slurp(dir / kManifestName));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("corrupt manifest in " + dir.string() + ": " + e.what());
  }
  try {
    if (manifest.at("verb").get<std::string>() != "ListRecords") {
      throw InvalidValue(dir.string() + " holds a ListIdentifiers harvest; merging needs ListRecords");
    }
    HarvestPages out{manifest.at("metadataPrefix").get<std::string>(), {}};
    for (const auto& page : manifest.at("pages")) out.files.push_back(dir / page.at("file").get<std::string>());
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("incomplete manifest in " + dir.string() + ": " + e.what());
  }
}

/// Descriptor for a prefix the local catalog has not seen: the schema is the
/// location paired with the payload root's namespace in xsi:schemaLocation.
MetadataFormatDescriptor describe_format(const std::string& prefix, const XmlFragment& payload) {
  if (prefix == kDcPrefix) return MetadataFormatDescriptor::dublin_core();
  const detail::XmlNode root = detail::parse_xml(payload.text());
  std::optional<std::string> ns;
  const auto colon = root.name.find(':');
  const std::string xmlns_attr = colon == std::string::npos ? "xmlns" : "xmlns:" + root.name.substr(0, colon);
  for (const auto& [name, value] : root.attributes) {
    if (name == xmlns_attr) ns = value;
  }

  std::string schema;
  if (const auto loc = root.attribute("schemaLocation")) {
    std::istringstream words{std::string(*loc)};
    std::vector<std::string> parts{std::istream_iterator<std::string>(words), std::istream_iterator<std::string>()};
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      if (!ns || parts[i] == *ns) {
        schema = parts[i + 1];
        break;
      }
    }
    if (schema.empty() && parts.size() % 2 == 1) schema = parts.back();
  }
  if (schema.empty()) throw ParseError("cannot determine the schema of format '" + prefix + "'");
  return MetadataFormatDescriptor(prefix, schema, ns);
}

}  // namespace

MergeReport merge_into_catalog(const fs::path& out_dir, store::RecordStore& store) {
  const HarvestPages pages = locate_pages(out_dir);

  // Later pages win for a repeated identifier.
  std::map<std::string, MetadataRecord> latest;
  for (const auto& file : pages.files) {
    const auto parsed = wire::parse_list_response(slurp(file), Verb::ListRecords);
    for (const auto& rec : parsed.envelope.records) {
      latest.insert_or_assign(rec.header().identifier.value(), rec);
    }
  }

  MergeReport report;
  std::vector<store::StoredItem> batch;
  std::vector<MetadataFormatDescriptor> new_formats;
  const bool known_format = store.find_format(pages.prefix).has_value();

  for (const auto& [key, rec] : latest) {
    const RecordHeader& header = rec.header();
    std::optional<store::StoredItem> existing;
    try {
      existing = store.get_item(header.identifier);
    } catch (const NotFound&) {
    }

    store::StoredItem item{header.identifier, header.datestamp, header.deleted, {}};
    if (!header.deleted) {
      if (!rec.metadata()) {
        ++report.skipped;
        continue;
      }
      if (existing && !existing->deleted && existing->datestamp == header.datestamp) {
        item.payloads = existing->payloads;
      }
      item.payloads.insert_or_assign(pages.prefix, *rec.metadata());
      if (!known_format && new_formats.empty()) new_formats.push_back(describe_format(pages.prefix, *rec.metadata()));
    }

    if (existing && *existing == item) {
      ++report.unchanged;
      continue;
    }
    if (item.deleted) {
      ++report.deleted;
    } else if (existing) {
      ++report.updated;
    } else {
      ++report.added;
    }
    batch.push_back(std::move(item));
  }

  if (!batch.empty()) store.upsert_items(std::move(batch), new_formats);
  return report;
}

}  // namespace oai::harvester
