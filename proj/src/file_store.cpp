#include <fstream>
#include <sstream>

#include "oai/store.hpp"
#include "text_util.hpp"
#include "xml_dom.hpp"

namespace oai::store {

namespace {

namespace fs = std::filesystem;

Catalog load_or_create(const fs::path& path, CatalogPolicy policy) {
  if (!fs::exists(path)) return Catalog({}, policy);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read catalog " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_catalog(buf.str());
}

void attribute(std::string& out, std::string_view name, std::string_view value) {
  out += ' ';
  out += name;
  out += "=\"";
  detail::append_escaped(out, value, true);
  out += '"';
}

std::string required_attribute(const detail::XmlNode& node, std::string_view name) {
  const auto value = node.attribute(name);
  if (!value) {
    throw ParseError("catalog <" + node.name + "> lacks attribute '" + std::string(name) + "'");
  }
  return std::string(*value);
}

}  // namespace

std::string write_catalog(const Catalog& catalog) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<catalog";
  if (!catalog.policy().require_dc) attribute(out, "require-dc", "false");
  out += ">\n";
  for (const auto& f : catalog.formats()) {
    out += " <format";
    attribute(out, "prefix", f.prefix());
    attribute(out, "schema", f.schema_url());
    if (f.namespace_uri()) attribute(out, "namespace", *f.namespace_uri());
    out += "/>\n";
  }
  for (const auto& item : catalog.items()) {
    out += " <item";
    attribute(out, "identifier", item.identifier.value());
    attribute(out, "datestamp", item.datestamp.str());
    if (item.deleted) attribute(out, "deleted", "true");
    if (item.payloads.empty()) {
      out += "/>\n";
      continue;
    }
    out += ">\n";
    for (const auto& [prefix, payload] : item.payloads) {
      out += "  <payload";
      attribute(out, "prefix", prefix);
      out += '>';
      out += payload.text();
      out += "</payload>\n";
    }
    out += " </item>\n";
  }
  out += "</catalog>\n";
  return out;
}

Catalog read_catalog(std::string_view document) {
  const detail::XmlNode root = detail::parse_xml(document);
  if (root.name != "catalog") throw ParseError("not a catalog file: root is <" + root.name + ">");
  CatalogPolicy policy;
  if (const auto flag = root.attribute("require-dc")) policy.require_dc = *flag != "false";

  try {
    std::vector<MetadataFormatDescriptor> formats;
    for (const auto& node : root.children) {
      if (node.name != "format") continue;
      std::optional<std::string> ns;
      if (const auto v = node.attribute("namespace")) ns = std::string(*v);
      formats.emplace_back(required_attribute(node, "prefix"), required_attribute(node, "schema"),
                           std::move(ns));
    }
    Catalog catalog(std::move(formats), policy);
    for (const auto& node : root.children) {
      if (node.name != "item") continue;
      StoredItem item{ItemIdentifier(required_attribute(node, "identifier")),
                      Datestamp::parse(required_attribute(node, "datestamp")),
                      node.attribute("deleted") == std::optional<std::string_view>("true"),
                      {}};
      for (const auto& p : node.children) {
        if (p.name != "payload" || p.children.size() != 1) {
          throw ParseError("catalog item '" + item.identifier.value() + "' has a bad payload entry");
        }
        const auto& element = p.children.front();
        item.payloads.emplace(required_attribute(p, "prefix"),
                              XmlFragment(document.substr(element.begin, element.end - element.begin)));
      }
      catalog.upsert_item(std::move(item));
    }
    return catalog;
  } catch (const InvalidValue& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  } catch (const UnknownFormat& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  }
}

FileStore::FileStore(fs::path path, CatalogPolicy policy)
    : MemoryStore(load_or_create(path, policy)), path_(std::move(path)) {
  if (!fs::exists(path_)) committed(snapshot());
}

void FileStore::committed(const Catalog& catalog) {
  fs::path tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write catalog " + tmp.string());
    out << write_catalog(catalog);
    if (!out.flush()) throw Error("cannot write catalog " + tmp.string());
  }
  fs::rename(tmp, path_);
}

}  // namespace oai::store
