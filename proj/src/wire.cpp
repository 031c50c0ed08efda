#include "oai/wire.hpp"

#include <algorithm>
#include <array>
#include <regex>

#include "text_util.hpp"
#include "xml_dom.hpp"

namespace oai::wire {

using detail::XmlNode;

namespace {

constexpr std::string_view kOaiBase = "http://www.openarchives.org/OAI/";

constexpr std::array<std::string_view, 15> kDcElements = {
    "title",     "creator", "subject",    "description", "publisher",
    "contributor", "date",  "type",       "format",      "identifier",
    "source",    "language", "relation",  "coverage",    "rights",
};

const std::string& checked(const std::string& text, std::string_view what) {
  if (!detail::is_xml_safe_utf8(text)) {
    throw SerializationError(std::string(what) + " is not representable as XML text");
  }
  return text;
}

void element(std::string& out, int depth, std::string_view name, const std::string& text,
             std::string_view what) {
  out.append(static_cast<std::size_t>(depth), ' ');
  out += '<';
  out += name;
  out += '>';
  detail::append_escaped(out, checked(text, what));
  out += "</";
  out += name;
  out += ">\n";
}

void verbatim(std::string& out, int depth, const XmlFragment& fragment, std::string_view what) {
  if (!detail::is_single_element(fragment.text())) {
    throw SerializationError(std::string(what) + " is not a single well-formed XML element");
  }
  out.append(static_cast<std::size_t>(depth), ' ');
  out += fragment.text();
  out += '\n';
}

void render_record_into(std::string& out, int depth, const MetadataRecord& rec) {
  const auto pad = [&](int extra) { out.append(static_cast<std::size_t>(depth + extra), ' '); };
  const RecordHeader& h = rec.header();
  pad(0);
  out += "<record>\n";
  pad(1);
  out += "<header>\n";
  pad(2);
  out += h.deleted ? "<identifier status=\"deleted\">" : "<identifier>";
  detail::append_escaped(out, h.identifier.value());
  out += "</identifier>\n";
  element(out, depth + 2, "datestamp", h.datestamp.str(), "datestamp");
  pad(1);
  out += "</header>\n";
  if (rec.metadata()) {
    pad(1);
    out += "<metadata>\n";
    verbatim(out, depth + 2, *rec.metadata(), "metadata payload");
    pad(1);
    out += "</metadata>\n";
  }
  pad(0);
  out += "</record>\n";
}

void require_empty(bool empty, Verb verb, std::string_view field) {
  if (!empty) {
    throw SerializationError(std::string(field) + " does not belong in a " +
                             std::string(to_string(verb)) + " response");
  }
}

// --- parsing helpers -------------------------------------------------------

std::string text_of(const XmlNode& node) { return detail::trim(node.text); }

const XmlNode& required_child(const XmlNode& parent, std::string_view local) {
  const XmlNode* c = parent.child(local);
  if (c == nullptr) {
    throw ParseError("<" + std::string(parent.local_name()) + "> lacks <" + std::string(local) + ">");
  }
  return *c;
}

bool marked_deleted(const XmlNode& node) {
  const auto status = node.attribute("status");
  return status && detail::trim(*status) == "deleted";
}

template <typename T, typename F>
T convert(std::string_view what, F&& make) {
  try {
    return make();
  } catch (const InvalidValue& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

MetadataRecord parse_record(const XmlNode& node, std::string_view doc) {
  const XmlNode& header = required_child(node, "header");
  const XmlNode& id = required_child(header, "identifier");
  const XmlNode& stamp = required_child(header, "datestamp");
  const bool deleted = marked_deleted(id) || marked_deleted(header) || marked_deleted(node);

  std::optional<XmlFragment> payload;
  if (const XmlNode* md = node.child("metadata"); md != nullptr && !md->children.empty()) {
    const XmlNode& root = md->children.front();
    payload = XmlFragment(doc.substr(root.begin, root.end - root.begin));
  }
  return convert<MetadataRecord>("record", [&] {
    return MetadataRecord(
        RecordHeader{ItemIdentifier(text_of(id)), Datestamp::parse(text_of(stamp)), deleted},
        std::move(payload));
  });
}

RepositoryDescription parse_identify(const XmlNode& root, std::string_view doc) {
  std::vector<std::string> emails;
  std::vector<XmlFragment> descriptions;
  for (const auto& c : root.children) {
    if (c.local_name() == "adminEmail") emails.push_back(text_of(c));
    if (c.local_name() == "description") descriptions.emplace_back(doc.substr(c.begin, c.end - c.begin));
  }
  return convert<RepositoryDescription>("Identify", [&] {
    return RepositoryDescription(text_of(required_child(root, "repositoryName")),
                                 text_of(required_child(root, "baseURL")), std::move(emails),
                                 text_of(required_child(root, "protocolVersion")),
                                 std::move(descriptions));
  });
}

MetadataFormatDescriptor parse_format(const XmlNode& node) {
  std::optional<std::string> ns;
  if (const XmlNode* n = node.child("metadataNamespace")) ns = text_of(*n);
  return convert<MetadataFormatDescriptor>("metadataFormat", [&] {
    return MetadataFormatDescriptor(text_of(required_child(node, "metadataPrefix")),
                                    text_of(required_child(node, "schema")), std::move(ns));
  });
}

std::string strip_whitespace(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!detail::is_space(c)) out += c;
  }
  return out;
}

}  // namespace

std::string envelope_namespace(Verb verb) {
  return std::string(kOaiBase) + "OAI_" + std::string(to_string(verb));
}

std::string envelope_schema_location(Verb verb) {
  const std::string versioned = std::string(kOaiBase) + "1.0/OAI_" + std::string(to_string(verb));
  return versioned + " " + versioned + ".xsd";
}

std::size_t ResponseEnvelope::item_count() const noexcept {
  switch (verb) {
    case Verb::Identify: return repository ? 1 : 0;
    case Verb::ListMetadataFormats: return formats.size();
    case Verb::ListIdentifiers: return identifiers.size();
    case Verb::GetRecord:
    case Verb::ListRecords: return records.size();
    case Verb::ListSets: return 0;
  }
  return 0;
}

bool is_dc_element(std::string_view name) noexcept {
  return std::find(kDcElements.begin(), kDcElements.end(), name) != kDcElements.end();
}

XmlFragment render_dc(const std::vector<DcField>& fields) {
  std::string out = "<oai_dc xmlns=\"";
  out += kDcNamespace;
  out += "\" xmlns:xsi=\"";
  out += kXsiNamespace;
  out += "\" xsi:schemaLocation=\"";
  out += kDcNamespace;
  out += ' ';
  out += kDcSchema;
  out += '"';
  if (fields.empty()) {
    out += "/>";
    return XmlFragment(out);
  }
  out += ">\n";
  for (const auto& [name, value] : fields) {
    if (!is_dc_element(name)) throw UnknownDcElement("not a Dublin Core element: '" + name + "'");
    element(out, 1, name, value, "Dublin Core value");
  }
  out += "</oai_dc>";
  return XmlFragment(out);
}

std::string render_record(const MetadataRecord& rec) {
  std::string out;
  render_record_into(out, 0, rec);
  return out;
}

std::string render_envelope(const ResponseEnvelope& env) {
  const Verb verb = env.verb;
  require_empty(!env.repository || verb == Verb::Identify, verb, "repository description");
  require_empty(env.formats.empty() || verb == Verb::ListMetadataFormats, verb, "metadataFormat");
  require_empty(env.identifiers.empty() || verb == Verb::ListIdentifiers, verb, "identifier list");
  require_empty(env.records.empty() || verb == Verb::GetRecord || verb == Verb::ListRecords, verb,
                "record");
  if (env.request_url.empty() || !detail::is_token_text(env.request_url)) {
    throw SerializationError("requestURL must be non-empty and free of whitespace");
  }

  const std::string name(to_string(verb));
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += '<' + name + " xmlns=\"" + envelope_namespace(verb) + "\" xmlns:xsi=\"" +
         std::string(kXsiNamespace) + "\" xsi:schemaLocation=\"" + envelope_schema_location(verb) +
         "\">\n";
  element(out, 1, "responseDate", env.response_date.str(), "responseDate");
  element(out, 1, "requestURL", env.request_url, "requestURL");

  if (env.repository) {
    const RepositoryDescription& repo = *env.repository;
    element(out, 1, "repositoryName", repo.repository_name(), "repositoryName");
    element(out, 1, "baseURL", repo.base_url(), "baseURL");
    element(out, 1, "protocolVersion", repo.protocol_version(), "protocolVersion");
    for (const auto& email : repo.admin_emails()) element(out, 1, "adminEmail", email, "adminEmail");
    for (const auto& d : repo.descriptions()) verbatim(out, 1, d, "description");
  }
  for (const auto& f : env.formats) {
    out += " <metadataFormat>\n";
    element(out, 2, "metadataPrefix", f.prefix(), "metadataPrefix");
    element(out, 2, "schema", f.schema_url(), "schema");
    if (f.namespace_uri()) element(out, 2, "metadataNamespace", *f.namespace_uri(), "metadataNamespace");
    out += " </metadataFormat>\n";
  }
  for (const auto& li : env.identifiers) {
    out += li.deleted ? " <identifier status=\"deleted\">" : " <identifier>";
    detail::append_escaped(out, li.identifier.value());
    out += "</identifier>\n";
  }
  for (const auto& rec : env.records) render_record_into(out, 1, rec);
  if (env.resumption_token) {
    element(out, 1, "resumptionToken", env.resumption_token->value(), "resumptionToken");
  }
  out += "</" + name + ">\n";
  return out;
}

ParsedListResponse parse_list_response(std::string_view doc, Verb expected_verb) {
  const XmlNode root = detail::parse_xml(doc);
  if (root.local_name() != to_string(expected_verb)) {
    throw VerbMismatch("expected <" + std::string(to_string(expected_verb)) + "> response, got <" +
                       root.name + ">");
  }

  const XmlNode& date_node = required_child(root, "responseDate");
  const ResponseDate response_date = [&] {
    try {
      return ResponseDate::parse(text_of(date_node));
    } catch (const MalformedDate& e) {
      throw ParseError(std::string("responseDate: ") + e.what());
    }
  }();
  ResponseEnvelope env{
      .verb = expected_verb,
      .response_date = response_date,
      .request_url = strip_whitespace(required_child(root, "requestURL").text),
      .repository = std::nullopt,
      .formats = {},
      .identifiers = {},
      .records = {},
      .resumption_token = std::nullopt,
  };

  if (expected_verb == Verb::Identify) env.repository = parse_identify(root, doc);

  for (const auto& c : root.children) {
    const auto local = c.local_name();
    if (local == "resumptionToken") {
      // An empty token element marks the end of a list; treat it as absent.
      if (std::string value = text_of(c); !value.empty()) {
        env.resumption_token = convert<ResumptionToken>("resumptionToken", [&] {
          return ResumptionToken(std::move(value));
        });
      }
    } else if (expected_verb == Verb::ListIdentifiers && local == "identifier") {
      env.identifiers.push_back(convert<ListedIdentifier>("identifier", [&] {
        return ListedIdentifier{ItemIdentifier(text_of(c)), marked_deleted(c)};
      }));
    } else if ((expected_verb == Verb::GetRecord || expected_verb == Verb::ListRecords) &&
               local == "record") {
      env.records.push_back(parse_record(c, doc));
    } else if (expected_verb == Verb::ListMetadataFormats && local == "metadataFormat") {
      env.formats.push_back(parse_format(c));
    }
  }

  ParsedListResponse parsed{.envelope = std::move(env), .token = std::nullopt};
  parsed.token = parsed.envelope.resumption_token;
  return parsed;
}

ResponseDate extract_response_date(std::string_view doc) {
  const XmlNode root = detail::parse_xml(doc);
  const XmlNode* node = root.child("responseDate");
  if (node == nullptr) throw ParseError("document has no responseDate");
  try {
    return ResponseDate::parse(text_of(*node));
  } catch (const MalformedDate& e) {
    throw ParseError(std::string("responseDate: ") + e.what());
  }
}

namespace {

std::string blank_response_dates(std::string_view doc) {
  static const std::regex kResponseDate(
      R"((<((?:[A-Za-z_][A-Za-z0-9_.\-]*:)?)responseDate(?:\s[^>]*)?>)[^<]*(</\2responseDate\s*>))");
  std::string out;
  std::size_t last = 0;
  std::size_t found = 0;
  using It = std::regex_iterator<std::string_view::const_iterator>;
  for (It it(doc.begin(), doc.end(), kResponseDate), end; it != end; ++it) {
    const auto& m = *it;
    const auto pos = static_cast<std::size_t>(m.position(0));
    out.append(doc.substr(last, pos - last));
    out += m.str(1);
    out += '#';
    out += m.str(3);
    last = pos + static_cast<std::size_t>(m.length(0));
    ++found;
  }
  if (found == 0) throw ParseError("document has no responseDate element");
  out.append(doc.substr(last));
  return out;
}

}  // namespace

bool identify_equal_ignoring_date(std::string_view a, std::string_view b) {
  return blank_response_dates(a) == blank_response_dates(b);
}

}  // namespace oai::wire
