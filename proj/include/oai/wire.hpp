#pragma once

// Version 1.0 per-verb response envelopes: rendering, parsing, and the
// responseDate-insensitive comparison used for Identify change detection.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oai/model.hpp"

namespace oai::wire {

inline constexpr std::string_view kXsiNamespace = "http://www.w3.org/2000/10/XMLSchema-instance";

/// http://www.openarchives.org/OAI/OAI_<Verb>
std::string envelope_namespace(Verb verb);
/// http://www.openarchives.org/OAI/1.0/OAI_<Verb> followed by the .xsd URL.
std::string envelope_schema_location(Verb verb);

/// One entry of a ListIdentifiers reply. Version 1.0 lists bare identifiers,
/// with status="deleted" on removed items and no datestamp.
struct ListedIdentifier {
  ItemIdentifier identifier;
  bool deleted = false;

  bool operator==(const ListedIdentifier&) const = default;
};

/// A response document. Only the body field matching verb may be populated:
/// repository (Identify), formats (ListMetadataFormats), identifiers
/// (ListIdentifiers), records (GetRecord, ListRecords). ListSets has no body.
struct ResponseEnvelope {
  Verb verb;
  ResponseDate response_date;
  std::string request_url;
  std::optional<RepositoryDescription> repository;
  std::vector<MetadataFormatDescriptor> formats;
  std::vector<ListedIdentifier> identifiers;
  std::vector<MetadataRecord> records;
  std::optional<ResumptionToken> resumption_token;

  std::size_t item_count() const noexcept;

  bool operator==(const ResponseEnvelope&) const = default;
};

struct ParsedListResponse {
  ResponseEnvelope envelope;
  /// Present iff the document carries a non-empty resumptionToken element.
  std::optional<ResumptionToken> token;
};

/// Full document with XML declaration. Throws SerializationError when a
/// payload is not a single well-formed element, when text cannot be
/// represented in XML, or when a body field does not belong to the verb.
std::string render_envelope(const ResponseEnvelope& env);

/// <record> element with header and, iff present, the payload verbatim.
std::string render_record(const MetadataRecord& rec);

/// The 15 Dublin Core element names.
bool is_dc_element(std::string_view name) noexcept;

using DcField = std::pair<std::string, std::string>;

/// <oai_dc> root in the DC namespace with schemaLocation pointing at the
/// oai_dc schema. Throws UnknownDcElement for names outside the DC set.
XmlFragment render_dc(const std::vector<DcField>& fields);

/// Parses any response document. Throws ParseError on malformed XML or a
/// missing responseDate/requestURL, VerbMismatch when the root element is
/// not expected_verb.
ParsedListResponse parse_list_response(std::string_view doc, Verb expected_verb);

/// The first responseDate in the document. Throws ParseError when absent.
ResponseDate extract_response_date(std::string_view doc);

/// Byte comparison after blanking the content of every responseDate
/// element. Throws ParseError when either document has no responseDate.
bool identify_equal_ignoring_date(std::string_view a, std::string_view b);

}  // namespace oai::wire
