#pragma once

// Protocol vocabulary shared by the provider and the harvester: verbs,
// identifiers, datestamps, records, metadata formats and requests. Every
// type validates its invariants on construction and is immutable after.

#include <array>
#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oai/error.hpp"

namespace oai {

enum class Verb {
  Identify,
  GetRecord,
  ListIdentifiers,
  ListRecords,
  ListSets,
  ListMetadataFormats,
};

inline constexpr std::array<Verb, 6> kAllVerbs = {
    Verb::Identify,        Verb::GetRecord, Verb::ListIdentifiers,
    Verb::ListRecords,     Verb::ListSets,  Verb::ListMetadataFormats,
};

std::string_view to_string(Verb verb) noexcept;

/// Exact, case-sensitive match against the six verb names.
std::optional<Verb> verb_from_string(std::string_view name) noexcept;

/// A day-granularity calendar date. Canonical form is YYYY-MM-DD.
class Datestamp {
 public:
  /// Throws MalformedDate unless the triple is a real calendar date in years 0..9999.
  Datestamp(int year, unsigned month, unsigned day);
  explicit Datestamp(std::chrono::year_month_day ymd);
  explicit Datestamp(std::chrono::sys_days days);

  /// Accepts exactly the canonical form; anything else is MalformedDate.
  static Datestamp parse(std::string_view text);

  int year() const noexcept { return year_; }
  unsigned month() const noexcept { return month_; }
  unsigned day() const noexcept { return day_; }

  std::chrono::sys_days days() const noexcept;
  Datestamp next_day() const { return Datestamp(days() + std::chrono::days{1}); }
  Datestamp prev_day() const { return Datestamp(days() - std::chrono::days{1}); }

  std::string str() const;

  auto operator<=>(const Datestamp&) const = default;

 private:
  int year_;
  unsigned month_;
  unsigned day_;
};

inline Datestamp datestamp_parse(std::string_view text) { return Datestamp::parse(text); }

/// Timestamp in the repository's local zone: YYYY-MM-DDThh:mm:ss+hh:mm.
class ResponseDate {
 public:
  ResponseDate(Datestamp date, unsigned hour, unsigned minute, unsigned second,
               int utc_offset_minutes);

  /// Shifts a UTC instant into the zone given by offset.
  static ResponseDate from_utc(std::chrono::sys_seconds instant, std::chrono::minutes offset);

  /// Canonical form; a trailing 'Z' is accepted as +00:00. Throws MalformedDate.
  static ResponseDate parse(std::string_view text);

  const Datestamp& date_part() const noexcept { return date_; }
  unsigned hour() const noexcept { return hour_; }
  unsigned minute() const noexcept { return minute_; }
  unsigned second() const noexcept { return second_; }
  int utc_offset_minutes() const noexcept { return offset_; }

  std::string str() const;

  bool operator==(const ResponseDate&) const = default;

 private:
  Datestamp date_;
  unsigned hour_;
  unsigned minute_;
  unsigned second_;
  int offset_;
};

/// The date part only; the time and offset are dropped without conversion.
inline Datestamp response_date_part(const ResponseDate& rd) { return rd.date_part(); }

struct OaiIdentifierParts {
  std::string scheme;
  std::string repository;
  std::string local;

  bool operator==(const OaiIdentifierParts&) const = default;
};

/// Splits scheme:repository:local at the first two colons. Scheme and
/// repository must be non-empty; local may contain further colons.
std::optional<OaiIdentifierParts> oai_identifier_parse(std::string_view value);

/// Opaque item key. Compared byte for byte.
class ItemIdentifier {
 public:
  /// Rejects empty values, whitespace, control characters and invalid UTF-8.
  explicit ItemIdentifier(std::string value);

  const std::string& value() const noexcept { return value_; }
  const std::optional<OaiIdentifierParts>& oai_parts() const noexcept { return parts_; }

  bool operator==(const ItemIdentifier& other) const noexcept { return value_ == other.value_; }
  auto operator<=>(const ItemIdentifier& other) const noexcept { return value_ <=> other.value_; }

 private:
  std::string value_;
  std::optional<OaiIdentifierParts> parts_;
};

/// A serialized XML element kept verbatim. Surrounding whitespace is trimmed;
/// well-formedness is checked by the wire layer when the fragment is emitted.
class XmlFragment {
 public:
  explicit XmlFragment(std::string_view text);

  const std::string& text() const noexcept { return text_; }

  bool operator==(const XmlFragment&) const = default;

 private:
  std::string text_;
};

struct RecordHeader {
  ItemIdentifier identifier;
  Datestamp datestamp;
  bool deleted = false;

  bool operator==(const RecordHeader&) const = default;
};

class MetadataRecord {
 public:
  /// Throws InvalidValue when a deleted header is paired with a payload.
  explicit MetadataRecord(RecordHeader header, std::optional<XmlFragment> metadata = std::nullopt);

  const RecordHeader& header() const noexcept { return header_; }
  const std::optional<XmlFragment>& metadata() const noexcept { return metadata_; }

  bool operator==(const MetadataRecord&) const = default;

 private:
  RecordHeader header_;
  std::optional<XmlFragment> metadata_;
};

inline constexpr std::string_view kDcPrefix = "oai_dc";
inline constexpr std::string_view kDcSchema = "http://www.openarchives.org/OAI/dc.xsd";
inline constexpr std::string_view kDcNamespace = "http://purl.org/dc/elements/1.1/";

/// True for a non-empty prefix free of whitespace, '&', '=' and '?'.
bool is_valid_prefix(std::string_view prefix) noexcept;

class MetadataFormatDescriptor {
 public:
  MetadataFormatDescriptor(std::string prefix, std::string schema_url,
                           std::optional<std::string> namespace_uri = std::nullopt);

  static MetadataFormatDescriptor dublin_core();

  const std::string& prefix() const noexcept { return prefix_; }
  const std::string& schema_url() const noexcept { return schema_url_; }
  const std::optional<std::string>& namespace_uri() const noexcept { return namespace_; }

  bool operator==(const MetadataFormatDescriptor&) const = default;

 private:
  std::string prefix_;
  std::string schema_url_;
  std::optional<std::string> namespace_;
};

class RepositoryDescription {
 public:
  /// descriptions are opaque <description> elements carried through from
  /// parsed input; the provider never generates any.
  RepositoryDescription(std::string repository_name, std::string base_url,
                        std::vector<std::string> admin_emails,
                        std::string protocol_version = "1.0",
                        std::vector<XmlFragment> descriptions = {});

  const std::string& repository_name() const noexcept { return name_; }
  const std::string& base_url() const noexcept { return base_url_; }
  const std::string& protocol_version() const noexcept { return version_; }
  const std::vector<std::string>& admin_emails() const noexcept { return emails_; }
  const std::vector<XmlFragment>& descriptions() const noexcept { return descriptions_; }

  bool operator==(const RepositoryDescription&) const = default;

 private:
  std::string name_;
  std::string base_url_;
  std::vector<std::string> emails_;
  std::string version_;
  std::vector<XmlFragment> descriptions_;
};

/// Continuation handle; only the issuing provider looks inside.
class ResumptionToken {
 public:
  explicit ResumptionToken(std::string value);

  const std::string& value() const noexcept { return value_; }

  bool operator==(const ResumptionToken&) const = default;

 private:
  std::string value_;
};

using Argument = std::pair<std::string, std::string>;

struct OaiRequest {
  Verb verb = Verb::Identify;
  /// Arguments other than verb, in first-seen order.
  std::vector<Argument> args;

  std::optional<std::string_view> arg(std::string_view name) const noexcept;
  bool has(std::string_view name) const noexcept { return arg(name).has_value(); }

  /// application/x-www-form-urlencoded form, verb first.
  std::string encode() const;

  bool operator==(const OaiRequest&) const = default;
};

}  // namespace oai
