#include "oai/model.hpp"

#include <cstdio>

#include "text_util.hpp"

namespace oai {

namespace {

constexpr std::array<std::string_view, 6> kVerbNames = {
    "Identify", "GetRecord", "ListIdentifiers", "ListRecords", "ListSets", "ListMetadataFormats",
};

bool parse_digits(std::string_view text, unsigned& out) {
  if (text.empty()) return false;
  unsigned value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + static_cast<unsigned>(c - '0');
  }
  out = value;
  return true;
}

}  // namespace

std::string_view to_string(Verb verb) noexcept {
  return kVerbNames[static_cast<std::size_t>(verb)];
}

std::optional<Verb> verb_from_string(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kVerbNames.size(); ++i) {
    if (kVerbNames[i] == name) return kAllVerbs[i];
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Datestamp

Datestamp::Datestamp(int year, unsigned month, unsigned day) : year_(year), month_(month), day_(day) {
  if (year < 0 || year > 9999) {
    throw MalformedDate("year out of range: " + std::to_string(year));
  }
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    throw MalformedDate("not a calendar date: " + std::to_string(year) + "-" +
                        std::to_string(month) + "-" + std::to_string(day));
  }
}

Datestamp::Datestamp(std::chrono::year_month_day ymd)
    : Datestamp(static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day())) {}

Datestamp::Datestamp(std::chrono::sys_days days) : Datestamp(std::chrono::year_month_day{days}) {}

Datestamp Datestamp::parse(std::string_view text) {
  unsigned year = 0, month = 0, day = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_digits(text.substr(0, 4), year) || !parse_digits(text.substr(5, 2), month) ||
      !parse_digits(text.substr(8, 2), day)) {
    throw MalformedDate("expected YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  return Datestamp(static_cast<int>(year), month, day);
}

std::chrono::sys_days Datestamp::days() const noexcept {
  return std::chrono::sys_days{std::chrono::year_month_day{
      std::chrono::year{year_}, std::chrono::month{month_}, std::chrono::day{day_}}};
}

std::string Datestamp::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year_, month_, day_);
  return buf;
}

// ---------------------------------------------------------------------------
// ResponseDate

ResponseDate::ResponseDate(Datestamp date, unsigned hour, unsigned minute, unsigned second,
                           int utc_offset_minutes)
    : date_(date), hour_(hour), minute_(minute), second_(second), offset_(utc_offset_minutes) {
  if (hour > 23 || minute > 59 || second > 59) {
    throw MalformedDate("time of day out of range");
  }
  if (utc_offset_minutes <= -24 * 60 || utc_offset_minutes >= 24 * 60) {
    throw MalformedDate("UTC offset out of range");
  }
}

ResponseDate ResponseDate::from_utc(std::chrono::sys_seconds instant, std::chrono::minutes offset) {
  using namespace std::chrono;
  const sys_seconds local = instant + offset;
  const sys_days day = floor<days>(local);
  const hh_mm_ss<seconds> tod{local - day};
  return ResponseDate(Datestamp(day), static_cast<unsigned>(tod.hours().count()),
                      static_cast<unsigned>(tod.minutes().count()),
                      static_cast<unsigned>(tod.seconds().count()),
                      static_cast<int>(offset.count()));
}

ResponseDate ResponseDate::parse(std::string_view text) {
  const auto fail = [&]() -> MalformedDate {
    return MalformedDate("expected YYYY-MM-DDThh:mm:ss+hh:mm, got '" + std::string(text) + "'");
  };
  if (text.size() < 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':') throw fail();
  unsigned hour = 0, minute = 0, second = 0;
  if (!parse_digits(text.substr(11, 2), hour) || !parse_digits(text.substr(14, 2), minute) ||
      !parse_digits(text.substr(17, 2), second)) {
    throw fail();
  }
  int offset = 0;
  const std::string_view zone = text.substr(19);
  if (zone == "Z") {
    offset = 0;
  } else {
    unsigned oh = 0, om = 0;
    if (zone.size() != 6 || (zone[0] != '+' && zone[0] != '-') || zone[3] != ':' ||
        !parse_digits(zone.substr(1, 2), oh) || !parse_digits(zone.substr(4, 2), om) || om > 59) {
      throw fail();
    }
    offset = static_cast<int>(oh * 60 + om) * (zone[0] == '-' ? -1 : 1);
  }
  return ResponseDate(Datestamp::parse(text.substr(0, 10)), hour, minute, second, offset);
}

std::string ResponseDate::str() const {
  const int magnitude = offset_ < 0 ? -offset_ : offset_;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%sT%02u:%02u:%02u%c%02d:%02d", date_.str().c_str(), hour_,
                minute_, second_, offset_ < 0 ? '-' : '+', magnitude / 60, magnitude % 60);
  return buf;
}

// ---------------------------------------------------------------------------
// Identifiers

std::optional<OaiIdentifierParts> oai_identifier_parse(std::string_view value) {
  const auto first = value.find(':');
  if (first == std::string_view::npos || first == 0) return std::nullopt;
  const auto second = value.find(':', first + 1);
  if (second == std::string_view::npos || second == first + 1) return std::nullopt;
  return OaiIdentifierParts{std::string(value.substr(0, first)),
                            std::string(value.substr(first + 1, second - first - 1)),
                            std::string(value.substr(second + 1))};
}

ItemIdentifier::ItemIdentifier(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw InvalidValue("identifier is empty");
  for (unsigned char c : value_) {
    if (c <= 0x20 || c == 0x7f) {
      throw InvalidValue("identifier contains whitespace or control characters");
    }
  }
  if (!detail::is_xml_safe_utf8(value_)) {
    throw InvalidValue("identifier is not valid UTF-8 XML text");
  }
  parts_ = oai_identifier_parse(value_);
}

XmlFragment::XmlFragment(std::string_view text) : text_(detail::trim(text)) {}

MetadataRecord::MetadataRecord(RecordHeader header, std::optional<XmlFragment> metadata)
    : header_(std::move(header)), metadata_(std::move(metadata)) {
  if (header_.deleted && metadata_) {
    throw InvalidValue("deleted record '" + header_.identifier.value() + "' carries metadata");
  }
}

// ---------------------------------------------------------------------------
// Formats and repository description

bool is_valid_prefix(std::string_view prefix) noexcept {
  if (prefix.empty()) return false;
  for (unsigned char c : prefix) {
    if (c <= 0x20 || c == 0x7f || c == '&' || c == '=' || c == '?') return false;
  }
  return detail::is_xml_safe_utf8(prefix);
}

MetadataFormatDescriptor::MetadataFormatDescriptor(std::string prefix, std::string schema_url,
                                                   std::optional<std::string> namespace_uri)
    : prefix_(std::move(prefix)), schema_url_(std::move(schema_url)), namespace_(std::move(namespace_uri)) {
  if (!is_valid_prefix(prefix_)) throw InvalidValue("invalid metadataPrefix '" + prefix_ + "'");
  if (!detail::is_token_text(schema_url_)) {
    throw InvalidValue("invalid schema URL for '" + prefix_ + "'");
  }
  if (namespace_ && !detail::is_token_text(*namespace_)) {
    throw InvalidValue("invalid namespace for '" + prefix_ + "'");
  }
  if (prefix_ == kDcPrefix && schema_url_ != kDcSchema) {
    throw InvalidValue("oai_dc must use schema " + std::string(kDcSchema));
  }
}

MetadataFormatDescriptor MetadataFormatDescriptor::dublin_core() {
  return MetadataFormatDescriptor(std::string(kDcPrefix), std::string(kDcSchema));
}

RepositoryDescription::RepositoryDescription(std::string repository_name, std::string base_url,
                                             std::vector<std::string> admin_emails,
                                             std::string protocol_version,
                                             std::vector<XmlFragment> descriptions)
    : name_(std::move(repository_name)),
      base_url_(std::move(base_url)),
      emails_(std::move(admin_emails)),
      version_(std::move(protocol_version)),
      descriptions_(std::move(descriptions)) {
  if (version_ != "1.0") throw InvalidValue("protocolVersion must be 1.0, got '" + version_ + "'");
  if (emails_.empty()) throw InvalidValue("at least one adminEmail is required");
  for (const auto& email : emails_) {
    if (!detail::is_token_text(email)) throw InvalidValue("invalid adminEmail '" + email + "'");
  }
}

ResumptionToken::ResumptionToken(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw InvalidValue("resumptionToken is empty");
  if (detail::trim(value_) != value_ || !detail::is_xml_safe_utf8(value_)) {
    throw InvalidValue("resumptionToken is not clean XML text");
  }
  for (unsigned char c : value_) {
    if (c < 0x20 || c == 0x7f) throw InvalidValue("resumptionToken contains control characters");
  }
}

std::optional<std::string_view> OaiRequest::arg(std::string_view name) const noexcept {
  for (const auto& [key, value] : args) {
    if (key == name) return std::string_view(value);
  }
  return std::nullopt;
}

}  // namespace oai
