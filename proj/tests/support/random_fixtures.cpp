#include "support/random_fixtures.hpp"

#include <array>
#include <set>

namespace oai::test {

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

constexpr std::array<std::string_view, 15> kDcNames = {
    "title", "creator", "subject", "description", "publisher", "contributor", "date", "type",
    "format", "identifier", "source", "language", "relation", "coverage", "rights"};

XmlFragment random_payload(Rng& rng, const MetadataFormatDescriptor& format) {
  if (format.prefix() == kDcPrefix) return random_dc(rng);
  std::string body = "<" + format.prefix() + " xmlns=\"" + format.namespace_uri().value_or("urn:x-test") + "\">";
  const std::size_t n = pick(rng, 3);
  for (std::size_t i = 0; i < n; ++i) {
    std::string text = random_text(rng);
    std::string escaped;
    for (char c : text) {
      if (c == '&') escaped += "&amp;";
      else if (c == '<') escaped += "&lt;";
      else if (c == '>') escaped += "&gt;";
      else escaped += c;
    }
    body += "<field n=\"" + std::to_string(i) + "\">" + escaped + "</field>";
  }
  body += "</" + format.prefix() + ">";
  return XmlFragment(body);
}

}  // namespace

Datestamp random_date(Rng& rng, Datestamp lo, Datestamp hi) {
  const auto span = (hi.days() - lo.days()).count();
  return Datestamp(lo.days() + std::chrono::days{std::uniform_int_distribution<long>(0, span)(rng)});
}

std::string random_text(Rng& rng, std::size_t max_len) {
  static const std::array<std::string_view, 14> pieces = {
      "a", "Z", "7", " ", "&", "<", ">", "\"", "'", "é", "漢", "-", "]]>", "\t"};
  const std::size_t len = 1 + pick(rng, max_len);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) out += pieces[pick(rng, pieces.size())];
  while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
  while (!out.empty() && (out.front() == ' ' || out.front() == '\t')) out.erase(out.begin());
  return out.empty() ? "x" : out;
}

ItemIdentifier random_identifier(Rng& rng) {
  static constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz0123456789._-/:";
  std::string local;
  const std::size_t len = 1 + pick(rng, 12);
  for (std::size_t i = 0; i < len; ++i) local += alphabet[pick(rng, alphabet.size())];
  if (chance(rng, 0.5)) return ItemIdentifier("oai:repo" + std::to_string(pick(rng, 3)) + ":" + local);
  return ItemIdentifier("id" + local);
}

XmlFragment random_dc(Rng& rng) {
  std::vector<wire::DcField> fields;
  const std::size_t n = pick(rng, 5);
  for (std::size_t i = 0; i < n; ++i) {
    fields.emplace_back(std::string(kDcNames[pick(rng, kDcNames.size())]), random_text(rng));
  }
  return wire::render_dc(fields);
}

store::Catalog random_catalog(Rng& rng, const CatalogShape& shape) {
  std::vector<MetadataFormatDescriptor> formats{MetadataFormatDescriptor::dublin_core()};
  const std::size_t extra = pick(rng, shape.max_formats);
  for (std::size_t i = 0; i < extra; ++i) {
    const std::string prefix = "fmt" + std::to_string(i);
    formats.emplace_back(prefix, "http://example.org/" + prefix + ".xsd",
                         chance(rng, 0.5) ? std::optional<std::string>("http://example.org/ns/" + prefix)
                                          : std::nullopt);
  }
  store::Catalog catalog(formats);

  const std::size_t n = pick(rng, shape.max_items + 1);
  const double deleted_p = std::uniform_real_distribution<double>(0.0, shape.max_deleted_fraction)(rng);
  std::size_t deleted = 0;
  std::set<std::string> used;
  while (catalog.size() < n) {
    const ItemIdentifier id = random_identifier(rng);
    if (!used.insert(id.value()).second) continue;
    store::StoredItem item{id, random_date(rng, shape.earliest, shape.latest), false, {}};
    const bool can_delete =
        static_cast<double>(deleted + 1) <= shape.max_deleted_fraction * static_cast<double>(n);
    if (can_delete && chance(rng, deleted_p)) {
      item.deleted = true;
      ++deleted;
    } else {
      for (const auto& f : formats) {
        if (f.prefix() == kDcPrefix || chance(rng, 0.5)) item.payloads.insert_or_assign(f.prefix(), random_payload(rng, f));
      }
    }
    catalog.upsert_item(std::move(item));
  }
  return catalog;
}

wire::ResponseEnvelope random_envelope(Rng& rng, Verb verb) {
  const Datestamp day = random_date(rng, Datestamp(1990, 1, 1), Datestamp(2030, 12, 31));
  const int offset = static_cast<int>(pick(rng, 24 * 60 * 2 - 1)) - (24 * 60 - 1);
  wire::ResponseEnvelope env{
      .verb = verb,
      .response_date = ResponseDate(day, static_cast<unsigned>(pick(rng, 24)), static_cast<unsigned>(pick(rng, 60)),
                                    static_cast<unsigned>(pick(rng, 60)), offset),
      .request_url = "http://example.org/oai?verb=" + std::string(to_string(verb)) + "&x=" + std::to_string(pick(rng, 1000)),
      .repository = std::nullopt,
      .formats = {},
      .identifiers = {},
      .records = {},
      .resumption_token = std::nullopt,
  };

  const auto maybe_token = [&] {
    if (chance(rng, 0.5)) env.resumption_token = ResumptionToken("tok-" + std::to_string(pick(rng, 1u << 20)) + "&<>");
  };

  switch (verb) {
    case Verb::Identify: {
      std::vector<std::string> emails;
      for (std::size_t i = 0, n = 1 + pick(rng, 3); i < n; ++i) emails.push_back("a" + std::to_string(i) + "@example.org");
      std::vector<XmlFragment> descriptions;
      for (std::size_t i = 0, n = pick(rng, 3); i < n; ++i) {
        descriptions.emplace_back("<description><note xmlns=\"urn:x-note\">n" + std::to_string(i) + "</note></description>");
      }
      env.repository = RepositoryDescription(random_text(rng), "http://example.org/oai", emails, "1.0", descriptions);
      break;
    }
    case Verb::ListSets:
      break;
    case Verb::ListMetadataFormats:
      for (std::size_t i = 0, n = pick(rng, 4); i < n; ++i) {
        env.formats.emplace_back("p" + std::to_string(i), "http://example.org/p" + std::to_string(i) + ".xsd",
                                 chance(rng, 0.5) ? std::optional<std::string>("urn:p" + std::to_string(i))
                                                  : std::nullopt);
      }
      break;
    case Verb::ListIdentifiers:
      for (std::size_t i = 0, n = pick(rng, 6); i < n; ++i) {
        env.identifiers.push_back({random_identifier(rng), chance(rng, 0.3)});
      }
      maybe_token();
      break;
    case Verb::GetRecord:
    case Verb::ListRecords: {
      const std::size_t n = verb == Verb::GetRecord ? pick(rng, 2) : pick(rng, 6);
      for (std::size_t i = 0; i < n; ++i) {
        const bool deleted = chance(rng, 0.3);
        RecordHeader header{random_identifier(rng), random_date(rng, Datestamp(1990, 1, 1), Datestamp(2030, 12, 31)),
                            deleted};
        std::optional<XmlFragment> payload;
        if (!deleted && chance(rng, 0.8)) payload = random_dc(rng);
        env.records.emplace_back(std::move(header), std::move(payload));
      }
      if (verb == Verb::ListRecords) maybe_token();
      break;
    }
  }
  return env;
}

}  // namespace oai::test
