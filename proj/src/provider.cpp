#include "oai/provider.hpp"

#include <charconv>

#include "oai/request.hpp"

namespace oai::provider {

namespace {

bool literal_prefix_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '.';
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? text.npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::optional<Datestamp> optional_date(std::optional<std::string_view> text) {
  if (!text) return std::nullopt;
  return Datestamp::parse(*text);
}

HttpResponse plain(int status, std::string body) {
  return HttpResponse{status, "text/plain", {}, std::move(body)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Paging

ResumptionToken PageCursor::encode() const {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out(to_string(verb));
  out += ':';
  out += from ? from->str() : "-";
  out += ':';
  out += until ? until->str() : "-";
  out += ':';
  if (!prefix) {
    out += '-';
  } else {
    for (char ch : *prefix) {
      if (literal_prefix_char(ch)) {
        out += ch;
      } else {
        const auto c = static_cast<unsigned char>(ch);
        out += '~';
        out += kHex[c >> 4];
        out += kHex[c & 0x0f];
      }
    }
  }
  out += ':';
  out += std::to_string(offset);
  return ResumptionToken(std::move(out));
}

PageCursor PageCursor::decode(const ResumptionToken& token) {
  const auto bad = [&] { return BadResumptionToken("unrecognised resumptionToken '" + token.value() + "'"); };
  const auto fields = split(token.value(), ':');
  if (fields.size() != 5) throw bad();

  PageCursor cursor;
  const auto verb = verb_from_string(fields[0]);
  if (!verb || (*verb != Verb::ListIdentifiers && *verb != Verb::ListRecords)) throw bad();
  cursor.verb = *verb;
  try {
    if (fields[1] != "-") cursor.from = Datestamp::parse(fields[1]);
    if (fields[2] != "-") cursor.until = Datestamp::parse(fields[2]);
  } catch (const MalformedDate&) {
    throw bad();
  }
  if (fields[3] != "-") {
    std::string prefix;
    const std::string_view enc = fields[3];
    for (std::size_t i = 0; i < enc.size(); ++i) {
      if (literal_prefix_char(enc[i])) {
        prefix += enc[i];
      } else if (enc[i] == '~' && i + 2 < enc.size() && hex_digit(enc[i + 1]) >= 0 &&
                 hex_digit(enc[i + 2]) >= 0) {
        prefix += static_cast<char>(hex_digit(enc[i + 1]) * 16 + hex_digit(enc[i + 2]));
        i += 2;
      } else {
        throw bad();
      }
    }
    if (!is_valid_prefix(prefix)) throw bad();
    cursor.prefix = std::move(prefix);
  }
  if ((cursor.verb == Verb::ListRecords) != cursor.prefix.has_value()) throw bad();

  const std::string_view digits = fields[4];
  if (digits.empty() || digits.size() > 18) throw bad();
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cursor.offset);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) throw bad();
  return cursor;
}

// ---------------------------------------------------------------------------
// Throttle

void ThrottlePolicy::validate() const {
  if (min_interval.count() < 0) throw InvalidValue("throttle interval must be non-negative");
  if (min_interval.count() > 0 && retry_after.count() < 1) {
    throw InvalidValue("retry-after must be at least 1 second when throttling");
  }
}

std::optional<std::chrono::seconds> Throttle::check(std::string_view client, Instant now) {
  if (policy_.min_interval.count() <= 0) return std::nullopt;
  std::lock_guard lock(mutex_);
  const std::string key(client);
  if (const auto it = last_served_.find(key); it != last_served_.end()) {
    const auto elapsed = now - it->second;
    if (elapsed < policy_.min_interval) {
      return std::max(policy_.retry_after, policy_.min_interval - elapsed);
    }
  }
  if (last_served_.size() > 4096) {
    std::erase_if(last_served_, [&](const auto& entry) { return now - entry.second >= policy_.min_interval; });
  }
  last_served_[key] = now;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Provider

void ProviderConfig::validate() const {
  if (page_size < 1) throw InvalidValue("page_size must be at least 1");
  throttle.validate();
  if (clock_offset <= -std::chrono::hours{24} || clock_offset >= std::chrono::hours{24}) {
    throw InvalidValue("clock_offset must be within +/-23:59");
  }
  for (const auto& target : redirect_targets) {
    if (target.empty()) throw InvalidValue("empty redirect target");
  }
}

Provider::Provider(ProviderConfig config, std::shared_ptr<store::RecordStore> store)
    : config_(std::move(config)), store_(std::move(store)), throttle_(config_.throttle) {
  config_.validate();
  if (!store_) throw InvalidValue("provider needs a record store");
}

std::string Provider::request_url(const OaiRequest& req) const {
  return config_.repository.base_url() + "?" + req.encode();
}

HttpResponse Provider::handle(std::string_view client_addr, HttpMethod, std::string_view raw_request,
                              Instant now) {
  try {
    if (const auto wait = throttle_.check(client_addr, now)) {
      HttpResponse r = plain(503, "Too many requests, retry after " + std::to_string(wait->count()) +
                                      " seconds\n");
      r.headers.emplace_back("Retry-After", std::to_string(wait->count()));
      return r;
    }

    if (!config_.redirect_targets.empty()) {
      const auto& target =
          config_.redirect_targets[next_redirect_++ % config_.redirect_targets.size()];
      HttpResponse r = plain(302, "Redirecting\n");
      r.headers.emplace_back("Location", target + (target.find('?') == std::string::npos ? "?" : "&") +
                                             std::string(raw_request));
      return r;
    }

    OaiRequest req;
    try {
      req = parse_and_validate(raw_request);
    } catch (const SyntaxError& e) {
      return plain(400, e.what());
    }

    const auto env = dispatch(req, ResponseDate::from_utc(now, config_.clock_offset));
    return HttpResponse{200, "text/xml", {}, wire::render_envelope(env)};
  } catch (const std::exception& e) {
    return plain(500, std::string("Internal error: ") + e.what() + "\n");
  }
}

wire::ResponseEnvelope Provider::dispatch(const OaiRequest& req, const ResponseDate& response_date) const {
  wire::ResponseEnvelope env{
      .verb = req.verb,
      .response_date = response_date,
      .request_url = request_url(req),
      .repository = std::nullopt,
      .formats = {},
      .identifiers = {},
      .records = {},
      .resumption_token = std::nullopt,
  };

  switch (req.verb) {
    case Verb::Identify:
      env.repository = config_.repository;
      break;

    case Verb::ListSets:
      break;

    case Verb::ListMetadataFormats: {
      std::optional<ItemIdentifier> id;
      try {
        if (const auto value = req.arg("identifier")) id.emplace(std::string(*value));
        env.formats = store_->formats_for(id);
      } catch (const InvalidValue&) {
      } catch (const NotFound&) {
      }
      break;
    }

    case Verb::GetRecord: {
      try {
        const ItemIdentifier id{std::string(*req.arg("identifier"))};
        const store::StoredItem item = store_->get_item(id);
        const RecordHeader header{item.identifier, item.datestamp, item.deleted};
        env.records.emplace_back(header, store_->disseminate(id, *req.arg("metadataPrefix")));
      } catch (const InvalidValue&) {
      } catch (const NotFound&) {
      }
      break;
    }

    case Verb::ListIdentifiers:
    case Verb::ListRecords:
      try {
        list_body(req, env);
      } catch (const BadResumptionToken&) {
        env.identifiers.clear();
        env.records.clear();
        env.resumption_token.reset();
      }
      break;
  }
  return env;
}

void Provider::list_body(const OaiRequest& req, wire::ResponseEnvelope& env) const {
  PageCursor cursor;
  if (const auto token = req.arg("resumptionToken")) {
    try {
      cursor = PageCursor::decode(ResumptionToken(std::string(*token)));
    } catch (const InvalidValue&) {
      throw BadResumptionToken("unusable resumptionToken");
    }
    if (cursor.verb != req.verb) throw BadResumptionToken("resumptionToken issued for another verb");
  } else {
    if (req.has("set")) return;  // no sets: a set selects nothing
    cursor.verb = req.verb;
    cursor.from = optional_date(req.arg("from"));
    cursor.until = optional_date(req.arg("until"));
    if (const auto prefix = req.arg("metadataPrefix")) cursor.prefix = std::string(*prefix);
  }

  if (cursor.from && cursor.until && *cursor.until < *cursor.from) return;
  if (cursor.prefix && !store_->find_format(*cursor.prefix)) return;

  auto headers = store_->ids_by_date(cursor.from, cursor.until);
  if (req.verb == Verb::ListIdentifiers) {
    std::vector<wire::ListedIdentifier> full;
    full.reserve(headers.size());
    for (auto& h : headers) full.push_back({std::move(h.identifier), h.deleted});
    auto page = paginate(std::move(full), cursor, config_.page_size);
    env.identifiers = std::move(page.items);
    env.resumption_token = std::move(page.token);
    return;
  }

  auto page = paginate(std::move(headers), cursor, config_.page_size);
  for (auto& h : page.items) {
    std::optional<XmlFragment> payload;
    if (!h.deleted) {
      try {
        payload = store_->disseminate(h.identifier, *cursor.prefix);
      } catch (const NotFound&) {
      }
    }
    env.records.emplace_back(std::move(h), std::move(payload));
  }
  env.resumption_token = std::move(page.token);
}

}  // namespace oai::provider
