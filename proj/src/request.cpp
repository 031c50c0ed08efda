#include "oai/request.hpp"

#include <algorithm>
#include <array>

namespace oai {

namespace {

const std::array<VerbGrammar, 6> kGrammar = {{
    {Verb::Identify, {}, {}, std::nullopt},
    {Verb::GetRecord, {"identifier", "metadataPrefix"}, {}, std::nullopt},
    {Verb::ListIdentifiers, {}, {"from", "until", "set"}, "resumptionToken"},
    {Verb::ListRecords, {"metadataPrefix"}, {"from", "until", "set"}, "resumptionToken"},
    {Verb::ListSets, {}, {}, "resumptionToken"},
    {Verb::ListMetadataFormats, {}, {"identifier"}, std::nullopt},
}};

int hex_value(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool contains(const std::vector<std::string_view>& names, std::string_view name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

const VerbGrammar& grammar_for(Verb verb) noexcept {
  return kGrammar[static_cast<std::size_t>(verb)];
}

std::string form_decode(std::string_view component) {
  std::string out;
  out.reserve(component.size());
  for (std::size_t i = 0; i < component.size(); ++i) {
    const char c = component[i];
    if (c == '+') {
      out += ' ';
    } else if (c == '%') {
      if (i + 2 >= component.size()) {
        throw SyntaxError("Undecodable percent-escape in request");
      }
      const int hi = hex_value(component[i + 1]);
      const int lo = hex_value(component[i + 2]);
      if (hi < 0 || lo < 0) throw SyntaxError("Undecodable percent-escape in request");
      out += static_cast<char>(hi * 16 + lo);
      i += 2;
    } else {
      out += c;
    }
  }
  return out;
}

std::string form_encode(std::string_view component) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(component.size());
  for (char ch : component) {
    const auto c = static_cast<unsigned char>(ch);
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '_' || c == '.' || c == '~') {
      out += ch;
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0x0f];
    }
  }
  return out;
}

std::string OaiRequest::encode() const {
  std::string out = "verb=";
  out += to_string(verb);
  for (const auto& [key, value] : args) {
    out += '&';
    out += form_encode(key);
    out += '=';
    out += form_encode(value);
  }
  return out;
}

OaiRequest parse_request(std::string_view raw) {
  if (raw.size() > kMaxRequestBytes) {
    throw SyntaxError("Request exceeds " + std::to_string(kMaxRequestBytes) + " bytes");
  }

  struct RawPair {
    std::string_view text;
    std::size_t eq;
  };
  std::vector<RawPair> pairs;
  if (!raw.empty()) {
    std::size_t start = 0;
    while (true) {
      const auto amp = raw.find('&', start);
      const auto piece = raw.substr(start, amp == std::string_view::npos ? raw.npos : amp - start);
      pairs.push_back({piece, piece.find('=')});
      if (amp == std::string_view::npos) break;
      start = amp + 1;
    }
  }

  // The verb is located first so that an unrecognisable request reports the
  // missing verb rather than the first malformed pair.
  bool has_verb = false;
  for (const auto& p : pairs) {
    if (p.eq != std::string_view::npos && form_decode(p.text.substr(0, p.eq)) == "verb") {
      has_verb = true;
      break;
    }
  }
  if (!has_verb) throw SyntaxError(std::string(kNoVerbMessage));

  OaiRequest req;
  std::optional<std::string> verb_name;
  for (const auto& p : pairs) {
    if (p.eq == std::string_view::npos) {
      throw SyntaxError("Malformed argument '" + std::string(p.text) + "' (expected key=value)");
    }
    std::string key = form_decode(p.text.substr(0, p.eq));
    std::string value = form_decode(p.text.substr(p.eq + 1));
    if (key == "verb") {
      if (verb_name) throw SyntaxError("Argument 'verb' given more than once");
      verb_name = std::move(value);
      continue;
    }
    if (req.has(key)) throw SyntaxError("Argument '" + key + "' given more than once");
    req.args.emplace_back(std::move(key), std::move(value));
  }

  const auto verb = verb_from_string(*verb_name);
  if (!verb) throw SyntaxError("Unknown verb '" + *verb_name + "'");
  req.verb = *verb;
  return req;
}

OaiRequest validate_request(OaiRequest req) {
  const VerbGrammar& g = grammar_for(req.verb);
  const std::string verb_name(to_string(req.verb));

  for (std::size_t i = 0; i < req.args.size(); ++i) {
    const std::string& name = req.args[i].first;
    if (name == "verb") throw SyntaxError("Argument 'verb' given more than once");
    const bool legal = contains(g.required, name) || contains(g.optional, name) || g.standalone == name;
    if (!legal) throw SyntaxError("Illegal argument '" + name + "' for verb " + verb_name);
    for (std::size_t j = 0; j < i; ++j) {
      if (req.args[j].first == name) throw SyntaxError("Argument '" + name + "' given more than once");
    }
  }

  if (g.standalone && req.has(*g.standalone)) {
    if (req.args.size() != 1) {
      throw SyntaxError("Argument '" + std::string(*g.standalone) +
                        "' may not be combined with other arguments");
    }
    return req;
  }

  for (auto name : g.required) {
    if (!req.has(name)) {
      throw SyntaxError("Missing required argument '" + std::string(name) + "' for verb " + verb_name);
    }
  }
  for (std::string_view name : {"from", "until"}) {
    if (const auto value = req.arg(name)) {
      try {
        Datestamp::parse(*value);
      } catch (const MalformedDate&) {
        throw SyntaxError("Argument '" + std::string(name) + "' is not a YYYY-MM-DD date");
      }
    }
  }
  return req;
}

}  // namespace oai
