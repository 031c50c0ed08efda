#pragma once

// Request layer: application/x-www-form-urlencoded strings in, validated
// OaiRequest values out. Every input either validates or raises SyntaxError.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oai/model.hpp"

namespace oai {

/// Raw requests longer than this are rejected outright.
inline constexpr std::size_t kMaxRequestBytes = 8 * 1024;

inline constexpr std::string_view kNoVerbMessage = "No verb specified!";

/// Per-verb argument grammar.
struct VerbGrammar {
  Verb verb;
  std::vector<std::string_view> required;
  std::vector<std::string_view> optional;
  /// An argument that must appear alone; when present it stands in for the
  /// required arguments (resumptionToken on the list verbs).
  std::optional<std::string_view> standalone;
};

const VerbGrammar& grammar_for(Verb verb) noexcept;

/// Percent-decodes one form component; '+' becomes a space. Throws SyntaxError
/// on a truncated or non-hex escape.
std::string form_decode(std::string_view component);

/// Percent-encodes everything outside the RFC 3986 unreserved set.
std::string form_encode(std::string_view component);

/// Splits, decodes and resolves the verb. Errors: "No verb specified!",
/// unknown verb, a pair without '=', a repeated argument name, a bad escape,
/// or input over kMaxRequestBytes.
OaiRequest parse_request(std::string_view raw);

/// Checks req against grammar_for(req.verb) and returns it unchanged.
OaiRequest validate_request(OaiRequest req);

inline OaiRequest parse_and_validate(std::string_view raw) {
  return validate_request(parse_request(raw));
}

}  // namespace oai
