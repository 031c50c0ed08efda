#include <doctest.h>

#include <regex>

#include "oai/model.hpp"
#include "support/random_fixtures.hpp"

using namespace oai;

namespace {

// Independent calendar: explicit Gregorian rules and a day counter that
// walks month lengths, no <chrono>.
bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int month_length(int y, int m) {
  static constexpr int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && leap(y) ? 29 : len[m - 1];
}

bool oracle_valid(int y, int m, int d) { return y >= 0 && y <= 9999 && m >= 1 && m <= 12 && d >= 1 && d <= month_length(y, m); }

long oracle_ordinal(int y, int m, int d) {
  long n = 0;
  for (int yy = 1970; yy < y; ++yy) n += leap(yy) ? 366 : 365;
  for (int mm = 1; mm < m; ++mm) n += month_length(y, mm);
  return n + d - 1;
}

std::string pad(int v, int width) {
  std::string s = std::to_string(v);
  return std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(s.size(), static_cast<std::size_t>(width)), '0') + s;
}

}  // namespace

TEST_CASE("datestamp validity agrees with the calendar oracle") {
  test::Rng rng(1);
  std::uniform_int_distribution<int> year(1896, 2104), month(0, 13), day(0, 32);
  for (int i = 0; i < 20000; ++i) {
    const int y = year(rng), m = month(rng), d = day(rng);
    const std::string text = pad(y, 4) + "-" + pad(m, 2) + "-" + pad(d, 2);
    bool parsed = true;
    try {
      const Datestamp ds = Datestamp::parse(text);
      CHECK(ds.str() == text);
    } catch (const MalformedDate&) {
      parsed = false;
    }
    CHECK_MESSAGE(parsed == oracle_valid(y, m, d), text);
  }
}

TEST_CASE("datestamp ordering and day arithmetic match the oracle") {
  test::Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const Datestamp a = test::random_date(rng, Datestamp(1970, 1, 1), Datestamp(2100, 12, 31));
    const Datestamp b = test::random_date(rng, Datestamp(1970, 1, 1), Datestamp(2100, 12, 31));
    const long oa = oracle_ordinal(a.year(), static_cast<int>(a.month()), static_cast<int>(a.day()));
    const long ob = oracle_ordinal(b.year(), static_cast<int>(b.month()), static_cast<int>(b.day()));
    CHECK((a < b) == (oa < ob));
    CHECK((a == b) == (oa == ob));
    CHECK((b.days() - a.days()).count() == ob - oa);
    const Datestamp n = a.next_day();
    CHECK(oracle_ordinal(n.year(), static_cast<int>(n.month()), static_cast<int>(n.day())) == oa + 1);
    CHECK(n.prev_day() == a);
  }
}

TEST_CASE("datestamp rejects non-canonical text") {
  for (const char* bad : {"2001-6-05", "2001-06-5", "01-06-05", "2001/06/05", "2001-06-05T00:00:00", " 2001-06-05",
                          "2001-02-29", "1900-02-29", "2001-13-01", "2001-00-10", "2001-06-00", "", "abcd-ef-gh",
                          "+001-06-05"}) {
    CHECK_THROWS_AS(Datestamp::parse(bad), MalformedDate);
  }
  CHECK(Datestamp::parse("2000-02-29").str() == "2000-02-29");
  CHECK(Datestamp::parse("0000-01-01").str() == "0000-01-01");
}

TEST_CASE("responseDate keeps repository-local date without conversion") {
  const auto rd = ResponseDate::parse("2001-06-05T09:00:00-06:00");
  CHECK(rd.date_part() == Datestamp(2001, 6, 5));
  CHECK(rd.str() == "2001-06-05T09:00:00-06:00");
  CHECK(response_date_part(ResponseDate::parse("1999-12-31T23:59:59+13:00")) == Datestamp(1999, 12, 31));
  CHECK(ResponseDate::parse("2001-06-05T09:00:00Z").str() == "2001-06-05T09:00:00+00:00");
  for (const char* bad : {"2001-06-05", "2001-06-05T24:00:00+00:00", "2001-06-05T09:60:00+00:00",
                          "2001-06-05T09:00:00+24:00", "2001-06-05T09:00:00+0600", "2001-06-05 09:00:00+00:00"}) {
    CHECK_THROWS_AS(ResponseDate::parse(bad), MalformedDate);
  }
}

TEST_CASE("responseDate from a UTC instant shifts into the local zone") {
  using namespace std::chrono;
  const sys_seconds t = sys_days{year{2001} / 6 / 6} + hours{3};
  const auto local = ResponseDate::from_utc(t, minutes{-6 * 60});
  CHECK(local.str() == "2001-06-05T21:00:00-06:00");
  CHECK(ResponseDate::from_utc(t, minutes{330}).str() == "2001-06-06T08:30:00+05:30");
}

TEST_CASE("oai identifier split agrees with a regex oracle") {
  const std::regex oracle(R"(^([^:]+):([^:]+):(.*)$)");
  test::Rng rng(3);
  static constexpr std::string_view alphabet = "ab:c:";
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    const std::size_t len = std::uniform_int_distribution<std::size_t>(0, 10)(rng);
    for (std::size_t k = 0; k < len; ++k) s += alphabet[std::uniform_int_distribution<std::size_t>(0, 4)(rng)];
    std::smatch m;
    const auto parts = oai_identifier_parse(s);
    if (std::regex_match(s, m, oracle)) {
      REQUIRE_MESSAGE(parts.has_value(), s);
      CHECK(parts->scheme == m[1].str());
      CHECK(parts->repository == m[2].str());
      CHECK(parts->local == m[3].str());
    } else {
      CHECK_MESSAGE(!parts.has_value(), s);
    }
  }
  const auto p = oai_identifier_parse("oai:arXiv:hep-th/9901001");
  REQUIRE(p);
  CHECK(p->repository == "arXiv");
  CHECK(p->local == "hep-th/9901001");
}

TEST_CASE("item identifiers are opaque but XML-safe") {
  CHECK(ItemIdentifier("record1").value() == "record1");
  CHECK_FALSE(ItemIdentifier("record1").oai_parts().has_value());
  CHECK(ItemIdentifier("oai:repo:x:y").oai_parts()->local == "x:y");
  for (const char* bad : {"", "a b", "a\tb", "a\nb", "\x01", "a\x7f", "\xc3\x28", "\xff"}) {
    CHECK_THROWS_AS(ItemIdentifier{bad}, InvalidValue);
  }
  CHECK(ItemIdentifier("B") < ItemIdentifier("a"));
}

TEST_CASE("records, formats and repository descriptions enforce their invariants") {
  const RecordHeader deleted{ItemIdentifier("r"), Datestamp(2000, 1, 1), true};
  CHECK_THROWS_AS(MetadataRecord(deleted, XmlFragment("<x/>")), InvalidValue);
  CHECK_NOTHROW(MetadataRecord{deleted});
  CHECK(XmlFragment("  <x/>\n").text() == "<x/>");

  CHECK(is_valid_prefix("oai_dc"));
  for (const char* bad : {"", "a b", "a&b", "a=b", "a?b"}) CHECK_FALSE(is_valid_prefix(bad));
  CHECK_THROWS_AS(MetadataFormatDescriptor("oai_dc", "http://example.org/other.xsd"), InvalidValue);
  CHECK(MetadataFormatDescriptor::dublin_core().schema_url() == kDcSchema);

  CHECK_THROWS_AS(RepositoryDescription("n", "http://x/oai", {}), InvalidValue);
  CHECK_THROWS_AS(RepositoryDescription("n", "http://x/oai", {"a@b"}, "2.0"), InvalidValue);

  CHECK_THROWS_AS(ResumptionToken(""), InvalidValue);
  CHECK_THROWS_AS(ResumptionToken("a\x01"), InvalidValue);
}

TEST_CASE("verb names round-trip") {
  for (Verb v : kAllVerbs) CHECK(verb_from_string(to_string(v)) == v);
  CHECK_FALSE(verb_from_string("identify").has_value());
  CHECK_FALSE(verb_from_string("").has_value());
}
