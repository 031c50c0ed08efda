#include <doctest.h>

#include "oai/wire.hpp"
#include "support/random_fixtures.hpp"
#include "support/xml_check.hpp"

using namespace oai;

namespace {

wire::ResponseEnvelope bare(Verb verb) {
  return wire::ResponseEnvelope{
      .verb = verb,
      .response_date = ResponseDate::parse("2001-06-05T09:00:00-06:00"),
      .request_url = "http://localhost/oai1?verb=" + std::string(to_string(verb)),
      .repository = std::nullopt,
      .formats = {},
      .identifiers = {},
      .records = {},
      .resumption_token = std::nullopt,
  };
}

}  // namespace

TEST_CASE("rendered envelopes bind every namespace prefix they use") {
  test::Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    const Verb verb = kAllVerbs[static_cast<std::size_t>(i) % kAllVerbs.size()];
    const std::string doc = wire::render_envelope(test::random_envelope(rng, verb));
    std::string error;
    CHECK_MESSAGE(test::namespace_well_formed(doc, &error), error);
  }
}

TEST_CASE("envelope root carries the per-verb namespace and schema location") {
  const std::string doc = wire::render_envelope(bare(Verb::ListSets));
  CHECK(doc.starts_with("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<ListSets"));
  CHECK(doc.find("xmlns=\"http://www.openarchives.org/OAI/OAI_ListSets\"") != std::string::npos);
  CHECK(doc.find("xsi:schemaLocation=\"http://www.openarchives.org/OAI/1.0/OAI_ListSets "
                 "http://www.openarchives.org/OAI/1.0/OAI_ListSets.xsd\"") != std::string::npos);
  CHECK(doc.find("<responseDate>2001-06-05T09:00:00-06:00</responseDate>") != std::string::npos);
}

TEST_CASE("parse(render(e)) == e for each verb") {
  test::Rng rng(22);
  for (Verb verb : kAllVerbs) {
    for (int i = 0; i < 50; ++i) {
      const auto env = test::random_envelope(rng, verb);
      const auto doc = wire::render_envelope(env);
      const auto parsed = wire::parse_list_response(doc, verb);
      CHECK(parsed.envelope == env);
      CHECK(parsed.token == env.resumption_token);
    }
  }
}

TEST_CASE("markup characters in text are escaped") {
  auto env = bare(Verb::Identify);
  env.request_url = "http://localhost/oai1?verb=Identify&x=<y>";
  env.repository = RepositoryDescription("A & B <\"repo\">", "http://localhost/oai1", {"a@b"});
  const auto doc = wire::render_envelope(env);
  CHECK(doc.find("<repositoryName>A &amp; B &lt;\"repo\"&gt;</repositoryName>") != std::string::npos);
  CHECK(doc.find("verb=Identify&amp;x=&lt;y&gt;") != std::string::npos);
  CHECK(wire::parse_list_response(doc, Verb::Identify).envelope == env);
}

TEST_CASE("body fields must match the verb") {
  auto env = bare(Verb::ListSets);
  env.identifiers.push_back({ItemIdentifier("x"), false});
  CHECK_THROWS_AS(wire::render_envelope(env), SerializationError);
  auto bad_payload = bare(Verb::GetRecord);
  bad_payload.records.emplace_back(RecordHeader{ItemIdentifier("x"), Datestamp(2000, 1, 1), false},
                                   XmlFragment("<a/><b/>"));
  CHECK_THROWS_AS(wire::render_envelope(bad_payload), SerializationError);
  auto spaced = bare(Verb::Identify);
  spaced.request_url = "http://x/ y";
  spaced.repository = RepositoryDescription("n", "http://x", {"a@b"});
  CHECK_THROWS_AS(wire::render_envelope(spaced), SerializationError);
}

TEST_CASE("deleted items in each list form") {
  auto ids = bare(Verb::ListIdentifiers);
  ids.identifiers = {{ItemIdentifier("record1"), false}, {ItemIdentifier("record3"), true}};
  const auto doc = wire::render_envelope(ids);
  CHECK(doc.find(" <identifier>record1</identifier>\n") != std::string::npos);
  CHECK(doc.find(" <identifier status=\"deleted\">record3</identifier>\n") != std::string::npos);

  auto recs = bare(Verb::ListRecords);
  recs.records.emplace_back(RecordHeader{ItemIdentifier("record3"), Datestamp(2000, 3, 13), true});
  const auto rdoc = wire::render_envelope(recs);
  CHECK(rdoc.find("<identifier status=\"deleted\">record3</identifier>") != std::string::npos);
  CHECK(rdoc.find("<metadata>") == std::string::npos);
  CHECK(wire::parse_list_response(rdoc, Verb::ListRecords).envelope == recs);
}

TEST_CASE("Dublin Core payloads") {
  const auto dc = wire::render_dc({{"title", "Item 2"}, {"creator", "A N Other"}});
  CHECK(dc.text().starts_with("<oai_dc "));
  CHECK(dc.text().find("xmlns=\"http://purl.org/dc/elements/1.1/\"") != std::string::npos);
  CHECK(dc.text().find("<title>Item 2</title>") != std::string::npos);
  CHECK(test::namespace_well_formed(dc.text()));
  CHECK(test::namespace_well_formed(wire::render_dc({}).text()));
  CHECK_THROWS_AS(wire::render_dc({{"author", "x"}}), UnknownDcElement);
  CHECK(wire::is_dc_element("rights"));
  CHECK_FALSE(wire::is_dc_element("Title"));
}

TEST_CASE("parser accepts the reference documents even with an unbound xsi prefix") {
  const auto doc = test::read_text_file(test::golden_dir() / "list_identifiers_all.xml");
  CHECK_FALSE(test::namespace_well_formed(doc));
  const auto parsed = wire::parse_list_response(doc, Verb::ListIdentifiers);
  REQUIRE(parsed.envelope.identifiers.size() == 3);
  CHECK(parsed.envelope.identifiers[2].identifier.value() == "record3");
  CHECK(parsed.envelope.identifiers[2].deleted);
  CHECK(parsed.envelope.request_url == "http://localhost/oai1?verb=ListIdentifiers&verb=ListIdentifiers");
  CHECK(parsed.envelope.response_date.str() == "2001-05-05T12:59:30-06:00");

  const auto rec = wire::parse_list_response(test::read_text_file(test::golden_dir() / "get_record_record2_oai_dc.xml"),
                                             Verb::GetRecord);
  REQUIRE(rec.envelope.records.size() == 1);
  REQUIRE(rec.envelope.records[0].metadata());
  CHECK(rec.envelope.records[0].metadata()->text().starts_with("<oai_dc"));
  CHECK(rec.envelope.records[0].metadata()->text().ends_with("</oai_dc>"));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(wire::parse_list_response("<ListSets", Verb::ListSets), ParseError);
  const auto doc = wire::render_envelope(bare(Verb::ListSets));
  CHECK_THROWS_AS(wire::parse_list_response(doc, Verb::Identify), VerbMismatch);
  CHECK_THROWS_AS(wire::parse_list_response("<ListSets><requestURL>x</requestURL></ListSets>", Verb::ListSets),
                  ParseError);
  CHECK_THROWS_AS(wire::parse_list_response("<!DOCTYPE x [<!ENTITY a 'b'>]><ListSets/>", Verb::ListSets), ParseError);
}

TEST_CASE("an empty resumptionToken element means no token") {
  auto env = bare(Verb::ListIdentifiers);
  std::string doc = wire::render_envelope(env);
  doc.insert(doc.rfind("</ListIdentifiers>"), " <resumptionToken> </resumptionToken>\n");
  CHECK_FALSE(wire::parse_list_response(doc, Verb::ListIdentifiers).token.has_value());
}

TEST_CASE("responseDate extraction and date-insensitive comparison") {
  auto a = bare(Verb::Identify);
  a.repository = RepositoryDescription("n", "http://localhost/oai1", {"a@b"});
  auto b = a;
  b.response_date = ResponseDate::parse("2002-01-01T00:00:00+00:00");
  const auto da = wire::render_envelope(a);
  const auto db = wire::render_envelope(b);
  CHECK(wire::extract_response_date(da) == a.response_date);
  CHECK(da != db);
  CHECK(wire::identify_equal_ignoring_date(da, db));
  auto c = a;
  c.repository = RepositoryDescription("m", "http://localhost/oai1", {"a@b"});
  CHECK_FALSE(wire::identify_equal_ignoring_date(da, wire::render_envelope(c)));
  CHECK_THROWS_AS(wire::identify_equal_ignoring_date("<Identify/>", da), ParseError);
  CHECK_THROWS_AS(wire::extract_response_date("<Identify/>"), ParseError);
}
