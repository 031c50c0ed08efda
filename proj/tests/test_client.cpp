#include <doctest.h>

#include <sstream>

#include "oai/client.hpp"
#include "support/loopback.hpp"
#include "support/random_fixtures.hpp"

using namespace oai;
using namespace std::chrono;
using client::ClientConfig;
using client::OaiClient;

namespace {

const Instant kStart = sys_days{year{2001} / 6 / 5};

ClientConfig config(HttpMethod method = HttpMethod::Post) {
  ClientConfig cfg;
  cfg.contact_email = "harvester@example.org";
  cfg.user_agent = "test-agent/1";
  cfg.method = method;
  cfg.verbose = true;
  return cfg;
}

const OaiRequest kListIds{Verb::ListIdentifiers, {{"from", "2001-06-05"}}};

TransportError::Kind failure_kind(OaiClient& c) {
  try {
    c.get("http://a/oai", kListIds);
  } catch (const TransportError& e) {
    return e.kind();
  }
  FAIL("expected TransportError");
  return TransportError::Kind::HttpError;
}

}  // namespace

TEST_CASE("identification headers and POST form body") {
  VirtualClock clock(kStart);
  test::ScriptedTransport t(clock, {test::ok("<x/>")});
  std::ostringstream log;
  OaiClient c(config(), t, clock, log);
  const auto r = c.get("http://a/oai", kListIds);
  CHECK(r.body == "<x/>");
  CHECK(r.url == "http://a/oai");
  REQUIRE(t.log().size() == 1);
  const auto& req = t.log()[0].request;
  CHECK(req.method == HttpMethod::Post);
  CHECK(req.url == "http://a/oai");
  CHECK(req.body == "verb=ListIdentifiers&from=2001-06-05");
  CHECK(find_header(req.headers, "From") == "harvester@example.org");
  CHECK(find_header(req.headers, "User-Agent") == "test-agent/1");
  CHECK(find_header(req.headers, "Content-Type") == "application/x-www-form-urlencoded");
  CHECK(log.str() == "OAIGet: Doing POST to http://a/oai args: verb=ListIdentifiers&from=2001-06-05\n"
                     "OAIGet: Got 200 OK (4bytes)\n");
}

TEST_CASE("GET puts the arguments in the query") {
  VirtualClock clock(kStart);
  test::ScriptedTransport t(clock, {test::ok("<x/>")});
  std::ostringstream log;
  OaiClient c(config(HttpMethod::Get), t, clock, log);
  c.get("http://a/oai?stale=1", kListIds);
  CHECK(t.log()[0].request.url == "http://a/oai?verb=ListIdentifiers&from=2001-06-05");
  CHECK(t.log()[0].request.body.empty());
}

TEST_CASE("503 waits Retry-After on the injected clock, then retries") {
  VirtualClock clock(kStart);
  test::ScriptedTransport t(clock, {test::unavailable("60"), test::ok("<x/>")});
  std::ostringstream log;
  OaiClient c(config(), t, clock, log);
  CHECK(c.get("http://a/oai", kListIds).body == "<x/>");
  CHECK(clock.sleeps() == std::vector<seconds>{seconds{60}});
  REQUIRE(t.log().size() == 2);
  CHECK(t.log()[1].at - t.log()[0].at == seconds{60});
  CHECK(log.str().find("OAIGet: Got 503, sleeping for 60 seconds...\nOAIGet: Woken again, retrying...\n") !=
        std::string::npos);
}

TEST_CASE("missing or non-integer Retry-After falls back to the default") {
  VirtualClock clock(kStart);
  test::ScriptedTransport t(clock, {test::unavailable(std::nullopt),
                                    test::unavailable("Wed, 21 Oct 2015 07:28:00 GMT"), test::ok("<x/>")});
  std::ostringstream log;
  auto cfg = config();
  cfg.default_retry = seconds{17};
  OaiClient c(cfg, t, clock, log);
  c.get("http://a/oai", kListIds);
  CHECK(clock.sleeps() == std::vector<seconds>{seconds{17}, seconds{17}});
  CHECK(log.str().find("Unusable Retry-After") != std::string::npos);
}

TEST_CASE("max_retries consecutive 503s exhaust the client") {
  VirtualClock clock(kStart);
  std::vector<HttpResponse> script(10, test::unavailable("5"));
  test::ScriptedTransport t(clock, script);
  std::ostringstream log;
  auto cfg = config();
  cfg.max_retries = 3;
  OaiClient c(cfg, t, clock, log);
  CHECK(failure_kind(c) == TransportError::Kind::RetriesExhausted);
  CHECK(t.log().size() == 4);
}

TEST_CASE("302 is followed with the same method, body and arguments") {
  VirtualClock clock(kStart);
  test::ScriptedTransport t(clock, {test::redirect("http://b/mirror/?verb=ListIdentifiers&from=2001-06-05"),
                                    test::ok("<y/>")});
  std::ostringstream log;
  OaiClient c(config(), t, clock, log);
  const auto r = c.get("http://a/oai", kListIds);
  CHECK(r.body == "<y/>");
  CHECK(r.url == "http://b/mirror/");
  REQUIRE(t.log().size() == 2);
  CHECK(t.log()[1].request.method == HttpMethod::Post);
  CHECK(t.log()[1].request.url == "http://b/mirror/");
  CHECK(t.log()[1].request.body == t.log()[0].request.body);
  CHECK(log.str().find("OAIGet: Got 302, redirecting to http://b/mirror/?...\n") != std::string::npos);
}

TEST_CASE("redirect chains beyond max_redirects are a loop") {
  VirtualClock clock(kStart);
  std::vector<HttpResponse> script(10, test::redirect("http://a/oai"));
  test::ScriptedTransport t(clock, script);
  std::ostringstream log;
  auto cfg = config();
  cfg.max_redirects = 2;
  OaiClient c(cfg, t, clock, log);
  CHECK(failure_kind(c) == TransportError::Kind::RedirectLoop);
  CHECK(t.log().size() == 3);
}

TEST_CASE("other statuses are HTTP errors") {
  VirtualClock clock(kStart);
  test::ScriptedTransport t(clock, {HttpResponse{400, "text/plain", {}, "No verb specified!"}});
  std::ostringstream log;
  OaiClient c(config(), t, clock, log);
  try {
    c.get("http://a/oai", kListIds);
    FAIL("expected HttpError");
  } catch (const TransportError& e) {
    CHECK(e.kind() == TransportError::Kind::HttpError);
    CHECK(e.status() == 400);
  }
  test::ScriptedTransport no_location(clock, {HttpResponse{302, "text/plain", {}, ""}});
  OaiClient c2(config(), no_location, clock, log);
  CHECK(failure_kind(c2) == TransportError::Kind::HttpError);
}

TEST_CASE("random 503/302 scripts: bounded requests and Retry-After respected") {
  test::Rng rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    VirtualClock clock(kStart);
    std::vector<HttpResponse> script;
    std::vector<seconds> advertised;
    for (int i = 0; i < 14; ++i) {
      const auto roll = std::uniform_int_distribution<int>(0, 3)(rng);
      if (roll == 0) {
        script.push_back(test::ok("<z/>"));
      } else if (roll == 1) {
        script.push_back(test::redirect("http://m" + std::to_string(i) + "/oai"));
      } else {
        const int s = std::uniform_int_distribution<int>(0, 120)(rng);
        script.push_back(test::unavailable(std::to_string(s)));
      }
    }
    test::ScriptedTransport t(clock, script);
    std::ostringstream log;
    auto cfg = config();
    cfg.max_retries = 3;
    cfg.max_redirects = 2;
    OaiClient c(cfg, t, clock, log);
    try {
      c.get("http://a/oai", kListIds);
    } catch (const TransportError&) {
    }
    CHECK(t.log().size() <= static_cast<std::size_t>(1 + cfg.max_retries + cfg.max_redirects));
    for (std::size_t i = 1; i < t.log().size(); ++i) {
      const auto& prev = script[i - 1];
      if (prev.status == 503) {
        CHECK(t.log()[i].at - t.log()[i - 1].at >= seconds{std::stoi(std::string(*prev.header("Retry-After")))});
      }
      CHECK(t.log()[i].request.body == t.log()[0].request.body);
    }
  }
}

TEST_CASE("client refuses to run anonymously") {
  VirtualClock clock(kStart);
  test::ScriptedTransport t(clock, {});
  std::ostringstream log;
  auto cfg = config();
  cfg.contact_email = " ";
  CHECK_THROWS_AS(OaiClient(cfg, t, clock, log), InvalidValue);
  cfg = config();
  cfg.max_retries = 0;
  CHECK_THROWS_AS(OaiClient(cfg, t, clock, log), InvalidValue);
}

TEST_CASE("base_of strips query and fragment") {
  CHECK(client::base_of("http://a/b?x=1#f") == "http://a/b");
  CHECK(client::base_of("http://a/b#f") == "http://a/b");
  CHECK(client::base_of("http://a/b") == "http://a/b");
}
