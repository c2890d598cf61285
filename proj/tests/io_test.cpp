#include "doctest.h"

#include <random>
#include <sstream>

#include "krig/io.hpp"
#include "support/instances.hpp"

using namespace krig;

namespace {

IngestResult parse(const std::string& text,
                   std::optional<std::size_t> hint = {}) {
  std::istringstream in(text);
  return ingest_csv_stream(in, "test.csv", hint);
}

}  // namespace

TEST_CASE("ingest parses 1-D, 2-D and 3-D files") {
  const IngestResult one = parse("x,value\n0,1.0\n1,2.0\n");
  CHECK(one.samples.size() == 2);
  CHECK(one.samples.dim() == 1);
  CHECK(one.samples.values == std::vector<double>{1.0, 2.0});
  CHECK(one.header == std::vector<std::string>{"x", "value"});

  const IngestResult two = parse("x,y,value\n0,0,1\n1,0,2\n0,1,3\n");
  CHECK(two.samples.size() == 3);
  CHECK(two.samples.dim() == 2);

  const IngestResult three = parse("x,y,z,value\n0,0,0,1\n1,1,1,2\n");
  CHECK(three.samples.dim() == 3);
  CHECK(three.samples.locations[1].coords ==
        std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("ingest tolerates blank lines, padding and CRLF endings") {
  const IngestResult r =
      parse("x,value\r\n 1.5 , 2.5 \r\n\n -0.25 ,1e3\r\n");
  CHECK(r.samples.size() == 2);
  CHECK(r.samples.locations[0].coords[0] == 1.5);
  CHECK(r.samples.values[0] == 2.5);
  CHECK(r.samples.locations[1].coords[0] == -0.25);
  CHECK(r.samples.values[1] == 1000.0);
}

TEST_CASE("ingest rejects malformed input with the offending line number") {
  SUBCASE("NaN cell") {
    try {
      parse("x,value\n0,1.0\n1,NaN\n");
      FAIL("expected a parse_error");
    } catch (const Error& e) {
      CHECK(e.code() == errc::parse_error);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("overflowing cell") {
    CHECK_THROWS_AS(parse("x,value\n0,1e999\n"), Error);
  }
  SUBCASE("non-numeric cell") {
    try {
      parse("x,value\nzero,1.0\n");
      FAIL("expected a parse_error");
    } catch (const Error& e) {
      CHECK(e.code() == errc::parse_error);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
      CHECK(std::string(e.what()).find("zero") != std::string::npos);
    }
  }
  SUBCASE("inconsistent column count") {
    try {
      parse("x,y,value\n0,0,1\n1,2\n");
      FAIL("expected a parse_error");
    } catch (const Error& e) {
      CHECK(e.code() == errc::parse_error);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("empty cell") {
    CHECK_THROWS_AS(parse("x,value\n0,\n"), Error);
  }
  SUBCASE("empty file and header-only file") {
    CHECK_THROWS_AS(parse(""), Error);
    CHECK_THROWS_AS(parse("x,value\n"), Error);
  }
  SUBCASE("unsupported column counts") {
    CHECK_THROWS_AS(parse("value\n1\n"), Error);
    CHECK_THROWS_AS(parse("a,b,c,d,e\n1,2,3,4,5\n"), Error);
  }
}

TEST_CASE("dimension hint must match the file") {
  CHECK(parse("x,y,value\n0,0,1\n", 2).samples.dim() == 2);
  try {
    parse("x,y,value\n0,0,1\n", 3);
    FAIL("expected an invalid_argument error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::invalid_argument);
  }
}

TEST_CASE("duplicate locations are warnings at ingest time") {
  const IngestResult r = parse("x,value\n0,1\n1,2\n0,3\n");
  CHECK(r.samples.size() == 3);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("rows 2 and 4") != std::string::npos);

  CHECK(parse("x,value\n0,1\n1,2\n").warnings.empty());
}

TEST_CASE("missing file is an io_error") {
  try {
    ingest_csv("/nonexistent/krig/data.csv");
    FAIL("expected an io_error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::io_error);
    CHECK(e.is_user_error());
  }
}

TEST_CASE("write then ingest round-trips samples exactly") {
  std::mt19937_64 rng(4242);
  for (std::size_t d = 1; d <= 3; ++d) {
    SampleSet samples;
    samples.locations = testsupport::jittered_lattice(rng, 9, d);
    samples.values = testsupport::random_values(rng, 9);
    samples.values[0] = 0.1;  // not exactly representable in binary
    samples.values[1] = -1.0 / 3.0;
    samples.values[2] = 1e-300;

    std::ostringstream out;
    write_csv(out, samples);
    const IngestResult back = parse(out.str());

    REQUIRE(back.samples.size() == samples.size());
    CHECK(back.samples.values == samples.values);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      CHECK(back.samples.locations[i].coords == samples.locations[i].coords);
    }
  }
}

TEST_CASE("write_csv emits the canonical header") {
  SampleSet samples{{{1.0, 2.0}}, {3.0}};
  std::ostringstream out;
  write_csv(out, samples);
  CHECK(out.str().substr(0, 10) == "x,y,value\n");
}
