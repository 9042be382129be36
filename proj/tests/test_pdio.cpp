// Text formats: the presentation grammar, the grid JSON schema, their
// canonical serializers, and positioned error reporting.
#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"

using namespace flange;
using testsupport::desk_params;
using testsupport::kind_for;

namespace {

const std::string kIntervalText = "pmod 1 2\ngens 1\n0\nrels 1\n3 1\n";

ParseError capture_parse_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError(0, 0, "unreachable");
}

Presentation random_presentation(std::mt19937_64& rng, int n, const FieldSpec& field) {
  Presentation p;
  p.n = n;
  p.field = field;
  int gens = 1 + static_cast<int>(testsupport::draw(rng, 3));
  for (int g = 0; g < gens; ++g) {
    Degree d = Degree::zero(n);
    for (int i = 0; i < n; ++i) d[i] = static_cast<int>(testsupport::draw(rng, 3));
    p.gens.push_back(std::move(d));
  }
  int rels = static_cast<int>(testsupport::draw(rng, 4));
  for (int r = 0; r < rels; ++r) {
    Presentation::Relation rel;
    rel.degree = p.gens[testsupport::draw(rng, gens)];
    for (int i = 0; i < n; ++i) rel.degree[i] += static_cast<int>(testsupport::draw(rng, 2));
    for (int g = 0; g < gens; ++g) {
      if (p.gens[g].leq(rel.degree)) {
        std::int64_t num = static_cast<std::int64_t>(testsupport::draw(rng, 5)) - 2;
        rel.coeffs.push_back(field.characteristic() == 0 && num != 0 && testsupport::draw(rng, 2)
                                 ? field.make(num, 2)
                                 : field.from_int(num));
      } else {
        rel.coeffs.push_back(field.zero());
      }
    }
    p.rels.push_back(std::move(rel));
  }
  return p;
}

}  // namespace

TEST_CASE("parsing the single-interval presentation") {
  Presentation p = parse_presentation(kIntervalText);
  CHECK(p.n == 1);
  CHECK(p.field.characteristic() == 2);
  REQUIRE(p.gens == std::vector<Degree>{Degree{0}});
  REQUIRE(p.rels.size() == 1);
  CHECK(p.rels[0].degree == Degree{3});
  CHECK(p.rels[0].coeffs == std::vector<Scalar>{p.field.one()});

  GridModule m = realize_presentation(p);
  CHECK(m.box() == Box(Degree{-1}, Degree{4}));
  std::map<Degree, int> expect{{Degree{-1}, 0}, {Degree{0}, 1}, {Degree{1}, 1},
                               {Degree{2}, 1},  {Degree{3}, 0}, {Degree{4}, 0}};
  CHECK(dimension_vector(m) == expect);
  CHECK(validate(m).ok());
}

TEST_CASE("parsing the planar quotient by both variables") {
  Presentation p = parse_presentation("pmod 2 2\ngens 1\n0 0\nrels 2\n1 0 1\n0 1 1\n");
  GridModule m = realize_presentation(p);
  Degree q = m.box().low();
  do {
    CHECK(m.dim_at(q) == (q == Degree{0, 0} ? 1 : 0));
  } while (m.box().next_point(q));
}

TEST_CASE("empty relation lists give free modules") {
  Presentation p = parse_presentation("pmod 1 3\ngens 2\n0\n1\nrels 0\n");
  GridModule m = realize_presentation(p);
  CHECK(m.box() == Box(Degree{-1}, Degree{2}));
  std::map<Degree, int> expect{{Degree{-1}, 0}, {Degree{0}, 1}, {Degree{1}, 2}, {Degree{2}, 2}};
  CHECK(dimension_vector(m) == expect);
}

TEST_CASE("comments and irregular whitespace are tolerated") {
  std::string text =
      "# a module\n"
      "pmod 1 2   # one parameter, binary field\n"
      "  gens 1\n\n"
      "0 # the generator\n"
      "rels 1\n"
      "3    1\n";
  CHECK(parse_presentation(text) == parse_presentation(kIntervalText));
}

TEST_CASE("presentations round trip bit-exactly") {
  CHECK(serialize_presentation(parse_presentation(kIntervalText)) == kIntervalText);

  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 30; ++trial) {
    FieldSpec field(trial % 3 == 0 ? 0 : trial % 3 == 1 ? 2 : 5);
    Presentation p = random_presentation(rng, 1 + trial % 3, field);
    std::string text = serialize_presentation(p);
    CHECK(parse_presentation(text) == p);
    CHECK(serialize_presentation(parse_presentation(text)) == text);
  }
}

TEST_CASE("parse errors carry the offending line and column") {
  SECTION("composite characteristic") {
    ParseError e = capture_parse_error([] { parse_presentation("pmod 1 4\ngens 0\nrels 0\n"); });
    CHECK(e.line == 1);
    CHECK(e.column == 8);
  }

  SECTION("wrong leading keyword") {
    ParseError e = capture_parse_error([] { parse_presentation("pmods 1 2\n"); });
    CHECK(e.line == 1);
    CHECK(e.column == 1);
  }

  SECTION("truncated input") {
    ParseError e = capture_parse_error([] { parse_presentation("pmod 1 2\ngens 1\n"); });
    CHECK(e.line == 2);
    CHECK(e.column == 7);
  }

  SECTION("malformed scalar") {
    ParseError e =
        capture_parse_error([] { parse_presentation("pmod 1 2\ngens 1\n0\nrels 1\n3 x\n"); });
    CHECK(e.line == 5);
    CHECK(e.column == 3);
  }

  SECTION("trailing junk") {
    ParseError e =
        capture_parse_error([] { parse_presentation(kIntervalText + "extra\n"); });
    CHECK(e.line == 6);
  }
}

TEST_CASE("nonzero coefficients demand dominated generators") {
  CHECK_THROWS_AS(parse_presentation("pmod 1 2\ngens 1\n2\nrels 1\n1 1\n"), DegreeViolation);
  // A zero coefficient pairs fine with a non-dominated generator.
  CHECK_NOTHROW(parse_presentation("pmod 1 2\ngens 1\n2\nrels 1\n1 0\n"));
}

TEST_CASE("grid JSON round trips bit-exactly") {
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    std::int64_t p = seed % 4 == 3 ? 5 : seed % 4 == 2 ? 0 : 2;
    GridModule m = random_module(
        desk_params(1 + static_cast<int>(seed % 3), 4000 + seed, kind_for(seed), p));
    std::string text = serialize_grid(m);
    GridModule back = parse_grid(text);
    CHECK(back == m);
    CHECK(serialize_grid(back) == text);
  }
}

TEST_CASE("a minimal hand-written grid file parses") {
  std::string text =
      R"({"n":1,"p":2,"box":{"low":[-1],"high":[1]},"dims":[0,1,0],"maps":[[[[]],[]]]})";
  GridModule m = parse_grid(text);
  CHECK(m.box() == Box(Degree{-1}, Degree{1}));
  CHECK(m.dim_at(Degree{0}) == 1);
  CHECK(m.dim_at(Degree{-1}) == 0);
  CHECK(m.dim_at(Degree{1}) == 0);
  CHECK(validate(m).ok());
}

TEST_CASE("grid schema violations carry their JSON path") {
  auto path_of = [](const std::string& text) {
    return capture_parse_error([&] { parse_grid(text); }).path;
  };

  CHECK(path_of("not json at all") == "$");
  CHECK(path_of(R"([1,2,3])") == "$");
  CHECK(path_of(R"({"n":0,"p":2})") == "$.n");
  CHECK(path_of(R"({"n":1,"p":4})") == "$.p");
  CHECK(path_of(R"({"n":1,"p":2,"box":{"low":[2],"high":[1]},"dims":[],"maps":[[]]})") ==
        "$.box");
  CHECK(path_of(R"({"n":1,"p":2,"box":{"low":[0],"high":[1]},"dims":[1],"maps":[[]]})") ==
        "$.dims");
  CHECK(path_of(R"({"n":1,"p":2,"box":{"low":[0],"high":[1]},"dims":[1,-1],"maps":[[]]})") ==
        "$.dims[1]");
  CHECK(path_of(
            R"({"n":1,"p":2,"box":{"low":[0],"high":[1]},"dims":[1,1],"maps":[[]]})") ==
        "$.maps[0]");
  CHECK(path_of(
            R"({"n":1,"p":2,"box":{"low":[0],"high":[1]},"dims":[1,1],"maps":[[[[1]],[[1]]]]})") ==
        "$.maps[0]");
  CHECK(path_of(
            R"({"n":1,"p":2,"box":{"low":[0],"high":[1]},"dims":[1,1],"maps":[[[[1],[1]]]]})") ==
        "$.maps[0][0]");
  // A matrix entry that is not a scalar of the field.
  CHECK(path_of(
            R"({"n":1,"p":2,"box":{"low":[0],"high":[1]},"dims":[1,1],"maps":[[[["x"]]]]})")
            .substr(0, 12) == "$.maps[0][0]");
}

TEST_CASE("realized dimensions match the rank computation at every point") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 12; ++trial) {
    FieldSpec field(trial % 2 ? 5 : 2);
    Presentation p = random_presentation(rng, 1 + trial % 2, field);
    GridModule m = realize_presentation(p);
    REQUIRE(validate(m).ok());
    Degree q = m.box().low();
    do {
      std::vector<int> active_gens, active_rels;
      for (int g = 0; g < static_cast<int>(p.gens.size()); ++g)
        if (p.gens[g].leq(q)) active_gens.push_back(g);
      for (int r = 0; r < static_cast<int>(p.rels.size()); ++r)
        if (p.rels[r].degree.leq(q)) active_rels.push_back(r);
      Matrix coeffs(field, static_cast<int>(active_gens.size()),
                    static_cast<int>(active_rels.size()));
      for (int row = 0; row < coeffs.rows(); ++row)
        for (int col = 0; col < coeffs.cols(); ++col)
          coeffs.set(row, col, p.rels[active_rels[col]].coeffs[active_gens[row]]);
      CHECK(m.dim_at(q) == static_cast<int>(active_gens.size()) - rank_of(coeffs));
    } while (m.box().next_point(q));
  }
}
