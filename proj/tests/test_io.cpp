#include "trop/io.hpp"

#include "test_support.hpp"

#include "doctest.h"

#include <random>

using namespace trop;
using troptest::random_diagram;

namespace {

Diagram fan_u6() {
  IndexingCategory shape = IndexingCategory::validate(
      {"O1", "O12", "O2"}, {{"O12", "O1"}, {"O12", "O2"}});
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  maps[{1, 0}] = {0, 0, 0, 1, 1, 1};
  maps[{1, 2}] = {0, 0, 1, 1, 2, 2};
  return Diagram::build_indexed(
      std::move(shape),
      {ProbSpace::uniform(2), ProbSpace::uniform(6), ProbSpace::uniform(3)},
      std::move(maps));
}

}  // namespace

TEST_CASE("diagram documents round-trip bit-exactly") {
  Diagram d = fan_u6();
  const std::string text = serialize_diagram(d);
  Diagram back = parse_diagram(text);
  CHECK(back == d);
  CHECK(serialize_diagram(back) == text);
}

TEST_CASE("random diagrams round-trip") {
  std::mt19937_64 rng(113);
  for (const IndexingCategory& shape :
       {IndexingCategory::full(2), IndexingCategory::chain(3),
        IndexingCategory::full(3)}) {
    for (int trial = 0; trial < 6; ++trial) {
      Diagram d = random_diagram(rng, shape, 5);
      CHECK(parse_diagram(serialize_diagram(d)) == d);
    }
  }
}

TEST_CASE("big rationals serialize as strings and round-trip") {
  const Rat tiny = rat_pow(Rat(1, 3), 50);
  std::vector<Atom> atoms{{"a", tiny}, {"b", 1 - tiny}};
  Diagram d = constant_diagram(IndexingCategory::chain(1),
                               ProbSpace(std::move(atoms)));
  Json doc = diagram_to_json(d);
  CHECK(doc["spaces"]["1"][0]["den"].is_string());
  CHECK(diagram_from_json(doc) == d);
}

TEST_CASE("mass sum errors name the object") {
  Json doc = diagram_to_json(fan_u6());
  doc["spaces"]["O1"][0]["num"] = 2;  // breaks the sum
  try {
    diagram_from_json(doc);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_space);
    CHECK(std::string(e.what()).find("O1") != std::string::npos);
  }
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_diagram(""), Error);
  try {
    parse_diagram("");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
  }
  CHECK_THROWS_AS(parse_diagram("{}"), Error);
  CHECK_THROWS_AS(parse_diagram("{\"category\": 3}"), Error);
}

TEST_CASE("rational string forms") {
  CHECK(rat_from_string("3/4") == Rat(3, 4));
  CHECK(rat_from_string("5") == Rat(5));
  CHECK(rat_to_string(Rat(3, 4)) == "3/4");
  CHECK(rat_to_string(Rat(5)) == "5");
  CHECK_THROWS_AS(rat_from_string("1/0"), Error);
  CHECK_THROWS_AS(rat_from_string("a/b"), Error);
}

TEST_CASE("fan documents round-trip") {
  TwoFan fan = uniform_fan(2, 3);
  Json doc = fan_to_json(fan);
  TwoFan back = fan_from_json(doc);
  CHECK(kd(back) == kd(fan));
  CHECK(back.top() == fan.top());
}

TEST_CASE("family documents parse") {
  Json member = diagram_to_json(constant_diagram(IndexingCategory::chain(1),
                                                 ProbSpace::uniform(2)));
  Json doc;
  doc["theta"] = Json::array({Json{{"label", "t0"}, {"num", 1}, {"den", 2}},
                              Json{{"label", "t1"}, {"num", 1}, {"den", 2}}});
  doc["members"] = Json{{"t0", member}, {"t1", member}};
  DiagramFamily family = family_from_json(doc);
  CHECK(family.parameter.size() == 2);
  CHECK(family.members.size() == 2);
  MixtureResult mixed = mix(family);
  CHECK(mixed.total.initial_space().size() == 4);
}

TEST_CASE("homogeneous input documents parse") {
  Json doc;
  doc["category"] = {{"objects", {"O1", "O12", "O2"}},
                     {"arrows", {{"O12", "O1"}, {"O12", "O2"}}}};
  doc["degree"] = 3;
  doc["group"] = {"(1 2)", "(1 2 3)"};
  doc["subgroups"] = {{"O12", Json::array()},
                      {"O1", {"(1 2)"}},
                      {"O2", {"(1 2 3)"}}};
  HomogeneousInput input = homogeneous_from_json(doc);
  CHECK(input.group.order() == 6);
  Diagram d = quotient_diagram(input.group, input.subgroups);
  CHECK(d.initial_space().size() == 6);
}

TEST_CASE("run config validation and environment override") {
  RunConfig config;
  CHECK_NOTHROW(config.validate());
  config.tolerance = 0.5;
  CHECK_THROWS_AS(config.validate(), Error);

  setenv("TROPICAL_CAP", "12", 1);
  CHECK(RunConfig::from_env().coupling_cap == 12);
  setenv("TROPICAL_CAP", "zero", 1);
  CHECK_THROWS_AS(RunConfig::from_env(), Error);
  unsetenv("TROPICAL_CAP");
  CHECK(RunConfig::from_env().coupling_cap == 30);
}
