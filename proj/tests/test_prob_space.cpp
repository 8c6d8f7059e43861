#include "trop/prob_space.hpp"

#include "test_support.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace trop;
using troptest::oracle_entropy;
using troptest::random_space;

TEST_CASE("entropy of uniform and skewed spaces") {
  CHECK(entropy(ProbSpace::uniform(6)) == doctest::Approx(std::log(6)).epsilon(1e-12));
  ProbSpace skew({{"a", Rat(1, 4)}, {"b", Rat(3, 4)}});
  CHECK(entropy(skew) == doctest::Approx(0.5623351446188083).epsilon(1e-9));
  CHECK(entropy(skew) == doctest::Approx(oracle_entropy(skew)).epsilon(1e-12));
  CHECK(entropy(ProbSpace::point()) == 0.0);
  CHECK(entropy(ProbSpace::uniform(7)) ==
        doctest::Approx(std::log(7)).epsilon(1e-12));
}

TEST_CASE("space validation rejects bad masses") {
  CHECK_THROWS_AS(ProbSpace({{"a", Rat(1, 2)}}), Error);
  CHECK_THROWS_AS(ProbSpace({{"a", Rat(1, 2)}, {"a", Rat(1, 2)}}), Error);
  CHECK_THROWS_AS(ProbSpace({{"a", Rat(0)}, {"b", Rat(1)}}), Error);
  CHECK_THROWS_AS(ProbSpace({{"a", Rat(3, 2)}, {"b", Rat(-1, 2)}}), Error);
}

TEST_CASE("tensor multiplies sizes and adds entropies") {
  ProbSpace u2 = ProbSpace::uniform(2);
  ProbSpace u3 = ProbSpace::uniform(3);
  ProbSpace prod = tensor(u2, u3);
  CHECK(prod.size() == 6);
  CHECK(isomorphic(prod, ProbSpace::uniform(6)));
  CHECK(isomorphic(tensor(u2, ProbSpace::point()), u2));

  ProbSpace skew({{"a", Rat(1, 4)}, {"b", Rat(3, 4)}});
  CHECK(entropy(tensor(skew, u2)) ==
        doctest::Approx(0.5623351446188083 + std::log(2)).epsilon(1e-9));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    ProbSpace x = random_space(rng, 5, "x");
    ProbSpace y = random_space(rng, 5, "y");
    CHECK(entropy(tensor(x, y)) ==
          doctest::Approx(entropy(x) + entropy(y)).epsilon(1e-12));
  }
}

TEST_CASE("tensor is commutative and associative up to isomorphism") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    ProbSpace x = random_space(rng, 4, "x");
    ProbSpace y = random_space(rng, 4, "y");
    ProbSpace z = random_space(rng, 3, "z");
    CHECK(isomorphic(tensor(x, y), tensor(y, x)));
    CHECK(isomorphic(tensor(tensor(x, y), z), tensor(x, tensor(y, z))));
  }
}

TEST_CASE("check_reduction verifies measure preservation exactly") {
  ProbSpace u4 = ProbSpace::uniform(4);
  ProbSpace u2 = ProbSpace::uniform(2);

  Reduction identity{u4, u4, {0, 1, 2, 3}};
  CHECK_NOTHROW(check_reduction(identity));

  Reduction parity{u4, u2, {0, 1, 0, 1}};
  CHECK_NOTHROW(check_reduction(parity));

  ProbSpace u3 = ProbSpace::uniform(3);
  Reduction bad{u3, u2, {0, 1, 0}};
  try {
    check_reduction(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::mass_mismatch);
  }

  Reduction not_onto{u4, u2, {0, 0, 0, 0}};
  try {
    check_reduction(not_onto);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_surjective);
  }
}

TEST_CASE("pushforward aggregates masses") {
  ProbSpace u4 = ProbSpace::uniform(4);
  auto [point, to_point] = pushforward(u4, [](const std::string&) {
    return std::string("*");
  });
  CHECK(point.size() == 1);
  CHECK_NOTHROW(check_reduction(to_point));

  auto [copy, id] = pushforward(u4, [](const std::string& l) { return l; });
  CHECK(isomorphic(copy, u4));

  ProbSpace u6 = ProbSpace::uniform(6);
  auto [half, r] = pushforward(u6, [](const std::string& l) {
    return std::to_string(std::stoi(l) / 3);
  });
  CHECK(half.size() == 2);
  CHECK(half.mass(0) == Rat(1, 2));
  CHECK(half.mass(1) == Rat(1, 2));
  CHECK(isomorphic(half, ProbSpace::uniform(2)));
}

TEST_CASE("pushforward never increases entropy") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    ProbSpace x = random_space(rng, 6, "x");
    std::uniform_int_distribution<int> classes(1, 3);
    const int k = classes(rng);
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::map<std::string, std::string> images;
    for (const Atom& a : x.atoms())
      images[a.label] = "c" + std::to_string(pick(rng));
    auto [y, r] = pushforward(
        x, [&images](const std::string& l) { return images.at(l); });
    CHECK(entropy(y) <= entropy(x) + 1e-12);
  }
}

TEST_CASE("label joins stay unambiguous under nesting") {
  // ("a,b", "c") and ("a", "b,c") must not collide.
  CHECK(join_labels("a,b", "c") != join_labels("a", "b,c"));
  CHECK(join_labels("x\\", "y") != join_labels("x", "\\y"));
}
