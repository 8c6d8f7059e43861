#include "trop/coupling.hpp"

#include "test_support.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace trop;
using troptest::grid_min_coupling_entropy;
using troptest::random_space;
using troptest::single_space;

namespace {

TwoFan fan_from_maps(const ProbSpace& top, const ProbSpace& left,
                     const ProbSpace& right, std::vector<std::size_t> f,
                     std::vector<std::size_t> g) {
  const IndexingCategory shape = IndexingCategory::chain(1);
  return TwoFan::build(constant_diagram(shape, top),
                       constant_diagram(shape, left),
                       constant_diagram(shape, right), {std::move(f)},
                       {std::move(g)});
}

std::vector<Rat> masses_of(const ProbSpace& s) {
  std::vector<Rat> out;
  for (const Atom& a : s.atoms()) out.push_back(a.mass);
  return out;
}

}  // namespace

TEST_CASE("kd of the U6 fan and of identity fans") {
  std::vector<std::size_t> f(6), g(6);
  for (std::size_t k = 0; k < 6; ++k) {
    f[k] = k / 3;
    g[k] = k / 2;
  }
  TwoFan fan = fan_from_maps(ProbSpace::uniform(6), ProbSpace::uniform(2),
                             ProbSpace::uniform(3), f, g);
  CHECK(kd(fan) == doctest::Approx(1.791759469228055).epsilon(1e-9));

  ProbSpace x({{"a", Rat(1, 3)}, {"b", Rat(2, 3)}});
  TwoFan id = fan_from_maps(x, x, x, {0, 1}, {0, 1});
  CHECK(kd(id) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("minimal reduction of the digit fan collapses duplicate pairs") {
  TwoFan fan = uniform_fan(2, 3);
  CHECK(fan.top().initial_space().size() == 4);
  // Oracle: aggregate the digit pairs directly.
  std::map<std::pair<std::size_t, std::size_t>, Rat> pairs;
  for (std::size_t k = 0; k < 6; ++k) pairs[{k / 3, k / 2}] += Rat(1, 6);
  std::vector<Rat> masses;
  for (const auto& [key, mass] : pairs) masses.push_back(mass);
  const double oracle_kd = 2 * troptest::oracle_entropy(masses) -
                           std::log(2) - std::log(3);
  CHECK(kd(fan) == doctest::Approx(oracle_kd).epsilon(1e-12));
  CHECK(kd(fan) == doctest::Approx(0.8675632284814612).epsilon(1e-9));
}

TEST_CASE("uniform fan edge cases") {
  TwoFan same = uniform_fan(2, 2);
  CHECK(same.top().initial_space().size() == 2);
  CHECK(kd(same) == doctest::Approx(0.0).epsilon(1e-12));

  TwoFan point = uniform_fan(1, 5);
  CHECK(kd(point) == doctest::Approx(std::log(5)).epsilon(1e-12));

  TwoFan f25 = uniform_fan(2, 5);
  CHECK(kd(f25) == doctest::Approx(1.1935496040981335).epsilon(1e-9));
  TwoFan f34 = uniform_fan(3, 4);
  CHECK(kd(f34) == doctest::Approx(0.9241962407465929).epsilon(1e-9));
}

TEST_CASE("exact minimum-entropy couplings on small marginals") {
  ProbSpace fair = ProbSpace::uniform(2);
  CouplingMatrix diag = min_entropy_coupling_exact(fair, fair);
  diag.check();
  CHECK(diag.entropy() == doctest::Approx(std::log(2)).epsilon(1e-12));
  CHECK(diag.entries.size() == 2);

  ProbSpace skew({{"a", Rat(1, 4)}, {"b", Rat(3, 4)}});
  CouplingMatrix c = min_entropy_coupling_exact(fair, skew);
  c.check();
  CHECK(c.entropy() == doctest::Approx(1.0397207708399179).epsilon(1e-9));
  std::vector<Rat> masses = {std::get<2>(c.entries[0])};
  for (std::size_t i = 1; i < c.entries.size(); ++i)
    masses.push_back(std::get<2>(c.entries[i]));
  std::sort(masses.begin(), masses.end());
  CHECK(masses == std::vector<Rat>{Rat(1, 4), Rat(1, 4), Rat(1, 2)});

  CouplingMatrix u23 =
      min_entropy_coupling_exact(ProbSpace::uniform(2), ProbSpace::uniform(3));
  CHECK(u23.entropy() == doctest::Approx(1.3296613488547582).epsilon(1e-9));

  CHECK_THROWS_AS(min_entropy_coupling_exact(ProbSpace::uniform(8),
                                             ProbSpace::uniform(8)),
                  Error);
}

TEST_CASE("vertex minimum matches the dense-grid oracle on spot instances") {
  ProbSpace p({{"a", Rat(1, 3)}, {"b", Rat(2, 3)}});
  ProbSpace q({{"x", Rat(1, 6)}, {"y", Rat(1, 2)}, {"z", Rat(1, 3)}});
  CouplingMatrix c = min_entropy_coupling_exact(p, q);
  const double grid =
      grid_min_coupling_entropy(masses_of(p), masses_of(q), 60);
  CHECK(c.entropy() == doctest::Approx(grid).epsilon(1e-9));
}

TEST_CASE("vertex enumeration is deterministic") {
  ProbSpace p({{"a", Rat(1, 2)}, {"b", Rat(1, 2)}});
  ProbSpace q({{"x", Rat(1, 4)}, {"y", Rat(3, 4)}});
  CouplingMatrix first = min_entropy_coupling_exact(p, q);
  CouplingMatrix second = min_entropy_coupling_exact(p, q);
  CHECK(first.entries == second.entries);
}

TEST_CASE("grouped greedy coupling") {
  // Identical marginals couple diagonally.
  GreedyCoupling same = min_entropy_coupling_greedy(
      {{Rat(1, 4), BigInt(4)}}, {{Rat(1, 4), BigInt(4)}});
  CHECK(same.entropy == doctest::Approx(std::log(4)).epsilon(1e-12));

  GreedyCoupling u49 = min_entropy_coupling_greedy(
      {{Rat(1, 4), BigInt(4)}}, {{Rat(1, 9), BigInt(9)}});
  CHECK(u49.entropy == doctest::Approx(2.3512572841273185).epsilon(1e-9));

  GreedyCoupling mixed = min_entropy_coupling_greedy(
      {{Rat(1, 2), BigInt(2)}},
      {{Rat(1, 4), BigInt(1)}, {Rat(3, 4), BigInt(1)}});
  CHECK(mixed.entropy == doctest::Approx(1.0397207708399179).epsilon(1e-9));
}

TEST_CASE("greedy on atoms agrees with the grouped variant") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    ProbSpace p = random_space(rng, 5, "p");
    ProbSpace q = random_space(rng, 5, "q");
    CouplingMatrix atoms = greedy_coupling_atoms(p, q);
    atoms.check();
    std::vector<GroupedMass> gp, gq;
    for (const Atom& a : p.atoms()) gp.push_back({a.mass, BigInt(1)});
    for (const Atom& a : q.atoms()) gq.push_back({a.mass, BigInt(1)});
    GreedyCoupling grouped = min_entropy_coupling_greedy(gp, gq);
    CHECK(atoms.entropy() == doctest::Approx(grouped.entropy).epsilon(1e-9));
    CHECK(atoms.entries.size() <= p.size() + q.size() - 1);
  }
}

TEST_CASE("ikd of a diagram with itself is zero and exact") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    Diagram d =
        troptest::random_diagram(rng, IndexingCategory::full(2), 5);
    IkdResult r = ikd(d, d);
    CHECK(r.bound.upper == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.bound.lower == 0.0);
    CHECK(r.bound.exact);
  }
}

TEST_CASE("ikd of U2 and U3") {
  Diagram u2 = single_space(ProbSpace::uniform(2));
  Diagram u3 = single_space(ProbSpace::uniform(3));
  IkdResult r = ikd(u2, u3, CouplingMode::exact);
  CHECK(r.bound.upper == doctest::Approx(0.8675632284814614).epsilon(1e-9));
  CHECK(r.bound.lower ==
        doctest::Approx(0.4054651081081644).epsilon(1e-9));
  CHECK(r.bound.exact);  // single object
  r.coupling.check();
  // The closed-form cap.
  CHECK(r.bound.upper <= 2 * std::log(2) + std::log(3.0 / 2.0) + 1e-9);
}

TEST_CASE("ikd in greedy mode still dominates the entropy gap") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 15; ++trial) {
    Diagram x = single_space(random_space(rng, 4, "x"));
    Diagram y = single_space(random_space(rng, 4, "y"));
    IkdResult greedy = ikd(x, y, CouplingMode::greedy);
    CHECK(greedy.bound.upper + 1e-9 >= greedy.bound.lower);
    IkdResult exact = ikd(x, y, CouplingMode::exact);
    CHECK(exact.bound.upper <= greedy.bound.upper + 1e-9);
  }
}

TEST_CASE("exact ikd via initial couplings matches a dense grid on fans") {
  // Validates the reduction to initial-space couplings against brute
  // force: every grid coupling induces a fan whose kd cannot beat the
  // vertex minimum.
  std::mt19937_64 rng(53);
  auto random_table = [&rng]() {
    // Weights over a common denominator of 12 keep the grid tractable.
    std::uniform_int_distribution<int> first(1, 10);
    const int a = first(rng);
    std::uniform_int_distribution<int> second(1, 11 - a);
    const int b = second(rng);
    const int c = 12 - a - b;
    JointTable table;
    table.axis_labels = {{"0", "1"}, {"0", "1"}};
    table.cells = {{{0, 0}, Rat(a, 12)},
                   {{0, 1}, Rat(b, 12)},
                   {{1, 1}, Rat(c, 12)}};
    return table;
  };
  for (int trial = 0; trial < 4; ++trial) {
    Diagram x = lambda_diagram(random_table());
    Diagram y = lambda_diagram(random_table());
    IkdResult r = ikd(x, y, CouplingMode::exact);

    const std::vector<Rat> p = masses_of(x.initial_space());
    const std::vector<Rat> q = masses_of(y.initial_space());
    const long resolution = 12;
    // Walk the grid of couplings (small sizes keep this cheap).
    std::vector<long> rowrem(p.size()), colrem(q.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      rowrem[i] = (p[i] * resolution).convert_to<long>();
    for (std::size_t j = 0; j < q.size(); ++j)
      colrem[j] = (q[j] * resolution).convert_to<long>();
    double best = std::numeric_limits<double>::infinity();
    std::vector<long> cells(p.size() * q.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t cell) {
      const std::size_t i = cell / q.size();
      const std::size_t j = cell % q.size();
      if (i == p.size()) {
        for (long c : colrem)
          if (c != 0) return;
        CouplingMatrix z{x.initial_space(), y.initial_space(), {}};
        for (std::size_t e = 0; e < cells.size(); ++e)
          if (cells[e] > 0)
            z.entries.emplace_back(e / q.size(), e % q.size(),
                                   Rat(cells[e], resolution));
        best = std::min(best, kd(induced_fan(x, y, z)));
        return;
      }
      const bool last_col = (j == q.size() - 1);
      const bool last_row = (i == p.size() - 1);
      long lo = 0, hi = std::min(rowrem[i], colrem[j]);
      if (last_col) lo = hi = rowrem[i];
      else if (last_row) lo = hi = colrem[j];
      if (lo > hi || hi > std::min(rowrem[i], colrem[j])) return;
      for (long v = lo; v <= hi; ++v) {
        cells[cell] = v;
        rowrem[i] -= v;
        colrem[j] -= v;
        rec(cell + 1);
        rowrem[i] += v;
        colrem[j] += v;
        cells[cell] = 0;
      }
    };
    rec(0);
    CHECK(r.bound.upper <= best + 1e-9);
  }
}

TEST_CASE("slicing bound along a reduction") {
  std::mt19937_64 rng(59);
  Diagram y = troptest::random_diagram(rng, IndexingCategory::full(2), 4);

  // One-point U: the bound degenerates to ikd itself.
  Diagram x = troptest::random_diagram(rng, IndexingCategory::full(2), 4);
  std::vector<std::size_t> to_point(x.initial_space().size(), 0);
  Reduction trivial{x.initial_space(), ProbSpace::point(), to_point};
  const double degenerate = slicing_bound_reduction(x, y, trivial);
  CHECK(degenerate ==
        doctest::Approx(ikd(x, y).bound.upper).epsilon(1e-9));

  // Slicing itself is always an upper bound.
  Reduction f = troptest::random_reduction_to_u(rng, x, 2);
  const double bound = slicing_bound_reduction(x, y, f);
  CHECK(ikd(x, y).bound.upper <= bound + 1e-9);

  // Y = X: the bound is nonnegative and the internal check passes.
  CHECK(slicing_bound_reduction(x, x, f) >= 0.0);
}

TEST_CASE("slicing bound over a co-fan") {
  std::mt19937_64 rng(61);
  // Compatible products over a common factor slice to ikd(A, B).
  Diagram a = single_space(random_space(rng, 3, "a"));
  Diagram b = single_space(random_space(rng, 3, "b"));
  ProbSpace u2 = ProbSpace::uniform(2);
  Diagram x = tensor(single_space(u2), a);
  Diagram y = tensor(single_space(u2), b);
  auto factor_map = [&](const Diagram& d, std::size_t inner) {
    std::vector<std::size_t> map(d.initial_space().size());
    for (std::size_t k = 0; k < map.size(); ++k) map[k] = k / inner;
    return Reduction{d.initial_space(), u2, map};
  };
  Reduction fx = factor_map(x, a.initial_space().size());
  Reduction fy = factor_map(y, b.initial_space().size());
  const double cofan = slicing_bound_cofan(x, y, fx, fy);
  CHECK(cofan == doctest::Approx(ikd(a, b).bound.upper).epsilon(1e-9));
  CHECK(ikd(x, y).bound.upper <= cofan + 1e-9);

  // Identical diagrams compatibly over U: zero.
  CHECK(slicing_bound_cofan(x, x, fx, fx) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("metric axioms for exact ikd on single spaces") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 12; ++trial) {
    Diagram x = single_space(random_space(rng, 4, "x"));
    Diagram y = single_space(random_space(rng, 4, "y"));
    Diagram z = single_space(random_space(rng, 4, "z"));
    const double xy = ikd(x, y, CouplingMode::exact).bound.upper;
    const double yx = ikd(y, x, CouplingMode::exact).bound.upper;
    const double yz = ikd(y, z, CouplingMode::exact).bound.upper;
    const double xz = ikd(x, z, CouplingMode::exact).bound.upper;
    CHECK(xy == doctest::Approx(yx).epsilon(1e-9));
    CHECK(xz <= xy + yz + 1e-9);
    CHECK(xy >= 0.0);
  }
}

TEST_CASE("tensor is 1-Lipschitz for ikd") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 8; ++trial) {
    Diagram x = single_space(random_space(rng, 2, "x"));
    Diagram y = single_space(random_space(rng, 2, "y"));
    Diagram xp = single_space(random_space(rng, 2, "u"));
    Diagram yp = single_space(random_space(rng, 2, "v"));
    const double dxy = ikd(x, y, CouplingMode::exact).bound.upper;
    const double dxpyp = ikd(xp, yp, CouplingMode::exact).bound.upper;
    const double dtensor =
        ikd(tensor(x, xp), tensor(y, yp), CouplingMode::exact).bound.upper;
    CHECK(dtensor <= dxy + dxpyp + 1e-9);
  }
}

TEST_CASE("entropy vectors are 1-Lipschitz under ikd") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 12; ++trial) {
    Diagram x = troptest::random_diagram(rng, IndexingCategory::chain(2), 5);
    Diagram y = troptest::random_diagram(rng, IndexingCategory::chain(2), 5);
    IkdResult r = ikd(x, y);
    CHECK(l1_distance(entropy_vector(x), entropy_vector(y)) <=
          r.bound.upper + 1e-9);
  }
}

TEST_CASE("kd vanishes exactly when the minimal legs are bijections") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    ProbSpace p = random_space(rng, 4, "p");
    ProbSpace q = random_space(rng, 4, "q");
    CouplingMatrix z = greedy_coupling_atoms(p, q);
    TwoFan fan = induced_fan(single_space(p), single_space(q), z);
    TwoFan minimal = minimal_reduction(fan);
    const bool bijective =
        minimal.top().initial_space().size() == p.size() &&
        minimal.top().initial_space().size() == q.size();
    if (kd(minimal) < 1e-12) {
      CHECK(bijective);
    } else {
      CHECK(kd(minimal) > 0.0);
    }
  }
}

TEST_CASE("coupling validation catches broken marginals") {
  ProbSpace p = ProbSpace::uniform(2);
  CouplingMatrix broken{p, p, {{0, 0, Rat(1, 2)}, {1, 0, Rat(1, 2)}}};
  CHECK_THROWS_AS(broken.check(), Error);
}
