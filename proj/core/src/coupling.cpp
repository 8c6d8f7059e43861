#include "trop/coupling.hpp"

#include "trop/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace trop {

double CouplingMatrix::entropy() const {
  double h = 0.0;
  for (const auto& [i, j, z] : entries) h += entropy_term(z);
  return h;
}

void CouplingMatrix::check() const {
  std::vector<Rat> row(left.size(), Rat(0));
  std::vector<Rat> col(right.size(), Rat(0));
  for (const auto& [i, j, z] : entries) {
    if (i >= left.size() || j >= right.size())
      fail(Errc::invalid_argument, "coupling entry out of range");
    if (z <= 0) fail(Errc::invalid_argument, "non-positive coupling entry");
    row[i] += z;
    col[j] += z;
  }
  for (std::size_t i = 0; i < left.size(); ++i)
    if (row[i] != left.mass(i))
      fail(Errc::mass_mismatch, "coupling row marginal mismatch at '" +
                                    left.atom(i).label + "'");
  for (std::size_t j = 0; j < right.size(); ++j)
    if (col[j] != right.mass(j))
      fail(Errc::mass_mismatch, "coupling column marginal mismatch at '" +
                                    right.atom(j).label + "'");
}

TwoFan TwoFan::build(Diagram top, Diagram left, Diagram right,
                     std::vector<std::vector<std::size_t>> left_leg,
                     std::vector<std::vector<std::size_t>> right_leg) {
  if (!(top.shape() == left.shape()) || !(top.shape() == right.shape()))
    fail(Errc::shape_mismatch, "fan members have different shapes");
  const std::size_t n = top.size();
  if (left_leg.size() != n || right_leg.size() != n)
    fail(Errc::invalid_argument, "fan needs one leg map per object");

  auto check_leg = [&](const Diagram& foot,
                       const std::vector<std::vector<std::size_t>>& leg,
                       const char* side) {
    for (std::size_t i = 0; i < n; ++i) {
      Reduction r{top.space(i), foot.space(i), leg[i]};
      try {
        check_reduction(r);
      } catch (const Error& e) {
        fail(e.code(), std::string(e.what()) + " (" + side + " leg at '" +
                           top.shape().object_name(i) + "')");
      }
    }
    for (const auto& [src, dst] : top.shape().covering_arrows()) {
      const auto& tm = top.atom_map(src, dst);
      const auto& fm = foot.atom_map(src, dst);
      for (std::size_t a = 0; a < tm.size(); ++a) {
        if (leg[dst][tm[a]] != fm[leg[src][a]])
          fail(Errc::non_commutative,
               std::string(side) + " leg does not commute with arrow " +
                   top.shape().object_name(src) + " -> " +
                   top.shape().object_name(dst));
      }
    }
  };
  check_leg(left, left_leg, "left");
  check_leg(right, right_leg, "right");

  TwoFan fan;
  fan.top_ = std::move(top);
  fan.left_ = std::move(left);
  fan.right_ = std::move(right);
  fan.left_leg_ = std::move(left_leg);
  fan.right_leg_ = std::move(right_leg);
  return fan;
}

double kd(const TwoFan& fan) {
  EntropyVector et = entropy_vector(fan.top());
  return l1_distance(et, entropy_vector(fan.left())) +
         l1_distance(et, entropy_vector(fan.right()));
}

CouplingMatrix initial_coupling(const TwoFan& fan) {
  const std::size_t init = fan.top().shape().initial();
  const ProbSpace& z0 = fan.top().space(init);
  std::map<std::pair<std::size_t, std::size_t>, Rat> joint;
  for (std::size_t t = 0; t < z0.size(); ++t)
    joint[{fan.left_leg(init)[t], fan.right_leg(init)[t]}] += z0.mass(t);
  CouplingMatrix out{fan.left().space(init), fan.right().space(init), {}};
  out.entries.reserve(joint.size());
  for (const auto& [key, z] : joint)
    out.entries.emplace_back(key.first, key.second, z);
  return out;
}

TwoFan induced_fan(const Diagram& left, const Diagram& right,
                   const CouplingMatrix& coupling) {
  if (!(left.shape() == right.shape()))
    fail(Errc::shape_mismatch, "fan feet have different shapes");
  if (!(coupling.left == left.initial_space()) ||
      !(coupling.right == right.initial_space()))
    fail(Errc::invalid_argument,
         "coupling marginals are not the initial spaces of the feet");
  coupling.check();

  const std::size_t n = left.size();
  const std::size_t init = left.shape().initial();

  std::vector<std::map<std::pair<std::size_t, std::size_t>, std::size_t>>
      index(n);
  std::vector<std::vector<Atom>> atoms(n);
  // Entry -> top atom per object, to derive maps and legs.
  std::vector<std::vector<std::size_t>> entry_atom(
      n, std::vector<std::size_t>(coupling.entries.size()));

  for (std::size_t i = 0; i < n; ++i) {
    const auto& mx = left.atom_map(init, i);
    const auto& my = right.atom_map(init, i);
    std::map<std::pair<std::size_t, std::size_t>, Rat> masses;
    for (const auto& [a, b, z] : coupling.entries)
      masses[{mx[a], my[b]}] += z;
    for (const auto& [key, z] : masses) {
      index[i].emplace(key, atoms[i].size());
      atoms[i].push_back({join_labels(left.space(i).atom(key.first).label,
                                      right.space(i).atom(key.second).label),
                          z});
    }
    for (std::size_t e = 0; e < coupling.entries.size(); ++e) {
      const auto& [a, b, z] = coupling.entries[e];
      entry_atom[i][e] = index[i].at({mx[a], my[b]});
    }
  }

  std::vector<ProbSpace> spaces;
  spaces.reserve(n);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> key_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    key_of[i].resize(index[i].size());
    for (const auto& [key, idx] : index[i]) key_of[i][idx] = key;
    spaces.emplace_back(std::move(atoms[i]));
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  for (const auto& [src, dst] : left.shape().covering_arrows()) {
    const auto& lx = left.atom_map(src, dst);
    const auto& ry = right.atom_map(src, dst);
    std::vector<std::size_t> map(spaces[src].size());
    for (std::size_t a = 0; a < map.size(); ++a) {
      const auto& key = key_of[src][a];
      map[a] = index[dst].at({lx[key.first], ry[key.second]});
    }
    maps.emplace(std::make_pair(src, dst), std::move(map));
  }
  Diagram top = Diagram::build_indexed(left.shape(), std::move(spaces),
                                       std::move(maps));

  std::vector<std::vector<std::size_t>> left_leg(n), right_leg(n);
  for (std::size_t i = 0; i < n; ++i) {
    left_leg[i].resize(key_of[i].size());
    right_leg[i].resize(key_of[i].size());
    for (std::size_t a = 0; a < key_of[i].size(); ++a) {
      left_leg[i][a] = key_of[i][a].first;
      right_leg[i][a] = key_of[i][a].second;
    }
  }
  return TwoFan::build(std::move(top), left, right, std::move(left_leg),
                       std::move(right_leg));
}

TwoFan minimal_reduction(const TwoFan& fan) {
  return induced_fan(fan.left(), fan.right(), initial_coupling(fan));
}

namespace {

/// Solves the row/column-sum system on a spanning tree of the
/// bipartite marginal graph by leaf elimination. Returns false when
/// some entry comes out negative.
class TreeSolver {
 public:
  TreeSolver(const std::vector<Rat>& p, const std::vector<Rat>& q)
      : p_(p), q_(q), nodes_(p.size() + q.size()) {}

  bool solve(const std::vector<std::size_t>& edges,
             std::vector<std::tuple<std::size_t, std::size_t, Rat>>& out) {
    const std::size_t cols = q_.size();
    adj_.assign(nodes_, {});
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::size_t i = edges[e] / cols;
      const std::size_t j = edges[e] % cols;
      adj_[i].push_back(e);
      adj_[p_.size() + j].push_back(e);
    }
    residual_.assign(nodes_, Rat(0));
    for (std::size_t i = 0; i < p_.size(); ++i) residual_[i] = p_[i];
    for (std::size_t j = 0; j < q_.size(); ++j) residual_[p_.size() + j] = q_[j];
    degree_.assign(nodes_, 0);
    for (std::size_t u = 0; u < nodes_; ++u)
      degree_[u] = adj_[u].size();
    used_.assign(edges.size(), false);
    values_.assign(edges.size(), Rat(0));

    stack_.clear();
    for (std::size_t u = 0; u < nodes_; ++u)
      if (degree_[u] == 1) stack_.push_back(u);

    std::size_t processed = 0;
    while (!stack_.empty()) {
      const std::size_t u = stack_.back();
      stack_.pop_back();
      if (degree_[u] != 1) continue;
      std::size_t e = edges.size();
      for (std::size_t cand : adj_[u])
        if (!used_[cand]) { e = cand; break; }
      if (e == edges.size()) break;
      used_[e] = true;
      ++processed;
      values_[e] = residual_[u];
      const std::size_t i = edges[e] / cols;
      const std::size_t j = edges[e] % cols;
      const std::size_t other = (u == i) ? p_.size() + j : i;
      residual_[other] -= residual_[u];
      residual_[u] = 0;
      --degree_[u];
      if (--degree_[other] == 1) stack_.push_back(other);
    }
    if (processed != edges.size()) return false;
    for (const Rat& v : values_)
      if (v < 0) return false;
    out.clear();
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (values_[e] > 0)
        out.emplace_back(edges[e] / cols, edges[e] % cols, values_[e]);
    return true;
  }

 private:
  const std::vector<Rat>& p_;
  const std::vector<Rat>& q_;
  std::size_t nodes_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Rat> residual_;
  std::vector<std::size_t> degree_;
  std::vector<bool> used_;
  std::vector<Rat> values_;
  std::vector<std::size_t> stack_;
};

}  // namespace

void for_each_transport_vertex(
    const std::vector<Rat>& p, const std::vector<Rat>& q,
    const std::function<
        void(const std::vector<std::tuple<std::size_t, std::size_t, Rat>>&)>&
        visit) {
  const std::size_t m = p.size();
  const std::size_t n = q.size();
  if (m == 0 || n == 0) fail(Errc::invalid_argument, "empty marginals");
  const std::size_t total_edges = m * n;
  const std::size_t target = m + n - 1;

  std::vector<std::size_t> parent(m + n);
  for (std::size_t u = 0; u < parent.size(); ++u) parent[u] = u;
  auto find = [&](std::size_t u) {
    while (parent[u] != u) u = parent[u];
    return u;
  };

  std::vector<std::size_t> chosen;
  chosen.reserve(target);
  TreeSolver solver(p, q);
  std::vector<std::tuple<std::size_t, std::size_t, Rat>> scratch;

  std::function<void(std::size_t)> recurse = [&](std::size_t start) {
    if (chosen.size() == target) {
      if (solver.solve(chosen, scratch)) visit(scratch);
      return;
    }
    if (total_edges - start < target - chosen.size()) return;
    for (std::size_t e = start; e < total_edges; ++e) {
      const std::size_t ru = find(e / n);
      const std::size_t rv = find(m + e % n);
      if (ru == rv) continue;
      parent[ru] = rv;
      chosen.push_back(e);
      recurse(e + 1);
      chosen.pop_back();
      parent[ru] = ru;
    }
  };
  recurse(0);
}

CouplingMatrix min_entropy_coupling_exact(const ProbSpace& p,
                                          const ProbSpace& q,
                                          std::size_t cap) {
  if (p.size() * q.size() > cap)
    fail(Errc::size_limit, "coupling table of " +
                               std::to_string(p.size() * q.size()) +
                               " entries exceeds the cap of " +
                               std::to_string(cap));
  std::vector<Rat> pm, qm;
  for (const Atom& a : p.atoms()) pm.push_back(a.mass);
  for (const Atom& a : q.atoms()) qm.push_back(a.mass);

  bool found = false;
  double best_h = 0.0;
  std::vector<std::tuple<std::size_t, std::size_t, Rat>> best;
  auto support_less =
      [](const std::vector<std::tuple<std::size_t, std::size_t, Rat>>& a,
         const std::vector<std::tuple<std::size_t, std::size_t, Rat>>& b) {
        const std::size_t k = std::min(a.size(), b.size());
        for (std::size_t t = 0; t < k; ++t) {
          const auto ka = std::make_pair(std::get<0>(a[t]), std::get<1>(a[t]));
          const auto kb = std::make_pair(std::get<0>(b[t]), std::get<1>(b[t]));
          if (ka != kb) return ka < kb;
        }
        return a.size() < b.size();
      };
  for_each_transport_vertex(pm, qm, [&](const auto& entries) {
    double h = 0.0;
    for (const auto& [i, j, z] : entries) h += entropy_term(z);
    if (!found || h < best_h || (h == best_h && support_less(entries, best))) {
      found = true;
      best_h = h;
      best = entries;
    }
  });
  if (!found) fail(Errc::internal, "transportation polytope had no vertex");
  return CouplingMatrix{p, q, std::move(best)};
}

GreedyCoupling min_entropy_coupling_greedy(std::vector<GroupedMass> p,
                                           std::vector<GroupedMass> q) {
  using Groups = std::map<Rat, BigInt, std::greater<Rat>>;
  auto load = [](const std::vector<GroupedMass>& side) {
    Groups g;
    Rat total = 0;
    for (const auto& [value, count] : side) {
      if (value <= 0 || count <= 0)
        fail(Errc::invalid_argument, "mass groups must be positive");
      g[value] += count;
      total += value * Rat(count);
    }
    if (total != 1)
      fail(Errc::invalid_argument,
           "grouped masses sum to " + rat_to_string(total) + ", expected 1");
    return g;
  };
  Groups pg = load(p);
  Groups qg = load(q);

  Groups out;
  auto record = [&out](const Rat& value, const BigInt& count) {
    out[value] += count;
  };

  // One iteration aggregates as many identical greedy steps as
  // possible; the loop is a grouped subtract-with-quotient Euclid.
  std::size_t guard = 0;
  while (!pg.empty() && !qg.empty()) {
    if (++guard > 50'000'000)
      fail(Errc::internal, "greedy coupling failed to terminate");
    auto pa = pg.begin();
    auto qb = qg.begin();
    const Rat va = pa->first;
    const Rat vb = qb->first;
    if (va == vb) {
      const BigInt k = std::min(pa->second, qb->second);
      record(va, k);
      if ((pa->second -= k) == 0) pg.erase(pa);
      if ((qb->second -= k) == 0) qg.erase(qb);
      continue;
    }
    Groups& big = (va > vb) ? pg : qg;
    Groups& small = (va > vb) ? qg : pg;
    auto bi = big.begin();
    auto si = small.begin();
    const Rat bv = bi->first;
    const Rat sv = si->first;
    const BigInt bc = bi->second;
    const BigInt sc = si->second;
    const Rat ratio = bv / sv;
    const BigInt d = numerator(ratio) / denominator(ratio);
    if (sc >= bc) {
      // Every big atom sheds `rounds` small values at once. Rounds may
      // not drop the group below the next value on its own side, or
      // the greedy order would interleave with that group.
      BigInt allowed = d;
      if (auto second = std::next(bi); second != big.end()) {
        const Rat span = (bv - second->first) / sv;
        allowed = numerator(span) / denominator(span);
        if (allowed < 1) allowed = 1;
      }
      const BigInt rounds = std::min({d, BigInt(sc / bc), allowed});
      record(sv, rounds * bc);
      const Rat rem = bv - Rat(rounds) * sv;
      big.erase(bi);
      if (rem > 0) big[rem] += bc;
      if ((si->second -= rounds * bc) == 0) small.erase(si);
    } else {
      // Only `sc` of the big atoms shed one small value.
      record(sv, sc);
      const Rat rem = bv - sv;
      bi->second = bc - sc;
      if (bi->second == 0) big.erase(bi);
      if (rem > 0) big[rem] += sc;
      small.erase(si);
    }
  }
  if (!pg.empty() || !qg.empty())
    fail(Errc::internal, "greedy coupling left residual mass");

  GreedyCoupling result;
  result.entries.reserve(out.size());
  for (const auto& [value, count] : out) {
    result.entries.push_back({value, count});
    result.entropy += count.convert_to<double>() * entropy_term(value);
  }
  return result;
}

CouplingMatrix greedy_coupling_atoms(const ProbSpace& p, const ProbSpace& q) {
  struct ByMassDesc {
    bool operator()(const std::pair<Rat, std::size_t>& a,
                    const std::pair<Rat, std::size_t>& b) const {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    }
  };
  std::set<std::pair<Rat, std::size_t>, ByMassDesc> ps, qs;
  for (std::size_t i = 0; i < p.size(); ++i) ps.insert({p.mass(i), i});
  for (std::size_t j = 0; j < q.size(); ++j) qs.insert({q.mass(j), j});

  CouplingMatrix out{p, q, {}};
  while (!ps.empty() && !qs.empty()) {
    auto a = *ps.begin();
    auto b = *qs.begin();
    ps.erase(ps.begin());
    qs.erase(qs.begin());
    const Rat z = std::min(a.first, b.first);
    out.entries.emplace_back(a.second, b.second, z);
    if (a.first > z) ps.insert({a.first - z, a.second});
    if (b.first > z) qs.insert({b.first - z, b.second});
  }
  if (!ps.empty() || !qs.empty())
    fail(Errc::internal, "greedy coupling left residual mass");
  return out;
}

namespace {

/// Σᵢ 2·H(Zᵢ) for the fan induced by a coupling of the initial spaces.
/// Each Zᵢ is the pushforward of the coupling along the pair of
/// structure maps into object i.
class InducedObjective {
 public:
  InducedObjective(const Diagram& x, const Diagram& y) {
    const std::size_t init = x.shape().initial();
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx_.push_back(&x.atom_map(init, i));
      my_.push_back(&y.atom_map(init, i));
      stride_.push_back(y.space(i).size());
    }
  }

  double operator()(
      const std::vector<std::tuple<std::size_t, std::size_t, Rat>>& entries)
      const {
    double objective = 0.0;
    for (std::size_t i = 0; i < mx_.size(); ++i) {
      scratch_.clear();
      for (const auto& [a, b, z] : entries)
        scratch_.emplace_back((*mx_[i])[a] * stride_[i] + (*my_[i])[b], &z);
      std::sort(scratch_.begin(), scratch_.end(),
                [](const auto& l, const auto& r) { return l.first < r.first; });
      double h = 0.0;
      std::size_t t = 0;
      while (t < scratch_.size()) {
        Rat mass = *scratch_[t].second;
        std::size_t u = t + 1;
        while (u < scratch_.size() && scratch_[u].first == scratch_[t].first)
          mass += *scratch_[u++].second;
        h += entropy_term(mass);
        t = u;
      }
      objective += 2.0 * h;
    }
    return objective;
  }

 private:
  std::vector<const std::vector<std::size_t>*> mx_, my_;
  std::vector<std::size_t> stride_;
  mutable std::vector<std::pair<std::size_t, const Rat*>> scratch_;
};

}  // namespace

IkdResult ikd(const Diagram& x, const Diagram& y, CouplingMode mode,
              std::size_t cap) {
  if (!(x.shape() == y.shape()))
    fail(Errc::shape_mismatch, "ikd needs diagrams of one shape");
  const EntropyVector ex = entropy_vector(x);
  const EntropyVector ey = entropy_vector(y);
  const double lower = l1_distance(ex, ey);
  double const_sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    const_sum += ex.values[i] + ey.values[i];

  const ProbSpace& x0 = x.initial_space();
  const ProbSpace& y0 = y.initial_space();
  const std::size_t table = x0.size() * y0.size();
  bool exact_run = false;
  if (mode == CouplingMode::exact && table > cap)
    fail(Errc::size_limit,
         "initial coupling table of " + std::to_string(table) +
             " entries exceeds the cap of " + std::to_string(cap));

  InducedObjective objective(x, y);
  CouplingMatrix best{x0, y0, {}};

  if (mode == CouplingMode::exact ||
      (mode == CouplingMode::automatic && table <= cap)) {
    exact_run = true;
    std::vector<Rat> pm, qm;
    for (const Atom& a : x0.atoms()) pm.push_back(a.mass);
    for (const Atom& a : y0.atoms()) qm.push_back(a.mass);
    bool found = false;
    double best_obj = 0.0;
    for_each_transport_vertex(pm, qm, [&](const auto& entries) {
      const double obj = objective(entries);
      if (!found || obj < best_obj) {
        found = true;
        best_obj = obj;
        best.entries = entries;
      }
    });
    if (!found) fail(Errc::internal, "transportation polytope had no vertex");
  } else {
    best = greedy_coupling_atoms(x0, y0);
  }

  double upper = objective(best.entries) - const_sum;
  if (upper < lower) upper = lower;  // exact arithmetic guarantees lower ≤ upper
  const bool exact_flag =
      (exact_run && x.shape().is_chain()) || (upper - lower <= 1e-9);
  return {{lower, upper, exact_flag}, std::move(best)};
}

double slicing_bound_reduction(const Diagram& x, const Diagram& y,
                               const Reduction& from_initial,
                               std::size_t cap) {
  double integral = 0.0;
  for (std::size_t u = 0; u < from_initial.target.size(); ++u) {
    Diagram slice = condition(x, from_initial, u);
    integral += to_double(from_initial.target.mass(u)) *
                ikd(slice, y, CouplingMode::exact, cap).bound.upper;
  }
  const double bound = integral + static_cast<double>(x.size()) *
                                      entropy(from_initial.target);
  if (x.initial_space().size() * y.initial_space().size() <= cap) {
    const double direct = ikd(x, y, CouplingMode::exact, cap).bound.upper;
    if (direct > bound + 1e-9)
      fail(Errc::internal, "slicing bound fell below the exact distance");
  }
  return bound;
}

double slicing_bound_cofan(const Diagram& x, const Diagram& y,
                           const Reduction& x_to_u, const Reduction& y_to_u,
                           std::size_t cap) {
  if (!(x_to_u.target == y_to_u.target))
    fail(Errc::invalid_argument, "co-fan reductions target different spaces");
  double integral = 0.0;
  for (std::size_t u = 0; u < x_to_u.target.size(); ++u) {
    Diagram xs = condition(x, x_to_u, u);
    Diagram ys = condition(y, y_to_u, u);
    integral += to_double(x_to_u.target.mass(u)) *
                ikd(xs, ys, CouplingMode::exact, cap).bound.upper;
  }
  return integral;
}

TwoFan uniform_fan(std::size_t n, std::size_t m) {
  if (n < 1 || m < 1) fail(Errc::invalid_argument, "uniform fan needs n,m >= 1");
  const IndexingCategory shape = IndexingCategory::chain(1);
  Diagram top = constant_diagram(shape, ProbSpace::uniform(n * m));
  Diagram left = constant_diagram(shape, ProbSpace::uniform(n));
  Diagram right = constant_diagram(shape, ProbSpace::uniform(m));
  std::vector<std::size_t> f(n * m), g(n * m);
  for (std::size_t k = 0; k < n * m; ++k) {
    f[k] = k / m;
    g[k] = k / n;
  }
  TwoFan fan = TwoFan::build(std::move(top), std::move(left), std::move(right),
                             {f}, {g});
  return minimal_reduction(fan);
}

}  // namespace trop
