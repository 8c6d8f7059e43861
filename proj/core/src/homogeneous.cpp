#include "trop/homogeneous.hpp"

#include "trop/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace trop {

Perm perm_identity(std::size_t degree) {
  Perm p(degree);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm perm_compose(const Perm& outer, const Perm& inner) {
  if (outer.size() != inner.size())
    fail(Errc::invalid_argument, "composing permutations of different degrees");
  Perm out(outer.size());
  for (std::size_t x = 0; x < inner.size(); ++x) out[x] = outer[inner[x]];
  return out;
}

Perm parse_cycles(const std::string& text, std::size_t degree) {
  Perm perm = perm_identity(degree);
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  skip_space();
  while (pos < text.size()) {
    if (text[pos] != '(')
      fail(Errc::parse_error, "expected '(' in cycle notation: " + text);
    ++pos;
    std::vector<std::size_t> cycle;
    skip_space();
    while (pos < text.size() && text[pos] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[pos])))
        fail(Errc::parse_error, "expected point in cycle notation: " + text);
      std::size_t value = 0;
      while (pos < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
        ++pos;
      }
      if (value < 1 || value > degree)
        fail(Errc::parse_error,
             "point " + std::to_string(value) + " outside 1.." +
                 std::to_string(degree));
      cycle.push_back(value - 1);
      skip_space();
      if (pos < text.size() && text[pos] == ',') { ++pos; skip_space(); }
    }
    if (pos == text.size())
      fail(Errc::parse_error, "unterminated cycle in: " + text);
    ++pos;  // ')'
    for (std::size_t k = 0; k + 1 < cycle.size(); ++k) {
      if (perm[cycle[k]] != cycle[k])
        fail(Errc::parse_error, "point repeated in cycles: " + text);
      perm[cycle[k]] = cycle[k + 1];
    }
    if (cycle.size() > 1) {
      if (perm[cycle.back()] != cycle.back())
        fail(Errc::parse_error, "point repeated in cycles: " + text);
      perm[cycle.back()] = cycle.front();
    }
    skip_space();
  }
  return perm;
}

std::string format_cycles(const Perm& perm) {
  std::ostringstream out;
  std::vector<bool> seen(perm.size(), false);
  bool any = false;
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (seen[start] || perm[start] == start) continue;
    any = true;
    out << '(';
    std::size_t x = start;
    bool first = true;
    do {
      if (!first) out << ' ';
      first = false;
      out << x + 1;
      seen[x] = true;
      x = perm[x];
    } while (x != start);
    out << ')';
  }
  if (!any) return "()";
  return out.str();
}

namespace {

std::vector<Perm> closure(std::size_t degree, const std::vector<Perm>& gens,
                          std::size_t cap) {
  std::set<Perm> elements;
  elements.insert(perm_identity(degree));
  std::vector<Perm> frontier(elements.begin(), elements.end());
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const Perm& e : frontier) {
      for (const Perm& g : gens) {
        Perm product = perm_compose(g, e);
        if (elements.insert(product).second) {
          if (elements.size() > cap)
            fail(Errc::group_too_large,
                 "group enumeration exceeded the cap of " +
                     std::to_string(cap));
          next.push_back(std::move(product));
        }
      }
    }
    frontier = std::move(next);
  }
  return {elements.begin(), elements.end()};
}

}  // namespace

PermGroup::PermGroup(std::size_t degree, std::vector<Perm> generators,
                     std::size_t order_cap)
    : degree_(degree), generators_(std::move(generators)) {
  if (degree < 1) fail(Errc::invalid_argument, "group degree must be >= 1");
  for (const Perm& g : generators_) {
    if (g.size() != degree)
      fail(Errc::invalid_argument, "generator degree mismatch");
    std::vector<bool> hit(degree, false);
    for (std::size_t image : g) {
      if (image >= degree || hit[image])
        fail(Errc::invalid_argument, "generator is not a permutation");
      hit[image] = true;
    }
  }
  elements_ = closure(degree_, generators_, order_cap);
}

bool PermGroup::contains(const Perm& p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

namespace {

std::vector<Perm> subgroup_elements(const PermGroup& group,
                                    const std::vector<Perm>& gens,
                                    const std::string& object_name) {
  for (const Perm& g : gens) {
    if (g.size() != group.degree())
      fail(Errc::invalid_argument,
           "subgroup generator degree mismatch at '" + object_name + "'");
    if (!group.contains(g))
      fail(Errc::inclusion_violation, "generator " + format_cycles(g) +
                                          " at '" + object_name +
                                          "' lies outside the group");
  }
  return closure(group.degree(), gens, group.order());
}

bool subset_of(const std::vector<Perm>& small, const std::vector<Perm>& big) {
  // Both sorted.
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

Diagram quotient_diagram(const PermGroup& group, const SubgroupDiagram& sub) {
  const IndexingCategory& shape = sub.shape;
  if (sub.generators.size() != shape.size())
    fail(Errc::invalid_argument, "expected one subgroup per object");

  std::vector<std::vector<Perm>> subs(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i)
    subs[i] = subgroup_elements(group, sub.generators[i],
                                shape.object_name(i));

  for (const auto& [src, dst] : shape.covering_arrows()) {
    if (!subset_of(subs[src], subs[dst]))
      fail(Errc::inclusion_violation,
           "subgroup at '" + shape.object_name(src) +
               "' is not contained in the one at '" + shape.object_name(dst) +
               "'");
  }

  // Left cosets canonicalized by minimal element; spaces list cosets in
  // order of their canonical representatives.
  auto coset_rep = [&](const Perm& g, const std::vector<Perm>& sub_elems) {
    Perm best = perm_compose(g, sub_elems.front());
    for (const Perm& h : sub_elems) {
      Perm candidate = perm_compose(g, h);
      if (candidate < best) best = candidate;
    }
    return best;
  };

  std::vector<std::vector<Perm>> reps(shape.size());
  std::vector<std::map<Perm, std::size_t>> rep_index(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i) {
    std::set<Perm> seen;
    for (const Perm& g : group.elements()) seen.insert(coset_rep(g, subs[i]));
    reps[i].assign(seen.begin(), seen.end());
    for (std::size_t c = 0; c < reps[i].size(); ++c)
      rep_index[i].emplace(reps[i][c], c);
  }

  std::vector<ProbSpace> spaces;
  spaces.reserve(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i) {
    std::vector<Atom> atoms;
    atoms.reserve(reps[i].size());
    for (const Perm& rep : reps[i])
      atoms.push_back({format_cycles(rep), Rat(1, reps[i].size())});
    spaces.emplace_back(std::move(atoms));
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  for (const auto& [src, dst] : shape.covering_arrows()) {
    std::vector<std::size_t> map(reps[src].size());
    for (std::size_t c = 0; c < reps[src].size(); ++c)
      map[c] = rep_index[dst].at(coset_rep(reps[src][c], subs[dst]));
    maps.emplace(std::make_pair(src, dst), std::move(map));
  }
  return Diagram::build_indexed(shape, std::move(spaces), std::move(maps));
}

namespace {

/// Finds one automorphism with σ_obj(from) = to, by backtracking over
/// the initial-space bijection; derived bijections prune the search.
class AutSearch {
 public:
  explicit AutSearch(const Diagram& d) : d_(d), init_(d.shape().initial()) {}

  std::optional<std::vector<std::vector<std::size_t>>> find(std::size_t obj,
                                                            std::size_t from,
                                                            std::size_t to) {
    const std::size_t m = d_.space(init_).size();
    used_.assign(m, false);
    forced_.assign(d_.size(), {});
    inv_.assign(d_.size(), {});
    for (std::size_t i = 0; i < d_.size(); ++i) {
      forced_[i].assign(d_.space(i).size(), unset());
      inv_[i].assign(d_.space(i).size(), unset());
    }
    obj_ = obj;
    from_ = from;
    to_ = to;
    if (assign(0)) return forced_;
    return std::nullopt;
  }

 private:
  static std::size_t unset() { return static_cast<std::size_t>(-1); }

  bool assign(std::size_t a) {
    const std::size_t m = d_.space(init_).size();
    if (a == m) return forced_[obj_][from_] == to_;
    for (std::size_t b = 0; b < m; ++b) {
      if (used_[b]) continue;
      if (d_.space(init_).mass(a) != d_.space(init_).mass(b)) continue;
      std::vector<std::pair<std::size_t, std::size_t>> trail;
      bool ok = true;
      for (std::size_t i = 0; i < d_.size() && ok; ++i) {
        const std::size_t la = d_.atom_map(init_, i)[a];
        const std::size_t rb = d_.atom_map(init_, i)[b];
        if (forced_[i][la] != unset()) {
          ok = forced_[i][la] == rb;
          continue;
        }
        if (inv_[i][rb] != unset() ||
            d_.space(i).mass(la) != d_.space(i).mass(rb)) {
          ok = false;
          continue;
        }
        forced_[i][la] = rb;
        inv_[i][rb] = la;
        trail.emplace_back(i, la);
      }
      if (ok && forced_[obj_][from_] != unset() &&
          forced_[obj_][from_] != to_)
        ok = false;
      if (ok) {
        used_[b] = true;
        if (assign(a + 1)) return true;
        used_[b] = false;
      }
      for (auto [i, la] : trail) {
        inv_[i][forced_[i][la]] = unset();
        forced_[i][la] = unset();
      }
    }
    return false;
  }

  const Diagram& d_;
  std::size_t init_;
  std::size_t obj_ = 0, from_ = 0, to_ = 0;
  std::vector<bool> used_;
  std::vector<std::vector<std::size_t>> forced_;
  std::vector<std::vector<std::size_t>> inv_;
};

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

HomogeneityReport check_homogeneous(const Diagram& diagram,
                                    std::size_t per_space_cap) {
  for (std::size_t i = 0; i < diagram.size(); ++i)
    if (diagram.space(i).size() > per_space_cap)
      fail(Errc::size_limit,
           "space '" + diagram.shape().object_name(i) + "' has " +
               std::to_string(diagram.space(i).size()) +
               " atoms, over the automorphism-search cap of " +
               std::to_string(per_space_cap));

  AutSearch search(diagram);
  std::vector<Dsu> orbits;
  orbits.reserve(diagram.size());
  for (std::size_t i = 0; i < diagram.size(); ++i)
    orbits.emplace_back(diagram.space(i).size());

  auto absorb = [&](const std::vector<std::vector<std::size_t>>& aut) {
    for (std::size_t i = 0; i < diagram.size(); ++i)
      for (std::size_t a = 0; a < aut[i].size(); ++a)
        orbits[i].unite(a, aut[i][a]);
  };

  for (std::size_t i = 0; i < diagram.size(); ++i) {
    for (std::size_t a = 0; a < diagram.space(i).size(); ++a) {
      for (std::size_t b = a + 1; b < diagram.space(i).size(); ++b) {
        if (orbits[i].find(a) == orbits[i].find(b)) continue;
        if (auto aut = search.find(i, a, b)) absorb(*aut);
      }
    }
  }

  HomogeneityReport report;
  report.homogeneous = true;
  for (std::size_t i = 0; i < diagram.size(); ++i) {
    std::set<std::size_t> roots;
    for (std::size_t a = 0; a < diagram.space(i).size(); ++a)
      roots.insert(orbits[i].find(a));
    report.orbit_counts.push_back(roots.size());
    if (roots.size() != 1) report.homogeneous = false;
  }
  return report;
}

bool intersection_closure_check(const PermGroup& group,
                                const SubgroupDiagram& sub) {
  const IndexingCategory& shape = sub.shape;
  if (sub.generators.size() != shape.size())
    fail(Errc::invalid_argument, "expected one subgroup per object");
  std::vector<std::vector<Perm>> subs(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i)
    subs[i] = subgroup_elements(group, sub.generators[i],
                                shape.object_name(i));
  for (std::size_t i = 0; i < shape.size(); ++i) {
    for (std::size_t j = 0; j < shape.size(); ++j) {
      const std::size_t k = shape.lca(i, j);
      std::vector<Perm> meet;
      std::set_intersection(subs[i].begin(), subs[i].end(), subs[j].begin(),
                            subs[j].end(), std::back_inserter(meet));
      if (meet != subs[k]) return false;
    }
  }
  return true;
}

}  // namespace trop
