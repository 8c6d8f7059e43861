#include "trop/diagram.hpp"

#include "trop/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace trop {

namespace {

std::vector<std::size_t> identity_map(std::size_t n) {
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  return id;
}

}  // namespace

const std::vector<std::size_t>& Diagram::atom_map(std::size_t i,
                                                  std::size_t j) const {
  if (!shape_.reaches(i, j))
    fail(Errc::invalid_argument, "no arrow " + shape_.object_name(i) +
                                     " -> " + shape_.object_name(j));
  return maps_[i][j];
}

Diagram Diagram::build(
    IndexingCategory shape, std::vector<ProbSpace> spaces,
    const std::map<std::pair<std::string, std::string>, LabelPairs>&
        arrow_maps) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>>
      indexed;
  for (const auto& [arrow, pairs] : arrow_maps) {
    auto si = shape.object_index(arrow.first);
    auto ti = shape.object_index(arrow.second);
    if (!si || !ti)
      fail(Errc::invalid_argument,
           "map given for unknown arrow " + arrow.first + " -> " + arrow.second);
    if (*si >= spaces.size() || *ti >= spaces.size())
      fail(Errc::invalid_argument, "spaces missing for arrow endpoints");
    const ProbSpace& src = spaces[*si];
    const ProbSpace& dst = spaces[*ti];
    std::vector<std::size_t> map(src.size(), src.size());
    std::vector<bool> assigned(src.size(), false);
    for (const auto& [a, b] : pairs) {
      auto ai = src.index_of(a);
      auto bi = dst.index_of(b);
      if (!ai)
        fail(Errc::invalid_reduction, "unknown atom '" + a + "' in space '" +
                                          arrow.first + "'");
      if (!bi)
        fail(Errc::invalid_reduction, "unknown atom '" + b + "' in space '" +
                                          arrow.second + "'");
      if (assigned[*ai])
        fail(Errc::invalid_reduction, "atom '" + a + "' mapped twice on " +
                                          arrow.first + " -> " + arrow.second);
      assigned[*ai] = true;
      map[*ai] = *bi;
    }
    for (std::size_t i = 0; i < src.size(); ++i)
      if (!assigned[i])
        fail(Errc::invalid_reduction,
             "atom '" + src.atom(i).label + "' has no image on " +
                 arrow.first + " -> " + arrow.second);
    indexed.emplace(std::make_pair(*si, *ti), std::move(map));
  }
  return build_indexed(std::move(shape), std::move(spaces),
                       std::move(indexed));
}

Diagram Diagram::build_indexed(
    IndexingCategory shape, std::vector<ProbSpace> spaces,
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>>
        maps) {
  const std::size_t n = shape.size();
  if (spaces.size() != n)
    fail(Errc::invalid_argument, "expected one space per object");

  for (const auto& [arrow, map] : maps) {
    if (arrow.first >= n || arrow.second >= n || arrow.first == arrow.second ||
        !shape.reaches(arrow.first, arrow.second))
      fail(Errc::invalid_argument,
           "map given for a pair that is not an arrow of the category");
    Reduction r{spaces[arrow.first], spaces[arrow.second], map};
    try {
      check_reduction(r);
    } catch (const Error& e) {
      fail(e.code(), std::string(e.what()) + " (arrow " +
                         shape.object_name(arrow.first) + " -> " +
                         shape.object_name(arrow.second) + ")");
    }
  }
  for (const auto& [src, dst] : shape.covering_arrows()) {
    if (!maps.count({src, dst}))
      fail(Errc::invalid_argument,
           "missing map for covering arrow " + shape.object_name(src) +
               " -> " + shape.object_name(dst));
  }

  Diagram d;
  d.shape_ = std::move(shape);
  d.spaces_ = std::move(spaces);
  d.maps_.assign(n, std::vector<std::vector<std::size_t>>(n));

  // Covering successors per object, for composite derivation.
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& [src, dst] : d.shape_.covering_arrows())
    succ[src].push_back(dst);

  std::vector<std::vector<bool>> done(n, std::vector<bool>(n, false));
  std::function<const std::vector<std::size_t>&(std::size_t, std::size_t)>
      derive = [&](std::size_t i, std::size_t j)
      -> const std::vector<std::size_t>& {
    if (done[i][j]) return d.maps_[i][j];
    done[i][j] = true;
    if (i == j) {
      d.maps_[i][j] = identity_map(d.spaces_[i].size());
      return d.maps_[i][j];
    }
    std::optional<std::vector<std::size_t>> result;
    const char* declared_tag = nullptr;
    if (auto it = maps.find({i, j}); it != maps.end()) {
      result = it->second;
      declared_tag = "declared map";
    }
    for (std::size_t k : succ[i]) {
      if (k == j || !d.shape_.reaches(k, j)) continue;
      const auto& step = maps.at({i, k});
      const auto& rest = derive(k, j);
      std::vector<std::size_t> composite(step.size());
      for (std::size_t a = 0; a < step.size(); ++a)
        composite[a] = rest[step[a]];
      if (result) {
        if (*result != composite)
          fail(Errc::non_commutative,
               "maps " + d.shape_.object_name(i) + " -> " +
                   d.shape_.object_name(j) + " disagree (" +
                   (declared_tag ? declared_tag : "composite") +
                   " vs route through " + d.shape_.object_name(k) + ")");
      } else {
        result = std::move(composite);
        declared_tag = nullptr;
      }
    }
    if (!result)
      fail(Errc::internal, "no route for arrow " + d.shape_.object_name(i) +
                               " -> " + d.shape_.object_name(j));
    d.maps_[i][j] = std::move(*result);
    return d.maps_[i][j];
  };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d.shape_.reaches(i, j)) derive(i, j);
  return d;
}

double EntropyVector::l1() const {
  double sum = 0.0;
  for (double v : values) sum += std::abs(v);
  return sum;
}

EntropyVector entropy_vector(const Diagram& diagram) {
  EntropyVector ev;
  ev.values.reserve(diagram.size());
  for (std::size_t i = 0; i < diagram.size(); ++i)
    ev.values.push_back(entropy(diagram.space(i)));
  return ev;
}

double l1_distance(const EntropyVector& a, const EntropyVector& b) {
  if (a.values.size() != b.values.size())
    fail(Errc::shape_mismatch, "entropy vectors of different shapes");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    sum += std::abs(a.values[i] - b.values[i]);
  return sum;
}

EntropyVector operator+(const EntropyVector& a, const EntropyVector& b) {
  if (a.values.size() != b.values.size())
    fail(Errc::shape_mismatch, "entropy vectors of different shapes");
  EntropyVector out = a;
  for (std::size_t i = 0; i < b.values.size(); ++i)
    out.values[i] += b.values[i];
  return out;
}

Diagram tensor(const Diagram& left, const Diagram& right) {
  if (!(left.shape() == right.shape()))
    fail(Errc::shape_mismatch, "tensor of diagrams with different shapes");
  const std::size_t n = left.size();
  std::vector<ProbSpace> spaces;
  spaces.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    spaces.push_back(tensor(left.space(i), right.space(i)));

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  for (const auto& [src, dst] : left.shape().covering_arrows()) {
    const auto& lm = left.atom_map(src, dst);
    const auto& rm = right.atom_map(src, dst);
    const std::size_t rs = right.space(src).size();
    const std::size_t rt = right.space(dst).size();
    std::vector<std::size_t> map(left.space(src).size() * rs);
    for (std::size_t a = 0; a < left.space(src).size(); ++a)
      for (std::size_t b = 0; b < rs; ++b)
        map[a * rs + b] = lm[a] * rt + rm[b];
    maps.emplace(std::make_pair(src, dst), std::move(map));
  }
  return Diagram::build_indexed(left.shape(), std::move(spaces),
                                std::move(maps));
}

Diagram constant_diagram(const IndexingCategory& shape,
                         const ProbSpace& space) {
  std::vector<ProbSpace> spaces(shape.size(), space);
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  std::vector<std::size_t> id(space.size());
  std::iota(id.begin(), id.end(), 0);
  for (const auto& arrow : shape.covering_arrows()) maps.emplace(arrow, id);
  return Diagram::build_indexed(shape, std::move(spaces), std::move(maps));
}

Diagram lambda_diagram(const JointTable& table) {
  const std::size_t n = table.axis_labels.size();
  if (n < 1) fail(Errc::invalid_argument, "joint table needs at least one axis");
  if (n > 4) fail(Errc::size_limit, "lambda diagram capped at 4 axes");
  for (const auto& axis : table.axis_labels)
    if (axis.empty())
      fail(Errc::invalid_argument, "joint table axis without labels");

  std::vector<std::pair<std::vector<std::size_t>, Rat>> cells;
  Rat total = 0;
  for (const auto& [coords, mass] : table.cells) {
    if (coords.size() != n)
      fail(Errc::invalid_argument, "cell coordinate arity mismatch");
    for (std::size_t a = 0; a < n; ++a)
      if (coords[a] >= table.axis_labels[a].size())
        fail(Errc::invalid_argument, "cell coordinate out of range");
    if (mass < 0)
      fail(Errc::invalid_space, "negative cell mass");
    total += mass;
    if (mass > 0) cells.emplace_back(coords, mass);
  }
  if (total != 1)
    fail(Errc::invalid_space,
         "joint table masses sum to " + rat_to_string(total) + ", expected 1");
  {
    auto sorted = cells;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i].first == sorted[i - 1].first)
        fail(Errc::invalid_argument, "duplicate cell in joint table");
  }

  IndexingCategory shape = IndexingCategory::full(static_cast<unsigned>(n));

  // Marginal per subset: atoms keyed by the projected coordinate tuple.
  const unsigned count = (1u << n) - 1;
  std::vector<std::vector<std::vector<std::size_t>>> keys(count);
  std::vector<std::vector<Atom>> atoms(count);
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> index(count);
  std::vector<std::vector<std::size_t>> cell_atom(count);

  auto subset_coords = [&](unsigned mask, const std::vector<std::size_t>& c) {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < n; ++a)
      if (mask & (1u << a)) out.push_back(c[a]);
    return out;
  };
  auto subset_label = [&](unsigned mask, const std::vector<std::size_t>& key) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    for (std::size_t a = 0; a < n; ++a)
      if (mask & (1u << a)) parts.push_back(table.axis_labels[a][key[pos++]]);
    if (parts.size() == 1) return parts[0];
    return join_labels(parts);
  };

  for (unsigned mask = 1; mask <= count; ++mask) {
    auto& idx = index[mask - 1];
    cell_atom[mask - 1].resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      auto key = subset_coords(mask, cells[c].first);
      auto [it, inserted] = idx.emplace(key, atoms[mask - 1].size());
      if (inserted) {
        atoms[mask - 1].push_back(
            {subset_label(mask, key), cells[c].second});
        keys[mask - 1].push_back(std::move(key));
      } else {
        atoms[mask - 1][it->second].mass += cells[c].second;
      }
      cell_atom[mask - 1][c] = it->second;
    }
  }

  // Object order must match IndexingCategory::full: mask 1..count.
  std::vector<ProbSpace> spaces;
  spaces.reserve(count);
  for (unsigned mask = 1; mask <= count; ++mask)
    spaces.emplace_back(std::move(atoms[mask - 1]));

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  for (const auto& [src, dst] : shape.covering_arrows()) {
    const unsigned ms = static_cast<unsigned>(src) + 1;
    const unsigned md = static_cast<unsigned>(dst) + 1;
    std::vector<std::size_t> map(spaces[src].size());
    // Project a source key (coords of ms) onto the coords of md.
    for (std::size_t a = 0; a < keys[ms - 1].size(); ++a) {
      std::vector<std::size_t> projected;
      std::size_t pos = 0;
      for (std::size_t bit = 0; bit < n; ++bit) {
        if (!(ms & (1u << bit))) continue;
        if (md & (1u << bit)) projected.push_back(keys[ms - 1][a][pos]);
        ++pos;
      }
      map[a] = index[md - 1].at(projected);
    }
    maps.emplace(std::make_pair(src, dst), std::move(map));
  }
  return Diagram::build_indexed(std::move(shape), std::move(spaces),
                                std::move(maps));
}

MinimalityReport is_minimal(const Diagram& diagram) {
  const std::size_t n = diagram.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (diagram.shape().reaches(i, j) || diagram.shape().reaches(j, i))
        continue;  // comparable pairs are trivially separated
      const std::size_t k = diagram.shape().lca(i, j);
      const auto& mi = diagram.atom_map(k, i);
      const auto& mj = diagram.atom_map(k, j);
      std::unordered_map<std::size_t, std::size_t> seen;
      const std::size_t stride = diagram.space(j).size();
      for (std::size_t a = 0; a < diagram.space(k).size(); ++a) {
        const std::size_t key = mi[a] * stride + mj[a];
        auto [it, inserted] = seen.emplace(key, a);
        if (!inserted) {
          MinimalityReport report;
          report.minimal = false;
          report.witness = MinimalityWitness{
              i, j, k, diagram.space(k).atom(it->second).label,
              diagram.space(k).atom(a).label};
          return report;
        }
      }
    }
  }
  return {};
}

Diagram condition(const Diagram& diagram, const Reduction& from_initial,
                  std::size_t target_atom) {
  const std::size_t init = diagram.shape().initial();
  if (!(from_initial.source == diagram.space(init)))
    fail(Errc::invalid_reduction,
         "reduction source is not the initial space of the diagram");
  check_reduction(from_initial);
  if (target_atom >= from_initial.target.size())
    fail(Errc::zero_mass_atom, "target atom index out of range");
  const Rat& weight = from_initial.target.mass(target_atom);

  const std::size_t n = diagram.size();
  // Dispatch the reduction over the diagram: the map must factor
  // through every space. Atoms of space i inherit the image of any
  // initial-space preimage; all preimages must agree.
  std::vector<std::vector<std::size_t>> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& to_i = diagram.atom_map(init, i);
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    images[i].assign(diagram.space(i).size(), unset);
    for (std::size_t a = 0; a < to_i.size(); ++a) {
      const std::size_t b = to_i[a];
      const std::size_t u = from_initial.map[a];
      if (images[i][b] == unset) {
        images[i][b] = u;
      } else if (images[i][b] != u) {
        fail(Errc::invalid_reduction,
             "reduction does not dispatch over object '" +
                 diagram.shape().object_name(i) + "'");
      }
    }
  }

  std::vector<ProbSpace> spaces;
  spaces.reserve(n);
  std::vector<std::vector<std::size_t>> reindex(n);
  for (std::size_t i = 0; i < n; ++i) {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    reindex[i].assign(diagram.space(i).size(), unset);
    std::vector<Atom> atoms;
    for (std::size_t b = 0; b < diagram.space(i).size(); ++b) {
      if (images[i][b] != target_atom) continue;
      reindex[i][b] = atoms.size();
      atoms.push_back(
          {diagram.space(i).atom(b).label, diagram.space(i).mass(b) / weight});
    }
    if (atoms.empty())
      fail(Errc::zero_mass_atom, "slice is empty at object '" +
                                     diagram.shape().object_name(i) + "'");
    spaces.emplace_back(std::move(atoms));
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  for (const auto& [src, dst] : diagram.shape().covering_arrows()) {
    const auto& full = diagram.atom_map(src, dst);
    std::vector<std::size_t> map(spaces[src].size());
    for (std::size_t b = 0; b < full.size(); ++b) {
      if (reindex[src][b] == static_cast<std::size_t>(-1)) continue;
      map[reindex[src][b]] = reindex[dst][full[b]];
    }
    maps.emplace(std::make_pair(src, dst), std::move(map));
  }
  return Diagram::build_indexed(diagram.shape(), std::move(spaces),
                                std::move(maps));
}

namespace {

/// Backtracking isomorphism search. A candidate bijection on the
/// initial space forces the bijection at every other object through
/// the structure maps; conflicts prune the search.
class IsoSearch {
 public:
  IsoSearch(const Diagram& left, const Diagram& right)
      : left_(left), right_(right), n_(left.size()) {}

  std::optional<std::vector<std::vector<std::size_t>>> run() {
    if (!(left_.shape() == right_.shape())) return std::nullopt;
    for (std::size_t i = 0; i < n_; ++i)
      if (left_.space(i).size() != right_.space(i).size()) return std::nullopt;
    init_ = left_.shape().initial();
    const std::size_t m = left_.space(init_).size();
    sigma0_.assign(m, unset());
    used_.assign(m, false);
    forced_.assign(n_, {});
    forced_inv_.assign(n_, {});
    for (std::size_t i = 0; i < n_; ++i) {
      forced_[i].assign(left_.space(i).size(), unset());
      forced_inv_[i].assign(left_.space(i).size(), unset());
    }
    if (!assign(0)) return std::nullopt;
    return forced_;
  }

 private:
  static std::size_t unset() { return static_cast<std::size_t>(-1); }

  bool assign(std::size_t a) {
    const std::size_t m = left_.space(init_).size();
    if (a == m) return true;
    for (std::size_t b = 0; b < m; ++b) {
      if (used_[b]) continue;
      if (left_.space(init_).mass(a) != right_.space(init_).mass(b)) continue;
      std::vector<std::pair<std::size_t, std::size_t>> trail;
      if (propagate(a, b, trail)) {
        used_[b] = true;
        sigma0_[a] = b;
        if (assign(a + 1)) return true;
        sigma0_[a] = unset();
        used_[b] = false;
      }
      for (auto [obj, atom] : trail) {
        forced_inv_[obj][forced_[obj][atom]] = unset();
        forced_[obj][atom] = unset();
      }
    }
    return false;
  }

  bool propagate(std::size_t a, std::size_t b,
                 std::vector<std::pair<std::size_t, std::size_t>>& trail) {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t la = left_.atom_map(init_, i)[a];
      const std::size_t rb = right_.atom_map(init_, i)[b];
      if (forced_[i][la] != unset()) {
        if (forced_[i][la] != rb) return false;
        continue;
      }
      if (forced_inv_[i][rb] != unset()) return false;
      if (left_.space(i).mass(la) != right_.space(i).mass(rb)) return false;
      forced_[i][la] = rb;
      forced_inv_[i][rb] = la;
      trail.emplace_back(i, la);
    }
    return true;
  }

  const Diagram& left_;
  const Diagram& right_;
  std::size_t n_;
  std::size_t init_ = 0;
  std::vector<std::size_t> sigma0_;
  std::vector<bool> used_;
  std::vector<std::vector<std::size_t>> forced_;
  std::vector<std::vector<std::size_t>> forced_inv_;
};

}  // namespace

std::optional<std::vector<std::vector<std::size_t>>> find_isomorphism(
    const Diagram& left, const Diagram& right) {
  return IsoSearch(left, right).run();
}

bool isomorphic(const Diagram& left, const Diagram& right) {
  return find_isomorphism(left, right).has_value();
}

}  // namespace trop
