#include "trop/prob_space.hpp"

#include "trop/error.hpp"

#include <algorithm>

namespace trop {

ProbSpace::ProbSpace(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty())
    fail(Errc::invalid_space, "probability space needs at least one atom");
  Rat total = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (a.label.empty()) fail(Errc::invalid_space, "empty atom label");
    if (a.mass <= 0)
      fail(Errc::invalid_space, "atom '" + a.label + "' has non-positive mass");
    if (!by_label_.emplace(a.label, i).second)
      fail(Errc::invalid_space, "duplicate atom label '" + a.label + "'");
    total += a.mass;
  }
  if (total != 1)
    fail(Errc::invalid_space,
         "masses sum to " + rat_to_string(total) + ", expected 1");
}

ProbSpace ProbSpace::uniform(std::size_t n) {
  if (n < 1) fail(Errc::invalid_argument, "uniform space needs n >= 1");
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    atoms.push_back({std::to_string(i), Rat(1, n)});
  return ProbSpace(std::move(atoms));
}

ProbSpace ProbSpace::point(std::string label) {
  return ProbSpace({{std::move(label), Rat(1)}});
}

std::optional<std::size_t> ProbSpace::index_of(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

double entropy(const ProbSpace& space) {
  double h = 0.0;
  for (const Atom& a : space.atoms()) h += entropy_term(a.mass);
  return h;
}

ProbSpace tensor(const ProbSpace& left, const ProbSpace& right) {
  std::vector<Atom> atoms;
  atoms.reserve(left.size() * right.size());
  for (const Atom& a : left.atoms())
    for (const Atom& b : right.atoms())
      atoms.push_back({join_labels(a.label, b.label), a.mass * b.mass});
  return ProbSpace(std::move(atoms));
}

namespace {
std::vector<Rat> sorted_masses(const ProbSpace& space) {
  std::vector<Rat> masses;
  masses.reserve(space.size());
  for (const Atom& a : space.atoms()) masses.push_back(a.mass);
  std::sort(masses.begin(), masses.end());
  return masses;
}
}  // namespace

bool isomorphic(const ProbSpace& left, const ProbSpace& right) {
  return sorted_masses(left) == sorted_masses(right);
}

void check_reduction(const Reduction& reduction) {
  if (reduction.map.size() != reduction.source.size())
    fail(Errc::invalid_reduction, "map is not total on the source atoms");
  std::vector<Rat> pushed(reduction.target.size(), Rat(0));
  std::vector<bool> hit(reduction.target.size(), false);
  for (std::size_t i = 0; i < reduction.map.size(); ++i) {
    const std::size_t t = reduction.map[i];
    if (t >= reduction.target.size())
      fail(Errc::invalid_reduction, "map image out of range");
    pushed[t] += reduction.source.mass(i);
    hit[t] = true;
  }
  for (std::size_t t = 0; t < reduction.target.size(); ++t) {
    if (!hit[t])
      fail(Errc::not_surjective, "target atom '" +
                                     reduction.target.atom(t).label +
                                     "' has empty preimage");
    if (pushed[t] != reduction.target.mass(t))
      fail(Errc::mass_mismatch,
           "target atom '" + reduction.target.atom(t).label + "' receives " +
               rat_to_string(pushed[t]) + ", expected " +
               rat_to_string(reduction.target.mass(t)));
  }
}

Reduction reduction_from_labels(
    ProbSpace source, ProbSpace target,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::size_t> map(source.size(), source.size());
  std::vector<bool> assigned(source.size(), false);
  for (const auto& [src, dst] : pairs) {
    auto si = source.index_of(src);
    if (!si)
      fail(Errc::invalid_reduction, "unknown source atom '" + src + "'");
    auto ti = target.index_of(dst);
    if (!ti)
      fail(Errc::invalid_reduction, "unknown target atom '" + dst + "'");
    if (assigned[*si])
      fail(Errc::invalid_reduction, "source atom '" + src + "' mapped twice");
    assigned[*si] = true;
    map[*si] = *ti;
  }
  for (std::size_t i = 0; i < source.size(); ++i)
    if (!assigned[i])
      fail(Errc::invalid_reduction,
           "source atom '" + source.atom(i).label + "' has no image");
  Reduction reduction{std::move(source), std::move(target), std::move(map)};
  check_reduction(reduction);
  return reduction;
}

std::pair<ProbSpace, Reduction> pushforward(
    const ProbSpace& space,
    const std::function<std::string(const std::string&)>& map) {
  std::vector<Atom> target_atoms;
  std::unordered_map<std::string, std::size_t> target_index;
  std::vector<std::size_t> atom_map(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    std::string image = map(space.atom(i).label);
    auto [it, inserted] =
        target_index.emplace(image, target_atoms.size());
    if (inserted) {
      target_atoms.push_back({std::move(image), space.mass(i)});
    } else {
      target_atoms[it->second].mass += space.mass(i);
    }
    atom_map[i] = it->second;
  }
  ProbSpace target(std::move(target_atoms));
  Reduction reduction{space, target, std::move(atom_map)};
  check_reduction(reduction);
  return {std::move(target), std::move(reduction)};
}

}  // namespace trop
