#include "trop/mixture.hpp"

#include "trop/error.hpp"

#include <cmath>
#include <map>

namespace trop {

namespace {

void validate_family(const DiagramFamily& family) {
  if (family.members.size() != family.parameter.size())
    fail(Errc::invalid_argument, "family needs one member per parameter atom");
  for (const Diagram& member : family.members)
    if (!(member.shape() == family.members.front().shape()))
      fail(Errc::shape_mismatch, "family members have different shapes");
}

}  // namespace

MixtureResult mix(const DiagramFamily& family) {
  validate_family(family);
  const IndexingCategory& shape = family.members.front().shape();
  const std::size_t n = shape.size();
  const ProbSpace& theta = family.parameter;

  // Atom offsets per (object, member) for block-wise index maps.
  std::vector<std::vector<std::size_t>> offset(
      n, std::vector<std::size_t>(theta.size() + 1, 0));
  std::vector<ProbSpace> spaces;
  spaces.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Atom> atoms;
    for (std::size_t t = 0; t < theta.size(); ++t) {
      offset[i][t] = atoms.size();
      const ProbSpace& member_space = family.members[t].space(i);
      for (const Atom& a : member_space.atoms())
        atoms.push_back({join_labels(theta.atom(t).label, a.label),
                         theta.mass(t) * a.mass});
    }
    offset[i][theta.size()] = atoms.size();
    spaces.emplace_back(std::move(atoms));
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  for (const auto& [src, dst] : shape.covering_arrows()) {
    std::vector<std::size_t> map(spaces[src].size());
    for (std::size_t t = 0; t < theta.size(); ++t) {
      const auto& member_map = family.members[t].atom_map(src, dst);
      for (std::size_t a = 0; a < member_map.size(); ++a)
        map[offset[src][t] + a] = offset[dst][t] + member_map[a];
    }
    maps.emplace(std::make_pair(src, dst), std::move(map));
  }
  Diagram total =
      Diagram::build_indexed(shape, std::move(spaces), std::move(maps));

  const std::size_t init = shape.initial();
  std::vector<std::size_t> provenance(total.space(init).size());
  for (std::size_t t = 0; t < theta.size(); ++t)
    for (std::size_t a = offset[init][t]; a < offset[init][t + 1]; ++a)
      provenance[a] = t;
  Reduction to_parameter{total.space(init), theta, std::move(provenance)};
  check_reduction(to_parameter);
  return {std::move(total), std::move(to_parameter)};
}

EntropyVector mixture_entropy_formula(const DiagramFamily& family) {
  validate_family(family);
  const std::size_t n = family.members.front().size();
  EntropyVector out;
  out.values.assign(n, 0.0);
  for (std::size_t t = 0; t < family.parameter.size(); ++t) {
    const double weight = to_double(family.parameter.mass(t));
    EntropyVector member = entropy_vector(family.members[t]);
    for (std::size_t i = 0; i < n; ++i)
      out.values[i] += weight * member.values[i];
  }
  const double h_theta = entropy(family.parameter);
  for (std::size_t i = 0; i < n; ++i) out.values[i] += h_theta;
  return out;
}

Diagram radical_mix(const Diagram& diagram, unsigned n) {
  if (n < 1) fail(Errc::invalid_argument, "radical mixture needs n >= 1");
  if (n == 1) return diagram;
  // Λ_{1/n} with the member carried by the first atom.
  ProbSpace lambda({{"1", Rat(1, n)}, {"0", Rat(n - 1, n)}});
  DiagramFamily family{
      std::move(lambda),
      {diagram, constant_diagram(diagram.shape(), ProbSpace::point())}};
  return mix(family).total;
}

bool distributivity_check(const DiagramFamily& f, const DiagramFamily& g) {
  validate_family(f);
  validate_family(g);
  Diagram lhs = tensor(mix(f).total, mix(g).total);

  DiagramFamily product{tensor(f.parameter, g.parameter), {}};
  product.members.reserve(f.members.size() * g.members.size());
  for (std::size_t a = 0; a < f.members.size(); ++a)
    for (std::size_t b = 0; b < g.members.size(); ++b)
      product.members.push_back(tensor(f.members[a], g.members[b]));
  Diagram rhs = mix(product).total;
  return isomorphic(lhs, rhs);
}

double binary_entropy(double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    fail(Errc::invalid_argument, "binary entropy needs alpha in [0,1]");
  double h = 0.0;
  if (alpha > 0.0) h -= alpha * std::log(alpha);
  if (alpha < 1.0) h -= (1.0 - alpha) * std::log(1.0 - alpha);
  return h;
}

}  // namespace trop
