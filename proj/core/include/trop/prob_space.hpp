#pragma once

#include "trop/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace trop {

struct Atom {
  std::string label;
  Rat mass;

  bool operator==(const Atom& other) const = default;
};

/// Finite probability space with exact rational atom masses.
/// All atoms carry strictly positive mass and the masses sum to one.
/// Immutable; all operations on it are pure.
class ProbSpace {
 public:
  explicit ProbSpace(std::vector<Atom> atoms);

  static ProbSpace uniform(std::size_t n);
  static ProbSpace point(std::string label = "*");

  std::size_t size() const { return atoms_.size(); }
  const Atom& atom(std::size_t i) const { return atoms_[i]; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  const Rat& mass(std::size_t i) const { return atoms_[i].mass; }

  bool operator==(const ProbSpace& other) const = default;

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<std::string, std::size_t> by_label_;
};

/// Shannon entropy in nats: −Σ p ln p.
double entropy(const ProbSpace& space);

/// Product space: label pairs, masses multiply.
ProbSpace tensor(const ProbSpace& left, const ProbSpace& right);

/// Mass-preserving bijection of atoms exists, i.e. equal sorted mass
/// multisets.
bool isomorphic(const ProbSpace& left, const ProbSpace& right);

/// Measure-preserving map between spaces, stored as target atom index
/// per source atom.
struct Reduction {
  ProbSpace source;
  ProbSpace target;
  std::vector<std::size_t> map;
};

/// Verifies totality, surjectivity and exact measure preservation.
/// Throws MassMismatch / NotSurjective / InvalidReduction.
void check_reduction(const Reduction& reduction);

Reduction reduction_from_labels(
    ProbSpace source, ProbSpace target,
    const std::vector<std::pair<std::string, std::string>>& pairs);

/// Image space of a total label map, with aggregated masses, plus the
/// witnessing reduction. Target atoms appear in first-hit order.
std::pair<ProbSpace, Reduction> pushforward(
    const ProbSpace& space,
    const std::function<std::string(const std::string&)>& map);

}  // namespace trop
