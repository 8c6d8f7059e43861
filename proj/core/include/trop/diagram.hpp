#pragma once

#include "trop/indexing_category.hpp"
#include "trop/prob_space.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace trop {

/// Commutative diagram of probability spaces over an indexing
/// category. Atom maps are supplied on the covering arrows; all
/// composites are derived once, checked for commutativity and cached.
///
/// Immutable after build; pure operations; concurrent reads are safe.
class Diagram {
 public:
  using LabelPairs = std::vector<std::pair<std::string, std::string>>;

  /// Atom maps keyed by (source, target) object names. Must cover every
  /// covering arrow; maps for additional arrows are checked against the
  /// derived composites.
  static Diagram build(
      IndexingCategory shape, std::vector<ProbSpace> spaces,
      const std::map<std::pair<std::string, std::string>, LabelPairs>&
          arrow_maps);

  /// Index-level variant; keys are object index pairs.
  static Diagram build_indexed(
      IndexingCategory shape, std::vector<ProbSpace> spaces,
      std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>>
          maps);

  const IndexingCategory& shape() const { return shape_; }
  std::size_t size() const { return shape_.size(); }
  const ProbSpace& space(std::size_t i) const { return spaces_[i]; }
  const ProbSpace& initial_space() const { return spaces_[shape_.initial()]; }

  /// Atom map along i ⤳ j (identity when i == j).
  const std::vector<std::size_t>& atom_map(std::size_t i, std::size_t j) const;

  bool operator==(const Diagram& other) const = default;

  /// Empty shell; real diagrams come from the build factories.
  Diagram() = default;

 private:
  IndexingCategory shape_;
  std::vector<ProbSpace> spaces_;
  // maps_[i][j] set for every i ⤳ j, including the identity at i == j.
  std::vector<std::vector<std::vector<std::size_t>>> maps_;
};

/// Per-object entropies in nats, in shape object order.
struct EntropyVector {
  std::vector<double> values;

  double l1() const;
};

EntropyVector entropy_vector(const Diagram& diagram);
double l1_distance(const EntropyVector& a, const EntropyVector& b);
EntropyVector operator+(const EntropyVector& a, const EntropyVector& b);

Diagram tensor(const Diagram& left, const Diagram& right);

/// X^G: the same space at every object, identity maps everywhere.
Diagram constant_diagram(const IndexingCategory& shape, const ProbSpace& space);

/// Joint distribution over a product of finite axes; cells with zero
/// mass may be omitted (or listed — they are skipped).
struct JointTable {
  std::vector<std::vector<std::string>> axis_labels;
  std::vector<std::pair<std::vector<std::size_t>, Rat>> cells;
};

/// Minimal Λₙ-diagram of all marginals of a joint table, with
/// coordinate projections as reductions. n ≤ 4.
Diagram lambda_diagram(const JointTable& table);

struct MinimalityWitness {
  std::size_t object_left;
  std::size_t object_right;
  std::size_t object_top;
  std::string atom_a;
  std::string atom_b;
};

struct MinimalityReport {
  bool minimal = true;
  std::optional<MinimalityWitness> witness;
};

/// A diagram is minimal when for every pair of objects (i,j) the fan
/// from lca(i,j) separates atoms: a ↦ (image in i, image in j) is
/// injective. The witness names two merged atoms otherwise.
MinimalityReport is_minimal(const Diagram& diagram);

/// Slice of the diagram along a reduction to a constant diagram. The
/// reduction is given at the initial space and dispatched over the
/// diagram; every space is restricted to the preimage of the target
/// atom and renormalized by its mass.
Diagram condition(const Diagram& diagram, const Reduction& from_initial,
                  std::size_t target_atom);

/// Object-wise atom bijections commuting with every reduction and
/// preserving masses; found by backtracking over the initial space.
std::optional<std::vector<std::vector<std::size_t>>> find_isomorphism(
    const Diagram& left, const Diagram& right);

bool isomorphic(const Diagram& left, const Diagram& right);

}  // namespace trop
