#pragma once

#include "trop/diagram.hpp"

#include <string>
#include <vector>

namespace trop {

/// Permutation of {0..degree−1}, stored as the image vector.
using Perm = std::vector<std::size_t>;

Perm perm_identity(std::size_t degree);
Perm perm_compose(const Perm& first_applied_last, const Perm& applied_first);

/// Parses 1-based cycle notation like "(1 2)(3 4)"; "()" is the
/// identity. Points beyond the cycles are fixed.
Perm parse_cycles(const std::string& text, std::size_t degree);
std::string format_cycles(const Perm& perm);

/// Finite permutation group with eagerly enumerated, sorted elements.
/// Enumeration is capped (GroupTooLarge beyond it); immutable after
/// construction.
class PermGroup {
 public:
  PermGroup(std::size_t degree, std::vector<Perm> generators,
            std::size_t order_cap = 5040);

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Perm>& elements() const { return elements_; }
  const std::vector<Perm>& generators() const { return generators_; }
  bool contains(const Perm& p) const;

 private:
  std::size_t degree_;
  std::vector<Perm> generators_;
  std::vector<Perm> elements_;  // sorted
};

/// Subgroups assigned to the objects of a shape, as generator lists;
/// H_i ⊆ H_j is required along every arrow i ⤳ j.
struct SubgroupDiagram {
  IndexingCategory shape;
  std::vector<std::vector<Perm>> generators;  // per object
};

/// Left-coset spaces G/H_i with uniform mass and the natural coset
/// coarsenings as reductions. Cosets are canonicalized by their
/// minimal element.
Diagram quotient_diagram(const PermGroup& group, const SubgroupDiagram& sub);

struct HomogeneityReport {
  bool homogeneous = false;
  std::vector<std::size_t> orbit_counts;  // per object
};

/// Orbit transitivity of Aut(X) on every space. Automorphisms are
/// objectwise mass-preserving atom bijections commuting with all
/// reductions, found by backtracking over the initial space.
HomogeneityReport check_homogeneous(const Diagram& diagram,
                                    std::size_t per_space_cap = 12);

/// True when the subgroup at lca(i,j) equals H_i ∩ H_j for every pair;
/// equivalent to minimality of the quotient diagram.
bool intersection_closure_check(const PermGroup& group,
                                const SubgroupDiagram& sub);

}  // namespace trop
