#pragma once

#include "trop/error.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trop {

/// Finite poset shape of a diagram. Arrows point from finer objects
/// toward their quotients; every pair of objects has a least common
/// ancestor, hence a unique initial (finest) object exists.
///
/// Immutable after validation; safe for concurrent reads.
class IndexingCategory {
 public:
  /// Builds the category from raw objects and arrows: computes the
  /// reflexive-transitive closure, checks antisymmetry, pairwise LCAs
  /// and the covering (transitive-reduction) arrows.
  static IndexingCategory validate(
      std::vector<std::string> objects,
      const std::vector<std::pair<std::string, std::string>>& arrows);

  /// Λₙ: non-empty subsets of {1..n} ordered by reverse inclusion.
  /// Objects serialize as sorted index lists like "1,3". n ≤ 5.
  static IndexingCategory full(unsigned n);

  /// Cₖ: objects "1".."k", arrow i → j whenever i ≥ j.
  static IndexingCategory chain(unsigned k);

  std::size_t size() const { return objects_.size(); }
  const std::string& object_name(std::size_t i) const { return objects_[i]; }
  const std::vector<std::string>& object_names() const { return objects_; }
  std::optional<std::size_t> object_index(std::string_view name) const;

  /// i ⤳ j in the reflexive-transitive order.
  bool reaches(std::size_t i, std::size_t j) const { return leq_[i][j]; }

  std::size_t lca(std::size_t i, std::size_t j) const { return lca_[i][j]; }

  /// The unique finest object (reaches everything).
  std::size_t initial() const { return initial_; }

  const std::vector<std::pair<std::size_t, std::size_t>>& covering_arrows()
      const {
    return covering_;
  }

  /// All ordered pairs (i,j), i≠j, with i ⤳ j.
  std::vector<std::pair<std::size_t, std::size_t>> all_arrows() const;

  bool is_chain() const;

  /// Object indices sorted coarsest first; throws NotAChain otherwise.
  std::vector<std::size_t> chain_order() const;

  bool operator==(const IndexingCategory& other) const {
    return objects_ == other.objects_ && leq_ == other.leq_;
  }

  /// Empty shell; real categories come from the factories above.
  IndexingCategory() = default;

 private:
  std::vector<std::string> objects_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<std::size_t>> lca_;
  std::vector<std::pair<std::size_t, std::size_t>> covering_;
  std::size_t initial_ = 0;
};

}  // namespace trop
