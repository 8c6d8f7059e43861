#include "trop/indexing_category.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace trop {

std::optional<std::size_t> IndexingCategory::object_index(
    std::string_view name) const {
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (objects_[i] == name) return i;
  }
  return std::nullopt;
}

IndexingCategory IndexingCategory::validate(
    std::vector<std::string> objects,
    const std::vector<std::pair<std::string, std::string>>& arrows) {
  if (objects.empty())
    fail(Errc::invalid_argument, "category needs at least one object");
  const std::size_t n = objects.size();

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (objects[i].empty())
      fail(Errc::invalid_argument, "empty object name");
    if (!index.emplace(objects[i], i).second)
      fail(Errc::invalid_argument, "duplicate object '" + objects[i] + "'");
  }

  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [src, dst] : arrows) {
    auto is = index.find(src);
    auto id = index.find(dst);
    if (is == index.end())
      fail(Errc::invalid_argument, "arrow source '" + src + "' not declared");
    if (id == index.end())
      fail(Errc::invalid_argument, "arrow target '" + dst + "' not declared");
    if (!seen.emplace(is->second, id->second).second)
      fail(Errc::duplicate_arrow, "duplicate arrow " + src + " -> " + dst);
    leq[is->second][id->second] = true;
  }

  // Warshall closure; categories are tiny (≤ 31 objects).
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq[k][j]) leq[i][j] = true;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq[i][j] && leq[j][i])
        fail(Errc::cycle_detected,
             "cycle through '" + objects[i] + "' and '" + objects[j] + "'");

  IndexingCategory cat;
  cat.objects_ = std::move(objects);
  cat.leq_ = std::move(leq);

  cat.lca_.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> ancestors;
      for (std::size_t k = 0; k < n; ++k)
        if (cat.leq_[k][i] && cat.leq_[k][j]) ancestors.push_back(k);
      std::optional<std::size_t> best;
      for (std::size_t k : ancestors) {
        bool least = true;
        for (std::size_t l : ancestors)
          if (!cat.leq_[l][k]) { least = false; break; }
        if (least) { best = k; break; }
      }
      if (!best)
        fail(Errc::missing_lca, "objects '" + cat.objects_[i] + "' and '" +
                                    cat.objects_[j] +
                                    "' have no least common ancestor");
      cat.lca_[i][j] = *best;
    }
  }

  // Global LCA fold gives the initial object.
  std::size_t init = 0;
  for (std::size_t i = 1; i < n; ++i) init = cat.lca_[init][i];
  cat.initial_ = init;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !cat.leq_[i][j]) continue;
      bool covering = true;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (cat.leq_[i][k] && cat.leq_[k][j]) { covering = false; break; }
      }
      if (covering) cat.covering_.emplace_back(i, j);
    }
  }
  return cat;
}

IndexingCategory IndexingCategory::full(unsigned n) {
  if (n < 1) fail(Errc::invalid_argument, "full category needs n >= 1");
  if (n > 5) fail(Errc::size_limit, "full category capped at n = 5");
  const unsigned count = (1u << n) - 1;
  std::vector<std::string> names(count);
  auto subset_name = [n](unsigned mask) {
    std::string name;
    for (unsigned b = 0; b < n; ++b) {
      if (mask & (1u << b)) {
        if (!name.empty()) name += ',';
        name += std::to_string(b + 1);
      }
    }
    return name;
  };
  for (unsigned mask = 1; mask <= count; ++mask)
    names[mask - 1] = subset_name(mask);

  std::vector<std::pair<std::string, std::string>> arrows;
  for (unsigned a = 1; a <= count; ++a)
    for (unsigned b = 1; b <= count; ++b)
      if (a != b && (a & b) == b) arrows.emplace_back(names[a - 1], names[b - 1]);
  return validate(std::move(names), arrows);
}

IndexingCategory IndexingCategory::chain(unsigned k) {
  if (k < 1) fail(Errc::invalid_argument, "chain needs k >= 1");
  std::vector<std::string> names(k);
  for (unsigned i = 0; i < k; ++i) names[i] = std::to_string(i + 1);
  std::vector<std::pair<std::string, std::string>> arrows;
  for (unsigned i = 1; i < k; ++i) arrows.emplace_back(names[i], names[i - 1]);
  return validate(std::move(names), arrows);
}

std::vector<std::pair<std::size_t, std::size_t>>
IndexingCategory::all_arrows() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (i != j && leq_[i][j]) out.emplace_back(i, j);
  return out;
}

bool IndexingCategory::is_chain() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (!leq_[i][j] && !leq_[j][i]) return false;
  return true;
}

std::vector<std::size_t> IndexingCategory::chain_order() const {
  if (!is_chain()) fail(Errc::not_a_chain, "shape is not a chain");
  std::vector<std::size_t> order(size());
  for (std::size_t i = 0; i < size(); ++i) order[i] = i;
  // Coarsest first: fewer objects reachable means coarser.
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    std::size_t ra = 0, rb = 0;
    for (std::size_t j = 0; j < size(); ++j) {
      ra += leq_[a][j];
      rb += leq_[b][j];
    }
    return ra < rb;
  });
  return order;
}

}  // namespace trop
