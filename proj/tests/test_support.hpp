#pragma once

#include "trop/coupling.hpp"
#include "trop/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace troptest {

using namespace trop;

// Independent entropy oracle: plain long-double summation.
inline double oracle_entropy(const std::vector<Rat>& masses) {
  long double h = 0.0L;
  for (const Rat& p : masses) {
    const long double v = p.convert_to<long double>();
    if (v > 0) h -= v * std::log(v);
  }
  return static_cast<double>(h);
}

inline double oracle_entropy(const ProbSpace& space) {
  std::vector<Rat> masses;
  for (const Atom& a : space.atoms()) masses.push_back(a.mass);
  return oracle_entropy(masses);
}

// Random masses: positive integer weights over a common denominator.
inline ProbSpace random_space(std::mt19937_64& rng, std::size_t max_atoms,
                              const std::string& prefix = "a") {
  std::uniform_int_distribution<std::size_t> natoms(1, max_atoms);
  const std::size_t n = natoms(rng);
  std::uniform_int_distribution<int> weight(1, 6);
  std::vector<int> weights(n);
  int total = 0;
  for (auto& w : weights) total += (w = weight(rng));
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < n; ++i)
    atoms.push_back({prefix + std::to_string(i), Rat(weights[i], total)});
  return ProbSpace(std::move(atoms));
}

inline Diagram single_space(const ProbSpace& space) {
  return constant_diagram(IndexingCategory::chain(1), space);
}

// Random commutative diagram: partitions of the initial atoms that
// coarsen along the poset, spaces are the quotients.
inline Diagram random_diagram(std::mt19937_64& rng,
                              const IndexingCategory& shape,
                              std::size_t init_atoms) {
  const ProbSpace top = random_space(rng, init_atoms);
  const std::size_t n = shape.size();
  const std::size_t m = top.size();

  // Finest first.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    std::size_t ra = 0, rb = 0;
    for (std::size_t j = 0; j < n; ++j) {
      ra += shape.reaches(a, j);
      rb += shape.reaches(b, j);
    }
    return ra > rb;
  });

  std::vector<std::vector<std::size_t>> block(n, std::vector<std::size_t>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a) block[i][a] = a;

  auto canon = [m](std::vector<std::size_t>& b) {
    // Blocks renamed by first occurrence.
    std::map<std::size_t, std::size_t> rename;
    for (std::size_t a = 0; a < m; ++a) {
      auto [it, inserted] = rename.emplace(b[a], rename.size());
      b[a] = it->second;
    }
  };

  for (std::size_t idx : order) {
    if (idx == shape.initial()) continue;
    // Join of the finer neighbours' partitions.
    std::vector<std::size_t> parent(m);
    for (std::size_t a = 0; a < m; ++a) parent[a] = a;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& [src, dst] : shape.covering_arrows()) {
      if (dst != idx) continue;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b2 = a + 1; b2 < m; ++b2)
          if (block[src][a] == block[src][b2])
            parent[find(a)] = find(b2);
    }
    // Random extra coarsening.
    std::uniform_int_distribution<int> coin(0, 2);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    const int merges = coin(rng);
    for (int t = 0; t < merges; ++t)
      parent[find(pick(rng))] = find(pick(rng));
    for (std::size_t a = 0; a < m; ++a) block[idx][a] = find(a);
    canon(block[idx]);
  }
  canon(block[shape.initial()]);

  // Quotient spaces and block maps.
  std::vector<ProbSpace> spaces;
  std::vector<std::vector<std::size_t>> atom_of_block(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t blocks = 0;
    for (std::size_t a = 0; a < m; ++a)
      blocks = std::max(blocks, block[i][a] + 1);
    std::vector<Rat> mass(blocks, Rat(0));
    for (std::size_t a = 0; a < m; ++a) mass[block[i][a]] += top.mass(a);
    std::vector<Atom> atoms;
    for (std::size_t b = 0; b < blocks; ++b)
      atoms.push_back({"b" + std::to_string(b), mass[b]});
    spaces.emplace_back(std::move(atoms));
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  for (const auto& [src, dst] : shape.covering_arrows()) {
    std::vector<std::size_t> map(spaces[src].size());
    for (std::size_t a = 0; a < m; ++a) map[block[src][a]] = block[dst][a];
    maps.emplace(std::make_pair(src, dst), std::move(map));
  }
  return Diagram::build_indexed(shape, std::move(spaces), std::move(maps));
}

// Random surjection from the initial space onto a fresh space U.
inline Reduction random_reduction_to_u(std::mt19937_64& rng, const Diagram& x,
                                       std::size_t max_u) {
  const ProbSpace& init = x.initial_space();
  const std::size_t u = std::min(max_u, init.size());
  std::uniform_int_distribution<std::size_t> pick(0, u - 1);
  std::vector<std::size_t> to_u(init.size());
  for (std::size_t a = 0; a < init.size(); ++a)
    to_u[a] = (a < u) ? a : pick(rng);  // first u atoms make it surjective
  std::vector<Rat> mass(u, Rat(0));
  for (std::size_t a = 0; a < init.size(); ++a) mass[to_u[a]] += init.mass(a);
  std::vector<Atom> atoms;
  for (std::size_t b = 0; b < u; ++b)
    atoms.push_back({"u" + std::to_string(b), mass[b]});
  Reduction r{init, ProbSpace(std::move(atoms)), std::move(to_u)};
  check_reduction(r);
  return r;
}

// Dense-grid oracle over the transportation polytope: all matrices
// with entries in steps of 1/resolution. Feasibility is exact.
inline double grid_min_coupling_entropy(const std::vector<Rat>& p,
                                        const std::vector<Rat>& q,
                                        long resolution) {
  const std::size_t m = p.size();
  const std::size_t n = q.size();
  std::vector<long> rowrem(m), colrem(n);
  for (std::size_t i = 0; i < m; ++i) {
    Rat scaled = p[i] * resolution;
    if (denominator(scaled) != 1)
      throw std::runtime_error("marginal not on the grid");
    rowrem[i] = scaled.convert_to<long>();
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rat scaled = q[j] * resolution;
    if (denominator(scaled) != 1)
      throw std::runtime_error("marginal not on the grid");
    colrem[j] = scaled.convert_to<long>();
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<long> cells(m * n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t cell) {
    const std::size_t i = cell / n;
    const std::size_t j = cell % n;
    if (i == m) {
      for (long c : colrem)
        if (c != 0) return;
      std::vector<Rat> masses;
      for (long v : cells)
        if (v > 0) masses.emplace_back(v, resolution);
      best = std::min(best, oracle_entropy(masses));
      return;
    }
    // Last column of a row and last row of a column are forced.
    if (j == n - 1) {
      const long v = rowrem[i];
      if (v < 0 || v > colrem[j]) return;
      cells[cell] = v;
      rowrem[i] -= v;
      colrem[j] -= v;
      rec(cell + 1);
      rowrem[i] += v;
      colrem[j] += v;
      cells[cell] = 0;
      return;
    }
    if (i == m - 1) {
      const long v = colrem[j];
      if (v < 0 || v > rowrem[i]) return;
      cells[cell] = v;
      rowrem[i] -= v;
      colrem[j] -= v;
      rec(cell + 1);
      rowrem[i] += v;
      colrem[j] += v;
      cells[cell] = 0;
      return;
    }
    const long cap = std::min(rowrem[i], colrem[j]);
    for (long v = 0; v <= cap; ++v) {
      cells[cell] = v;
      rowrem[i] -= v;
      colrem[j] -= v;
      rec(cell + 1);
      rowrem[i] += v;
      colrem[j] += v;
      cells[cell] = 0;
    }
  };
  rec(0);
  return best;
}

}  // namespace troptest
