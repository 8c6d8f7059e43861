#pragma once

#include "trop/diagram.hpp"

#include <functional>
#include <tuple>
#include <vector>

namespace trop {

/// Joint distribution with prescribed marginals over two spaces;
/// entries are exact rationals, stored sparsely (positive only).
struct CouplingMatrix {
  ProbSpace left;
  ProbSpace right;
  std::vector<std::tuple<std::size_t, std::size_t, Rat>> entries;

  double entropy() const;
  /// Verifies entry positivity and exact marginals.
  void check() const;
};

/// Span of two diagrams of the same shape: a top diagram with
/// per-object reductions onto both, commuting with all structure maps.
class TwoFan {
 public:
  static TwoFan build(Diagram top, Diagram left, Diagram right,
                      std::vector<std::vector<std::size_t>> left_leg,
                      std::vector<std::vector<std::size_t>> right_leg);

  const Diagram& top() const { return top_; }
  const Diagram& left() const { return left_; }
  const Diagram& right() const { return right_; }
  const std::vector<std::size_t>& left_leg(std::size_t i) const {
    return left_leg_[i];
  }
  const std::vector<std::size_t>& right_leg(std::size_t i) const {
    return right_leg_[i];
  }

 private:
  TwoFan() = default;
  Diagram top_, left_, right_;
  std::vector<std::vector<std::size_t>> left_leg_, right_leg_;
};

/// Entropy distance of a fan:
/// ‖ent(top) − ent(left)‖₁ + ‖ent(top) − ent(right)‖₁.
/// Zero exactly when both legs are isomorphisms.
double kd(const TwoFan& fan);

/// Coupling of the initial spaces obtained by pushing the top initial
/// space onto pairs of images.
CouplingMatrix initial_coupling(const TwoFan& fan);

/// Fan induced by a coupling of the initial spaces: each top space is
/// the image of the coupling in X_i × Y_i. Never increases kd relative
/// to any fan restricting to the same coupling.
TwoFan induced_fan(const Diagram& left, const Diagram& right,
                   const CouplingMatrix& coupling);

/// Replaces the top by its objectwise image in the product; kd can
/// only shrink.
TwoFan minimal_reduction(const TwoFan& fan);

/// Visits every vertex of the transportation polytope of (p, q).
/// Vertices are basic solutions supported on spanning trees of the
/// complete bipartite marginal graph; each tree's triangular system is
/// solved exactly and infeasible (negative) solutions are skipped.
/// Enumeration order is deterministic.
void for_each_transport_vertex(
    const std::vector<Rat>& p, const std::vector<Rat>& q,
    const std::function<
        void(const std::vector<std::tuple<std::size_t, std::size_t, Rat>>&)>&
        visit);

/// Minimum-entropy coupling by exhaustive vertex scan — exact because
/// entropy is concave, so its minimum over the polytope is attained at
/// a vertex. Ties broken by lexicographic support. |p|·|q| ≤ cap.
CouplingMatrix min_entropy_coupling_exact(const ProbSpace& p,
                                          const ProbSpace& q,
                                          std::size_t cap = 30);

/// Mass group: a value with a (possibly huge) multiplicity. Grouped
/// inputs keep tensor powers tractable without expanding atoms.
struct GroupedMass {
  Rat value;
  BigInt count;
};

struct GreedyCoupling {
  std::vector<GroupedMass> entries;
  double entropy = 0.0;
};

/// Greedy pairing of the largest remaining masses; yields a valid
/// coupling, hence an upper bound on the minimum entropy.
GreedyCoupling min_entropy_coupling_greedy(std::vector<GroupedMass> p,
                                           std::vector<GroupedMass> q);

/// Atom-level greedy coupling (largest remaining masses first, ties by
/// atom index); support has at most |p|+|q|−1 entries.
CouplingMatrix greedy_coupling_atoms(const ProbSpace& p, const ProbSpace& q);

struct DistanceBound {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

enum class CouplingMode { exact, greedy, automatic };

struct IkdResult {
  DistanceBound bound;
  CouplingMatrix coupling;
};

/// Intrinsic entropy distance between diagrams of one shape. Couplings
/// of the initial spaces are pushed forward to induced fans; in exact
/// mode the concave objective Σᵢ 2·H(Zᵢ) is minimized over the
/// transportation-polytope vertices. lower is the 1-Lipschitz entropy
/// bound ‖ent X − ent Y‖₁.
IkdResult ikd(const Diagram& x, const Diagram& y,
              CouplingMode mode = CouplingMode::automatic,
              std::size_t cap = 30);

/// ∫ ikd(X|u, Y) dp(u) + |G|·H(U) for a reduction X → U^G given at the
/// initial space. Upper-bounds ikd(X, Y); cross-checked against the
/// exact value whenever the cap allows computing it.
double slicing_bound_reduction(const Diagram& x, const Diagram& y,
                               const Reduction& from_initial,
                               std::size_t cap = 30);

/// ∫ ikd(X|u, Y|u) dp(u) for reductions of both diagrams onto one U;
/// upper-bounds ikd(X, Y).
double slicing_bound_cofan(const Diagram& x, const Diagram& y,
                           const Reduction& x_to_u, const Reduction& y_to_u,
                           std::size_t cap = 30);

/// The explicit digit-map fan Uₙ ← U_{nm} → Uₘ (f(k) = k div m,
/// g(k) = k div n), after minimal reduction. Its kd is at most
/// 2 ln 2 + |ln(n/m)|.
TwoFan uniform_fan(std::size_t n, std::size_t m);

}  // namespace trop
