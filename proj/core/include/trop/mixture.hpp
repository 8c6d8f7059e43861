#pragma once

#include "trop/diagram.hpp"

#include <vector>

namespace trop {

/// Family of diagrams of one shape, parameterized by the atoms of a
/// finite probability space.
struct DiagramFamily {
  ProbSpace parameter;
  std::vector<Diagram> members;  // one per parameter atom, in atom order
};

struct MixtureResult {
  Diagram total;
  /// Provenance reduction from the initial space of the total onto the
  /// parameter space; conditioning the total on θ recovers member θ.
  Reduction to_parameter;
};

/// Objectwise disjoint union of the member atoms, masses scaled by the
/// parameter weights; structure maps act memberwise.
MixtureResult mix(const DiagramFamily& family);

/// ∫ ent(X_θ) dp(θ) + ent(Θ^G), computed without building the mixture.
EntropyVector mixture_entropy_formula(const DiagramFamily& family);

/// Binary mixture of X (weight 1/n, first summand) with the constant
/// one-point diagram; the finite-level stand-in for "X^(1/n)".
/// n = 1 returns X unchanged.
Diagram radical_mix(const Diagram& diagram, unsigned n);

/// mix(F) ⊗ mix(F') ≅ mix of the product family over Θ ⊗ Θ'.
bool distributivity_check(const DiagramFamily& f, const DiagramFamily& g);

/// Entropy of the binary space Λ_α in nats.
double binary_entropy(double alpha);

}  // namespace trop
