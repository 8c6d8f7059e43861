#pragma once

#include "trop/coupling.hpp"
#include "trop/mixture.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace trop {

/// Sublinearity gauge φ(t) = C·t^α + c₀ with 0 ≤ α < 1 and C, c₀ ≥ 0.
/// Satisfies s·∫_s^∞ φ(t)/t² dt ≤ (D/8)·φ(s) with D = 8/(1−α), which
/// is tight for pure power laws.
struct AdmissibleFunction {
  double coeff = 0.0;     // C
  double alpha = 0.0;     // exponent, in [0,1)
  double constant = 0.0;  // c₀

  double operator()(double t) const;
  /// ∫_s^∞ φ(t)/t² dt = C·s^(α−1)/(1−α) + c₀/s.
  double tail_integral(double s) const;
  double d_constant() const { return 8.0 / (1.0 - alpha); }
  bool is_zero() const { return coeff == 0.0 && constant == 0.0; }

  static AdmissibleFunction zero() { return {}; }
  static AdmissibleFunction power(double c, double a);
};

/// Sequence n ↦ Diagram with a declared quasi-linearity defect bound:
/// ikd(γ(m+n), γ(m)⊗γ(n)) ≤ φ(m+n). Members are memoized behind an
/// immutable facade; γ(0) is the constant one-point diagram.
class QuasiLinearSequence {
 public:
  QuasiLinearSequence(IndexingCategory shape, AdmissibleFunction defect,
                      std::function<Diagram(unsigned)> generator);

  const IndexingCategory& shape() const { return shape_; }
  const AdmissibleFunction& defect() const { return defect_; }
  const Diagram& at(unsigned n) const;

 private:
  struct Cache {
    std::function<Diagram(unsigned)> generator;
    std::mutex mutex;
    std::map<unsigned, Diagram> memo;
  };

  IndexingCategory shape_;
  AdmissibleFunction defect_;
  std::shared_ptr<Cache> cache_;  // copies share the memo
};

/// n ↦ X^{⊗n}, defect zero. Member materialization is guarded by
/// atom_cap per object.
QuasiLinearSequence linear_sequence(const Diagram& diagram,
                                    std::size_t atom_cap = 1u << 20);

struct DistanceSample {
  unsigned n = 0;
  double value = 0.0;  // ikd(γ₁(n), γ₂(n)) / n
};

struct AsymptoticDistanceEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<DistanceSample> samples;
};

/// Certified bracket for lim ikd(γ₁(n), γ₂(n))/n. Per sample n the
/// upper candidate is sample(n) + D₁φ₁(n)/n + D₂φ₂(n)/n (plain
/// sample(n) for linear sequences) and the lower candidate is the
/// entropy-rate gap minus the same corrections. ikd runs exact under
/// the cap, greedy otherwise.
AsymptoticDistanceEstimate asymptotic_distance(const QuasiLinearSequence& a,
                                               const QuasiLinearSequence& b,
                                               unsigned n_max,
                                               std::size_t cap = 30);

/// n ↦ γ(⌊λ·n⌋). Defect stays zero for a linear sequence under an
/// integral λ; otherwise the floor splitting adds one γ(1) factor,
/// bounded by ‖ent γ(1)‖₁.
QuasiLinearSequence scalar_action(double lambda,
                                  const QuasiLinearSequence& base);

/// n ↦ γ(i)^{⊗⌊n/i⌋}; asymptotic distance to γ is at most
/// linearization_error_bound(γ, i).
QuasiLinearSequence linearize(const QuasiLinearSequence& base, unsigned i);

/// D_φ·φ(i)/i, the certified distance from γ to its i-th linearization.
double linearization_error_bound(const QuasiLinearSequence& base, unsigned i);

/// n ↦ radical_mix(γ(k·n), k); declared defect
/// φ_k(s) = 3·ent(Λ_{1/k}) + (1/k)·φ(k·s).
QuasiLinearSequence defect_reduce(const QuasiLinearSequence& base, unsigned k);

struct QuasiHomogeneityBound {
  double tail_form = 0.0;    // 8·m·n·∫_n^∞ φ/t²
  double coarse_form = 0.0;  // D_φ·m·φ(n)
};

/// Bounds on ikd(γ(m·n), γ(n)^{⊗m}) for a φ-bounded sequence.
QuasiHomogeneityBound quasi_homogeneity_bound(const AdmissibleFunction& phi,
                                              unsigned m, unsigned n);

/// Point of the chain cone: 0 ≤ x₁ ≤ … ≤ x_k, coarsest coordinate
/// first.
struct TropicalChainPoint {
  std::vector<double> values;

  static TropicalChainPoint checked(std::vector<double> values);
};

/// ent(γ(n_eval))/n_eval in chain order (coarsest first); exact at
/// n_eval = 1 for linear sequences by additivity.
TropicalChainPoint chain_tropicalize(const QuasiLinearSequence& sequence,
                                     unsigned n_eval = 1);

/// Dyadic exponents m_i = round(n·x_i / ln 2) of the representative
/// chain U_{2^{m_k}} → … → U_{2^{m_1}}.
std::vector<long long> chain_representative_exponents(
    const TropicalChainPoint& point, unsigned n);

/// Materialized representative with binary-truncation maps; entropy
/// vector is exactly (m_i·ln 2), within ln2/2 per coordinate of n·x.
Diagram chain_representative(const TropicalChainPoint& point, unsigned n,
                             std::size_t atom_cap = 1u << 21);

struct AepPoint {
  unsigned n = 0;
  double bound = 0.0;      // min over m of (2H(Z) − H(X^n) − ln m)/n
  double reference = 0.0;  // √(ln³n / n)
  BigInt best_m;
};

/// Uniformization bound for the n-th tensor power of a binary space,
/// represented compactly by its n+1 type classes; the uniform size m
/// is searched exhaustively for small n and over a deterministic
/// log-spaced grid around n·H(X) otherwise.
AepPoint aep_point(const ProbSpace& binary, unsigned n);

struct AepReport {
  std::vector<AepPoint> points;
  double fitted_c = 0.0;  // max over points of bound/reference
};

AepReport aep_curve(const ProbSpace& binary, unsigned n_from, unsigned n_to,
                    unsigned step = 1);

}  // namespace trop
