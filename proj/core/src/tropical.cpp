#include "trop/tropical.hpp"

#include "trop/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace trop {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double AdmissibleFunction::operator()(double t) const {
  if (t < 1.0) fail(Errc::invalid_argument, "admissible functions live on t >= 1");
  return coeff * std::pow(t, alpha) + constant;
}

double AdmissibleFunction::tail_integral(double s) const {
  if (s < 1.0) fail(Errc::invalid_argument, "admissible functions live on t >= 1");
  return coeff * std::pow(s, alpha - 1.0) / (1.0 - alpha) + constant / s;
}

AdmissibleFunction AdmissibleFunction::power(double c, double a) {
  if (c < 0.0 || a < 0.0 || a >= 1.0)
    fail(Errc::invalid_argument, "power law needs C >= 0 and 0 <= alpha < 1");
  return {c, a, 0.0};
}

QuasiLinearSequence::QuasiLinearSequence(
    IndexingCategory shape, AdmissibleFunction defect,
    std::function<Diagram(unsigned)> generator)
    : shape_(std::move(shape)),
      defect_(defect),
      cache_(std::make_shared<Cache>()) {
  cache_->generator = std::move(generator);
}

const Diagram& QuasiLinearSequence::at(unsigned n) const {
  std::scoped_lock lock(cache_->mutex);
  auto it = cache_->memo.find(n);
  if (it != cache_->memo.end()) return it->second;
  Diagram value = (n == 0) ? constant_diagram(shape_, ProbSpace::point())
                           : cache_->generator(n);
  if (!(value.shape() == shape_))
    fail(Errc::shape_mismatch, "sequence member has the wrong shape");
  return cache_->memo.emplace(n, std::move(value)).first->second;
}

QuasiLinearSequence linear_sequence(const Diagram& diagram,
                                    std::size_t atom_cap) {
  Diagram base = diagram;
  auto generator = [base, atom_cap](unsigned n) {
    double atoms = 1.0;
    for (std::size_t i = 0; i < base.size(); ++i)
      atoms = std::max(atoms, static_cast<double>(base.space(i).size()));
    if (std::pow(atoms, static_cast<double>(n)) >
        static_cast<double>(atom_cap))
      fail(Errc::size_limit,
           "tensor power at n = " + std::to_string(n) + " exceeds atom cap");
    Diagram power = base;
    for (unsigned k = 1; k < n; ++k) power = tensor(power, base);
    return power;
  };
  return QuasiLinearSequence(diagram.shape(), AdmissibleFunction::zero(),
                             std::move(generator));
}

AsymptoticDistanceEstimate asymptotic_distance(const QuasiLinearSequence& a,
                                               const QuasiLinearSequence& b,
                                               unsigned n_max,
                                               std::size_t cap) {
  if (!(a.shape() == b.shape()))
    fail(Errc::shape_mismatch, "sequences have different shapes");
  if (n_max < 1) fail(Errc::invalid_argument, "n_max must be >= 1");

  AsymptoticDistanceEstimate estimate;
  estimate.upper = std::numeric_limits<double>::infinity();
  estimate.lower = 0.0;
  const double da = a.defect().d_constant();
  const double db = b.defect().d_constant();
  for (unsigned n = 1; n <= n_max; ++n) {
    const Diagram& xa = a.at(n);
    const Diagram& xb = b.at(n);
    const IkdResult r = ikd(xa, xb, CouplingMode::automatic, cap);
    const double sample = r.bound.upper / n;
    estimate.samples.push_back({n, sample});

    double correction = 0.0;
    if (!a.defect().is_zero()) correction += da * a.defect()(n) / n;
    if (!b.defect().is_zero()) correction += db * b.defect()(n) / n;
    estimate.upper = std::min(estimate.upper, sample + correction);
    const double rate_gap =
        l1_distance(entropy_vector(xa), entropy_vector(xb)) / n;
    estimate.lower = std::max(estimate.lower, rate_gap - correction);
  }
  estimate.lower = std::min(estimate.lower, estimate.upper);
  return estimate;
}

QuasiLinearSequence scalar_action(double lambda,
                                  const QuasiLinearSequence& base) {
  if (lambda < 0.0)
    fail(Errc::invalid_argument, "scalar action needs lambda >= 0");
  // The copy shares the base memo.
  auto generator = [source = base, lambda](unsigned n) {
    const double scaled = lambda * static_cast<double>(n);
    const auto index = static_cast<unsigned>(std::floor(scaled + 1e-9));
    return source.at(index);
  };

  const bool integral = std::floor(lambda) == lambda;
  AdmissibleFunction defect;
  if (lambda == 0.0 || (integral && base.defect().is_zero())) {
    defect = AdmissibleFunction::zero();
  } else {
    const double step_cost = entropy_vector(base.at(1)).l1();
    defect.alpha = base.defect().alpha;
    defect.coeff = 2.0 * base.defect().coeff * std::pow(lambda, defect.alpha);
    defect.constant = 2.0 * base.defect().constant + step_cost;
  }
  return QuasiLinearSequence(base.shape(), defect, std::move(generator));
}

QuasiLinearSequence linearize(const QuasiLinearSequence& base, unsigned i) {
  if (i < 1) fail(Errc::invalid_argument, "linearize needs i >= 1");
  if (i == 1) return linear_sequence(base.at(1));
  Diagram block = base.at(i);
  auto generator = [linear = linear_sequence(block), i](unsigned n) {
    return linear.at(n / i);
  };
  AdmissibleFunction defect{0.0, 0.0, entropy_vector(block).l1()};
  return QuasiLinearSequence(base.shape(), defect, std::move(generator));
}

double linearization_error_bound(const QuasiLinearSequence& base, unsigned i) {
  if (i < 1) fail(Errc::invalid_argument, "linearize needs i >= 1");
  if (base.defect().is_zero()) return 0.0;
  return base.defect().d_constant() * base.defect()(i) / i;
}

QuasiLinearSequence defect_reduce(const QuasiLinearSequence& base,
                                  unsigned k) {
  if (k < 1) fail(Errc::invalid_argument, "defect reduction needs k >= 1");
  if (k == 1) return base;
  auto generator = [source = base, k](unsigned n) {
    return radical_mix(source.at(k * n), k);
  };
  AdmissibleFunction defect;
  defect.alpha = base.defect().alpha;
  defect.coeff =
      base.defect().coeff * std::pow(static_cast<double>(k),
                                     base.defect().alpha - 1.0);
  defect.constant = 3.0 * binary_entropy(1.0 / k) + base.defect().constant / k;
  return QuasiLinearSequence(base.shape(), defect, std::move(generator));
}

QuasiHomogeneityBound quasi_homogeneity_bound(const AdmissibleFunction& phi,
                                              unsigned m, unsigned n) {
  if (m < 1 || n < 1) fail(Errc::invalid_argument, "needs m, n >= 1");
  QuasiHomogeneityBound bound;
  if (phi.is_zero()) return bound;
  bound.tail_form = 8.0 * m * n * phi.tail_integral(n);
  bound.coarse_form = phi.d_constant() * m * phi(n);
  return bound;
}

TropicalChainPoint TropicalChainPoint::checked(std::vector<double> values) {
  if (values.empty())
    fail(Errc::invalid_argument, "chain point needs at least one coordinate");
  if (values.front() < 0.0)
    fail(Errc::not_monotone, "chain point coordinates must be nonnegative");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[i - 1])
      fail(Errc::not_monotone, "chain point coordinates must be ascending");
  return {std::move(values)};
}

TropicalChainPoint chain_tropicalize(const QuasiLinearSequence& sequence,
                                     unsigned n_eval) {
  if (n_eval < 1) fail(Errc::invalid_argument, "n_eval must be >= 1");
  const std::vector<std::size_t> order = sequence.shape().chain_order();
  const EntropyVector ev = entropy_vector(sequence.at(n_eval));
  std::vector<double> values;
  values.reserve(order.size());
  for (std::size_t idx : order)
    values.push_back(ev.values[idx] / n_eval);
  // Entropy is monotone along reductions; absorb float dust.
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0 && values[i] > -1e-12) values[i] = 0.0;
    if (i > 0 && values[i] < values[i - 1]) {
      if (values[i - 1] - values[i] > 1e-9)
        fail(Errc::internal, "entropy vector not monotone along the chain");
      values[i] = values[i - 1];
    }
  }
  return TropicalChainPoint::checked(std::move(values));
}

std::vector<long long> chain_representative_exponents(
    const TropicalChainPoint& point, unsigned n) {
  if (n < 1) fail(Errc::invalid_argument, "representative needs n >= 1");
  TropicalChainPoint::checked(point.values);
  std::vector<long long> exponents;
  exponents.reserve(point.values.size());
  for (double x : point.values)
    exponents.push_back(std::llround(n * x / kLn2));
  return exponents;
}

Diagram chain_representative(const TropicalChainPoint& point, unsigned n,
                             std::size_t atom_cap) {
  const std::vector<long long> exponents =
      chain_representative_exponents(point, n);
  const std::size_t k = exponents.size();
  if (exponents.back() >= 63 ||
      (1ull << exponents.back()) > atom_cap)
    fail(Errc::size_limit, "representative spaces exceed the atom cap");

  // Chain object "1" is coarsest; the initial object "k" is finest.
  IndexingCategory shape = IndexingCategory::chain(static_cast<unsigned>(k));
  std::vector<ProbSpace> spaces;
  spaces.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    spaces.push_back(ProbSpace::uniform(1ull << exponents[i]));

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> maps;
  for (const auto& [src, dst] : shape.covering_arrows()) {
    const long long shift = exponents[src] - exponents[dst];
    std::vector<std::size_t> map(spaces[src].size());
    for (std::size_t a = 0; a < map.size(); ++a) map[a] = a >> shift;
    maps.emplace(std::make_pair(src, dst), std::move(map));
  }
  return Diagram::build_indexed(std::move(shape), std::move(spaces),
                                std::move(maps));
}

namespace {

std::vector<GroupedMass> type_classes(const ProbSpace& binary, unsigned n) {
  const Rat q = binary.mass(0);
  const Rat r = binary.mass(1);
  std::vector<GroupedMass> groups;
  groups.reserve(n + 1);
  for (unsigned k = 0; k <= n; ++k)
    groups.push_back({rat_pow(q, n - k) * rat_pow(r, k), binomial(n, k)});
  return groups;
}

BigInt bigint_from_log(double t) {
  // floor(e^t) for t up to ~700; exact rounding is irrelevant here.
  const double value = std::exp(t);
  if (value < 1.0) return BigInt(1);
  return BigInt(value);
}

}  // namespace

AepPoint aep_point(const ProbSpace& binary, unsigned n) {
  if (binary.size() != 2)
    fail(Errc::invalid_argument, "uniformization needs a binary space");
  if (n < 1) fail(Errc::invalid_argument, "needs n >= 1");
  if (n > 256) fail(Errc::size_limit, "uniformization capped at n = 256");

  const std::vector<GroupedMass> power = type_classes(binary, n);
  const double h_power = n * entropy(binary);

  std::set<BigInt> candidates;
  if (n <= 10) {
    const unsigned long long limit = 1ull << n;
    for (unsigned long long m = 1; m <= limit; ++m) candidates.insert(BigInt(m));
  } else {
    candidates.insert(BigInt(1));
    candidates.insert(BigInt(1) << n);
    candidates.insert(bigint_from_log(h_power));
    candidates.insert(bigint_from_log(h_power) + 1);
    const double p0 = to_double(binary.mass(0));
    const double sigma = std::sqrt(p0 * (1.0 - p0)) *
                         std::abs(std::log(p0) - std::log1p(-p0));
    const double width = 4.0 * sigma * std::sqrt(static_cast<double>(n)) + 2.0;
    const double lo = std::max(0.0, h_power - width);
    const double hi = std::min(n * kLn2, h_power + width);
    constexpr int kSamples = 48;
    for (int s = 0; s <= kSamples; ++s) {
      const double t = lo + (hi - lo) * s / kSamples;
      candidates.insert(bigint_from_log(t));
    }
  }

  AepPoint point;
  point.n = n;
  point.reference =
      n >= 2 ? std::sqrt(std::pow(std::log(static_cast<double>(n)), 3.0) / n)
             : 0.0;
  bool first = true;
  for (const BigInt& m : candidates) {
    const double log_m = log_big(m);
    GreedyCoupling coupling =
        min_entropy_coupling_greedy(power, {{Rat(BigInt(1), m), m}});
    const double bound =
        (2.0 * coupling.entropy - h_power - log_m) / n;
    if (first || bound < point.bound) {
      first = false;
      point.bound = bound;
      point.best_m = m;
    }
  }
  if (point.bound < 0.0) point.bound = 0.0;
  return point;
}

AepReport aep_curve(const ProbSpace& binary, unsigned n_from, unsigned n_to,
                    unsigned step) {
  if (n_from < 1 || n_to < n_from || step < 1)
    fail(Errc::invalid_argument, "bad curve range");
  AepReport report;
  for (unsigned n = n_from; n <= n_to; n += step) {
    report.points.push_back(aep_point(binary, n));
    const AepPoint& p = report.points.back();
    if (p.reference > 0.0)
      report.fitted_c = std::max(report.fitted_c, p.bound / p.reference);
  }
  return report;
}

}  // namespace trop
