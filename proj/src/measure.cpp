// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfkit/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dfkit/errors.hpp"

namespace dfkit {

namespace {

constexpr double kZeroVariance = 1e-12;

std::vector<long long> split(const std::vector<double>& weights, Scheme scheme, long long shots_total) {
  if (scheme == Scheme::Uniform) return largest_remainder(std::vector<double>(weights.size(), 1.0), shots_total);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0)) {
    if (shots_total == 0) return std::vector<long long>(weights.size(), 0);
    throw PlanError("all basis weights are zero; cannot distribute shots");
  }
  const auto nonzero = std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0; });
  if (shots_total < nonzero) {
    throw PlanError("weights scheme needs at least " + std::to_string(nonzero) + " shots, got " +
                    std::to_string(shots_total));
  }
  auto shots = largest_remainder(weights, shots_total);
  for (std::size_t b = 0; b < shots.size(); ++b) {
    if (weights[b] > 0 && shots[b] == 0) {
      const auto donor = std::max_element(shots.begin(), shots.end()) - shots.begin();
      --shots[static_cast<std::size_t>(donor)];
      shots[b] = 1;
    }
  }
  return shots;
}

double plan_variance(const std::vector<Moments>& moments, const std::vector<long long>& shots) {
  double v = 0.0;
  for (std::size_t b = 0; b < moments.size(); ++b)
    if (moments[b].variance > kZeroVariance) {
      if (shots[b] == 0) return std::numeric_limits<double>::infinity();
      v += moments[b].variance / static_cast<double>(shots[b]);
    }
  return v;
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Uniform:
      return "uniform";
    case Scheme::Weights:
      return "weights";
    case Scheme::Explicit:
      return "explicit";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& s) {
  if (s == "uniform") return Scheme::Uniform;
  if (s == "weights") return Scheme::Weights;
  if (s == "explicit") return Scheme::Explicit;
  throw PreconditionError("unknown scheme '" + s + "'");
}

double basis_weight(const MeasurementBasis& block) {
  double s = block.linear.squaredNorm();
  for (Eigen::Index i = 0; i < block.quadratic.rows(); ++i)
    for (Eigen::Index j = i + 1; j < block.quadratic.cols(); ++j) {
      const double c = block.quadratic(i, j) + block.quadratic(j, i);
      s += c * c;
    }
  return std::sqrt(s);
}

std::vector<double> basis_weights(const PauliHamiltonian& h) {
  std::vector<double> w;
  for (const auto& b : h.bases) w.push_back(basis_weight(b));
  return w;
}

std::vector<long long> largest_remainder(const std::vector<double>& weights, long long shots_total) {
  if (shots_total < 0) throw PlanError("negative shot total");
  std::vector<long long> out(weights.size(), 0);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(total > 0)) {
    if (shots_total > 0) throw PlanError("cannot distribute shots over zero total weight");
    return out;
  }
  std::vector<double> rem(weights.size());
  long long assigned = 0;
  for (std::size_t b = 0; b < weights.size(); ++b) {
    const double exact = static_cast<double>(shots_total) * weights[b] / total;
    out[b] = static_cast<long long>(std::floor(exact));
    rem[b] = exact - static_cast<double>(out[b]);
    assigned += out[b];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t i = 0; assigned < shots_total; i = (i + 1) % order.size(), ++assigned) ++out[order[i]];
  while (assigned > shots_total) {
    const auto big = std::max_element(out.begin(), out.end()) - out.begin();
    --out[static_cast<std::size_t>(big)];
    --assigned;
  }
  return out;
}

MeasurementPlan allocate(const PauliHamiltonian& h, Scheme scheme, long long shots_total,
                         const std::vector<long long>& explicit_shots) {
  MeasurementPlan plan;
  plan.scheme = scheme;
  plan.shots_total = shots_total;
  plan.weights = basis_weights(h);
  if (scheme == Scheme::Explicit) {
    if (explicit_shots.size() != h.bases.size()) throw PlanError("explicit plan length does not match the bases");
    if (std::any_of(explicit_shots.begin(), explicit_shots.end(), [](long long s) { return s < 0; })) {
      throw PlanError("explicit plan has negative counts");
    }
    if (std::accumulate(explicit_shots.begin(), explicit_shots.end(), 0LL) != shots_total) {
      throw PlanError("explicit plan does not sum to the shot total");
    }
    plan.shots_per_basis = explicit_shots;
    return plan;
  }
  plan.shots_per_basis = split(plan.weights, scheme, shots_total);
  return plan;
}

std::vector<long long> optimal_allocation(const std::vector<double>& variances, long long shots_total) {
  std::vector<double> v, roots;
  for (double x : variances) {
    v.push_back(x > kZeroVariance ? x : 0.0);
    roots.push_back(std::sqrt(v.back()));
  }
  const auto positive = std::count_if(v.begin(), v.end(), [](double x) { return x > 0; });
  if (positive == 0) return largest_remainder(std::vector<double>(v.size(), 1.0), shots_total);
  if (shots_total < positive) throw PlanError("fewer shots than blocks with nonzero variance");
  std::vector<long long> m = largest_remainder(roots, shots_total);
  for (std::size_t b = 0; b < m.size(); ++b) {
    if (v[b] > 0 && m[b] == 0) {
      const auto donor = std::max_element(m.begin(), m.end()) - m.begin();
      --m[static_cast<std::size_t>(donor)];
      m[b] = 1;
    }
  }
  // Single-shot exchanges until no transfer lowers sum v_b / m_b.
  auto gain = [&](std::size_t b) { return v[b] > 0 ? v[b] / m[b] - v[b] / (m[b] + 1.0) : 0.0; };
  auto loss = [&](std::size_t b) {
    if (m[b] == 0) return std::numeric_limits<double>::infinity();
    if (v[b] == 0) return 0.0;
    return m[b] == 1 ? std::numeric_limits<double>::infinity() : v[b] / (m[b] - 1.0) - v[b] / m[b];
  };
  for (long long guard = 0; guard < 4 * shots_total + 16; ++guard) {
    double best = 0.0;
    std::size_t give = 0, take = 0;
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = 0; b < m.size(); ++b) {
        if (a == b) continue;
        const double delta = gain(b) - loss(a);
        if (delta > best * (1.0 + 1e-12) && delta > 1e-15 * gain(b)) {
          best = delta;
          give = a;
          take = b;
        }
      }
    if (best <= 0.0) break;
    --m[give];
    ++m[take];
  }
  return m;
}

std::vector<Moments> basis_moments(const PauliHamiltonian& h, const FockState& psi) {
  std::vector<Moments> out;
  for (const auto& block : h.bases) out.push_back(diagonal_moments(rotate_orbitals(psi, block.rotation), block));
  return out;
}

EstimatorStats combine(double constant, const std::vector<Moments>& moments, const std::vector<long long>& shots,
                       double exact) {
  if (shots.size() != moments.size()) throw PlanError("plan length does not match the bases");
  EstimatorStats st;
  st.exact = exact;
  st.estimate = constant;
  st.shots_per_basis = shots;
  for (std::size_t b = 0; b < moments.size(); ++b) {
    st.estimate += moments[b].mean;
    st.per_basis_mean.push_back(moments[b].mean);
    st.per_basis_variance.push_back(moments[b].variance);
    if (shots[b] > 0) {
      st.variance += moments[b].variance / static_cast<double>(shots[b]);
    } else if (moments[b].variance > kZeroVariance) {
      throw PlanError("basis " + std::to_string(b) + " has variance " + std::to_string(moments[b].variance) +
                      " but no shots");
    }
  }
  st.bias = exact - st.estimate;
  st.rmse = std::sqrt(st.bias * st.bias + st.variance);
  return st;
}

EstimatorStats estimator_stats(const PauliHamiltonian& h, const FockState& psi, const MeasurementPlan& plan,
                               double exact) {
  return combine(h.constant, basis_moments(h, psi), plan.shots_per_basis, exact);
}

EstimatorStats estimator_stats(const IntegralSet& set, const PauliHamiltonian& h, const FockState& psi,
                               const MeasurementPlan& plan) {
  return estimator_stats(h, psi, plan, expectation(set, psi));
}

EstimatorStats gap_stats(const PauliHamiltonian& h, const FockState& singlet, const FockState& triplet,
                         const MeasurementPlan& plan_s, const MeasurementPlan& plan_t, double exact_gap) {
  const EstimatorStats s = estimator_stats(h, singlet, plan_s, 0.0);
  const EstimatorStats t = estimator_stats(h, triplet, plan_t, 0.0);
  EstimatorStats g;
  g.exact = exact_gap;
  g.estimate = t.estimate - s.estimate;
  g.bias = exact_gap - g.estimate;
  g.variance = s.variance + t.variance;
  g.rmse = std::sqrt(g.bias * g.bias + g.variance);
  g.per_basis_variance = s.per_basis_variance;
  g.per_basis_variance.insert(g.per_basis_variance.end(), t.per_basis_variance.begin(), t.per_basis_variance.end());
  g.per_basis_mean = s.per_basis_mean;
  g.per_basis_mean.insert(g.per_basis_mean.end(), t.per_basis_mean.begin(), t.per_basis_mean.end());
  g.shots_per_basis = s.shots_per_basis;
  g.shots_per_basis.insert(g.shots_per_basis.end(), t.shots_per_basis.begin(), t.shots_per_basis.end());
  return g;
}

long long shots_to_target(const PauliHamiltonian& h, const std::vector<Moments>& moments, double exact, Scheme scheme,
                          double epsilon) {
  if (scheme == Scheme::Explicit) throw PreconditionError("shots_to_target needs the uniform or weights scheme");
  if (!(epsilon > 0)) throw PreconditionError("epsilon must be positive");
  double estimate = h.constant;
  for (const auto& m : moments) estimate += m.mean;
  const double bias = exact - estimate;
  if (std::abs(bias) >= epsilon) {
    throw UnreachableError("target " + std::to_string(epsilon) + " is below the bias floor " +
                               std::to_string(std::abs(bias)),
                           std::abs(bias));
  }
  const std::vector<double> weights = basis_weights(h);
  const double budget = epsilon * epsilon - bias * bias;

  std::vector<double> frac(moments.size(), 1.0 / static_cast<double>(moments.size()));
  long long minimum = 0;
  if (scheme == Scheme::Weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (std::size_t b = 0; b < frac.size(); ++b) frac[b] = total > 0 ? weights[b] / total : 0.0;
    minimum = std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0; });
  }
  double k = 0.0;
  for (std::size_t b = 0; b < moments.size(); ++b) {
    if (moments[b].variance <= kZeroVariance) continue;
    if (frac[b] == 0.0) throw UnreachableError("a block with variance receives no shots", std::abs(bias));
    k += moments[b].variance / frac[b];
  }
  if (k == 0.0) return std::max<long long>(minimum, 0);

  auto ok = [&](long long m) {
    if (m < minimum) return false;
    return plan_variance(moments, split(weights, scheme, m)) <= budget * (1.0 + 1e-12);
  };
  long long m = std::max<long long>(minimum, static_cast<long long>(std::ceil(k / budget)));
  long long step = 1;
  while (!ok(m)) {
    m += step;
    step *= 2;
  }
  // m is feasible; find the smallest feasible count below it.
  long long lo = std::max<long long>(minimum, m - step) - 1;
  while (m - lo > 1) {
    const long long mid = lo + (m - lo) / 2;
    if (ok(mid)) {
      m = mid;
    } else {
      lo = mid;
    }
  }
  while (m - 1 >= std::max<long long>(minimum, 1) && ok(m - 1)) --m;
  return m;
}

long long shots_to_target(const PauliHamiltonian& h, const FockState& psi, double exact, Scheme scheme,
                          double epsilon) {
  return shots_to_target(h, basis_moments(h, psi), exact, scheme, epsilon);
}

}  // namespace dfkit
