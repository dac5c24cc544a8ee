// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfkit/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace dfkit {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;
constexpr int kMaxLineSearch = 50;

bool gradient_small(const Eigen::VectorXd& g, double f, double tol) {
  return g.size() == 0 || g.cwiseAbs().maxCoeff() <= tol * std::max(1.0, std::abs(f));
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const LbfgsSettings& settings) {
  LbfgsResult res;
  res.x = std::move(x0);
  Eigen::VectorXd g(res.x.size());
  res.f = objective(res.x, g);
  res.evaluations = 1;
  if (gradient_small(g, res.f, settings.grad_tol)) {
    res.converged = true;
    return res;
  }

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  Eigen::VectorXd g_new(res.x.size());

  for (int iter = 0; iter < settings.max_iters; ++iter) {
    // Two-loop recursion.
    Eigen::VectorXd d = -g;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(d);
      d -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(d);
      d += (alpha[i] - beta) * s_hist[i];
    }
    double slope = g.dot(d);
    if (!(slope < 0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g;
      slope = -g.squaredNorm();
    }

    // Weak Wolfe bracketing search.
    double step = s_hist.empty() ? std::min(1.0, 1.0 / std::max(g.cwiseAbs().maxCoeff(), 1e-300)) : 1.0;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    bool accepted = false;
    double f_lo = res.f;
    Eigen::VectorXd x_lo, g_lo;
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    for (int ls = 0; ls < kMaxLineSearch; ++ls) {
      x_new = res.x + step * d;
      f_new = objective(x_new, g_new);
      ++res.evaluations;
      if (!std::isfinite(f_new) || f_new > res.f + kArmijo * step * slope) {
        hi = step;
      } else if (g_new.dot(d) < kCurvature * slope) {
        lo = step;
        f_lo = f_new;
        x_lo = x_new;
        g_lo = g_new;
      } else {
        accepted = true;
        break;
      }
      step = std::isinf(hi) ? 2.0 * step : 0.5 * (lo + hi);
    }
    if (!accepted) {
      if (lo == 0.0) break;  // no decrease found along d
      x_new = x_lo;
      g_new = g_lo;
      f_new = f_lo;
    }

    Eigen::VectorXd s = x_new - res.x;
    Eigen::VectorXd y = g_new - g;
    const double f_old = res.f;
    res.x = std::move(x_new);
    res.f = f_new;
    g = g_new;
    res.iterations = iter + 1;

    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > settings.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    if (gradient_small(g, res.f, settings.grad_tol)) {
      res.converged = true;
      break;
    }
    if (std::abs(f_old - res.f) <= 1e-16 * std::max(1.0, std::abs(res.f))) break;
  }
  return res;
}

}  // namespace dfkit
