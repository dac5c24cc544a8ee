// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace dfkit {

struct LbfgsSettings {
  int memory = 10;
  double grad_tol = 1e-8;  ///< on max |gradient|, scaled by max(1, |f|)
  int max_iters = 200;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;  ///< gradient tolerance met
};

/// Returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

/// Limited-memory BFGS with a backtracking line search (sufficient decrease
/// plus a curvature check). The returned f never exceeds f(x0).
LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const LbfgsSettings& settings);

}  // namespace dfkit
