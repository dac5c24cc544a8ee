// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dfkit {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

class BoundsError : public Error {
public:
  using Error::Error;
};

class ConsistencyError : public Error {
public:
  using Error::Error;
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A matricized eigenvector of the two-electron tensor is not symmetric.
class SymmetryError : public Error {
public:
  SymmetryError(const std::string& what, double asymmetry) : Error(what), asymmetry_(asymmetry) {}
  double asymmetry() const noexcept { return asymmetry_; }

private:
  double asymmetry_;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// The requested spin state was not found among the lowest sector eigenstates.
class SearchError : public Error {
public:
  using Error::Error;
};

/// A measurement plan cannot produce an unbiased estimator.
class PlanError : public Error {
public:
  using Error::Error;
};

/// Target precision lies below the systematic error floor.
class UnreachableError : public Error {
public:
  UnreachableError(const std::string& what, double bias_floor) : Error(what), bias_floor_(bias_floor) {}
  double bias_floor() const noexcept { return bias_floor_; }

private:
  double bias_floor_;
};

}  // namespace dfkit
