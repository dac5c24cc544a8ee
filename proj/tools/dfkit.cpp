// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

// dfkit command-line driver: factorize, lambda, measure, sweep.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfkit/errors.hpp"
#include "dfkit/fff.hpp"
#include "dfkit/integrals.hpp"
#include "dfkit/lcu.hpp"
#include "dfkit/measure.hpp"
#include "dfkit/rcdf.hpp"
#include "dfkit/reference.hpp"
#include "dfkit/serialize.hpp"
#include "dfkit/xdf.hpp"

namespace fs = std::filesystem;
using namespace dfkit;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kNoConvergence = 3, kInternal = 4 };

struct UsageError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string input;
  std::string method = "xdf";
  bool fixed_rho = false;  // cdf: rcdf with rho pinned to zero
  int n_t = 0;  // 0: full X-DF, or n for the compressed methods
  double rho = 0.0;
  int gamma = 2;
  double frob_tol = 1e-6;
  std::string scheme = "weights";
  long long shots = 300000;
  std::optional<int> n_alpha, n_beta;
  std::uint64_t seed = 0;
  std::string out = "dfkit-out";
  OptimizerConfig optimizer;
};

struct Flags {
  std::string config;
  std::optional<std::string> input, method, scheme, out;
  std::optional<int> n_t, gamma, n_alpha, n_beta;
  std::optional<double> rho, tol;
  std::optional<long long> shots;
  std::optional<std::uint64_t> seed;
};

std::uint64_t substream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kFffInitStream = 1;

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) {
    const Json j = parse_json_file(f.config);
    for (const auto& [key, v] : j.items()) {
      try {
        if (key == "input") c.input = v.get<std::string>();
        else if (key == "method") c.method = v.get<std::string>();
        else if (key == "n_t") c.n_t = v.get<int>();
        else if (key == "rho") c.rho = v.get<double>();
        else if (key == "gamma") c.gamma = v.get<int>();
        else if (key == "frob_tol") c.frob_tol = v.get<double>();
        else if (key == "scheme") c.scheme = v.get<std::string>();
        else if (key == "shots") c.shots = v.get<long long>();
        else if (key == "seed") c.seed = v.get<std::uint64_t>();
        else if (key == "out") c.out = v.get<std::string>();
        else if (key == "sector") {
          c.n_alpha = v.at(0).get<int>();
          c.n_beta = v.at(1).get<int>();
        } else if (key == "optimizer") apply_json(v, c.optimizer);
        else throw ParseError("unknown config key '" + key + "'");
      } catch (const nlohmann::json::exception&) {
        throw ParseError("config key '" + key + "' has the wrong type");
      }
    }
  }
  if (f.input) c.input = *f.input;
  if (f.method) c.method = *f.method;
  if (f.n_t) c.n_t = *f.n_t;
  if (f.rho) c.rho = *f.rho;
  if (f.gamma) c.gamma = *f.gamma;
  if (f.tol) c.frob_tol = *f.tol;
  if (f.scheme) c.scheme = *f.scheme;
  if (f.shots) c.shots = *f.shots;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.n_alpha) c.n_alpha = *f.n_alpha;
  if (f.n_beta) c.n_beta = *f.n_beta;

  if (c.method != "xdf" && c.method != "cdf" && c.method != "rcdf") throw UsageError("unknown method " + c.method);
  if (c.method == "cdf") {
    c.method = "rcdf";
    c.rho = 0.0;
    c.fixed_rho = true;
  }
  if (c.gamma != 1 && c.gamma != 2) throw UsageError("gamma must be 1 or 2");
  if (c.rho < 0) throw UsageError("rho must be non-negative");
  if (c.n_t < 0) throw UsageError("n_t must be non-negative");
  if (c.scheme != "uniform" && c.scheme != "weights") throw UsageError("scheme must be uniform or weights");
  if (c.shots < 1) throw UsageError("shots must be positive");
  c.optimizer.frob_tol = c.frob_tol;
  return c;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON configuration file; flags override its keys");
  app->add_option("--input", f.input, "FCIDUMP file");
  app->add_option("--method", f.method, "xdf | cdf | rcdf");
  app->add_option("--nt", f.n_t, "leaf count");
  app->add_option("--rho", f.rho, "uniform regularization weight");
  app->add_option("--gamma", f.gamma, "penalty exponent, 1 or 2");
  app->add_option("--tol", f.tol, "Frobenius-norm abort tolerance");
  app->add_option("--scheme", f.scheme, "uniform | weights");
  app->add_option("--shots", f.shots, "total shot budget");
  app->add_option("--nalpha", f.n_alpha, "spin-up electrons");
  app->add_option("--nbeta", f.n_beta, "spin-down electrons");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--out", f.out, "output directory");
}

ParsedFcidump load_input(const RunConfig& c) {
  if (c.input.empty()) throw UsageError("--input is required");
  if (!fs::exists(c.input)) throw UsageError("input file not found: " + c.input);
  return read_fcidump(c.input);
}

SectorSpec sector_of(const RunConfig& c, const ParsedFcidump& p) {
  SectorSpec s;
  s.n_alpha = c.n_alpha.value_or((p.header.nelec + p.header.ms2) / 2);
  s.n_beta = c.n_beta.value_or((p.header.nelec - p.header.ms2) / 2);
  if (s.n_alpha < 0 || s.n_beta < 0 || s.n_alpha > p.integrals.n || s.n_beta > p.integrals.n) {
    throw UsageError("sector occupation outside [0, n]");
  }
  return s;
}

struct Factorized {
  DFRepresentation rep;
  bool converged = true;
  double frob_error = 0.0;
  std::string trace;  // NDJSON
};

Factorized factorize(const RunConfig& c, const IntegralSet& set) {
  const int n = set.n;
  const DFRepresentation full = xdf_factorize(set);
  Factorized out;
  if (c.method == "xdf") {
    if (c.n_t > full.n_t()) {
      throw UsageError("n_t " + std::to_string(c.n_t) + " exceeds the X-DF leaf count " + std::to_string(full.n_t()));
    }
    out.rep = c.n_t > 0 ? truncate(full, c.n_t) : full;
    out.frob_error = frobenius_error(out.rep, set.eri);
    return out;
  }
  const int n_t = c.n_t > 0 ? c.n_t : n;
  if (n_t > max_leaf_count(n)) {
    throw UsageError("n_t " + std::to_string(n_t) + " exceeds n(n+1)/2 = " + std::to_string(max_leaf_count(n)));
  }
  DFRepresentation init = truncate(full, std::min(n_t, full.n_t()));
  while (init.n_t() < n_t) init.leaves.push_back({Mat::Identity(n, n), Mat::Zero(n, n), std::nullopt});

  RegularizationConfig reg;
  reg.gamma = c.gamma;
  reg.rho = c.rho;
  OptimizerConfig opt = c.optimizer;
  opt.n_t = n_t;
  std::ostringstream trace;
  const RcdfResult r = rcdf_optimize(set, init, reg, opt, [&](const TraceRecord& t) { trace << to_json(t).dump() << '\n'; });
  out.rep = r.rep;
  out.converged = r.converged;
  out.frob_error = r.frob_error;
  out.trace = trace.str();
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_factorize(const RunConfig& c) {
  const ParsedFcidump p = load_input(c);
  const Factorized f = factorize(c, p.integrals);
  const LambdaReport lr = lambda_report(f.rep);
  Json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["method"] = c.method;
  summary["n_t"] = f.rep.n_t();
  summary["frob_error"] = f.frob_error;
  summary["lambda_lcu"] = lr.lambda_lcu;
  summary["lambda_burg"] = lr.lambda_burg;
  summary["converged"] = f.converged;
  const fs::path out = c.out;
  write_file_atomic(out / "representation.json", to_json(f.rep).dump(1) + "\n");
  write_file_atomic(out / "trace.ndjson", f.trace);
  write_file_atomic(out / "summary.json", summary.dump(1) + "\n");
  std::cout << summary.dump() << '\n';
  return kOk;
}

DFRepresentation load_rep(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("representation file not found: " + path);
  return representation_from_json(parse_json_file(path));
}

int cmd_lambda(const RunConfig& c, const std::string& rep_path, bool write) {
  const DFRepresentation rep = load_rep(rep_path);
  const LambdaReport r = lambda_report(rep);
  std::cout << std::left << std::setw(8) << "leaf" << std::right << std::setw(22) << "lambda_lcu" << std::setw(22)
            << "lambda_burg" << '\n';
  std::cout << std::left << std::setw(8) << "one" << std::right << std::setw(22) << fmt(r.one_body_part)
            << std::setw(22) << fmt(r.one_body_part) << '\n';
  for (std::size_t t = 0; t < r.per_leaf_lcu.size(); ++t) {
    std::cout << std::left << std::setw(8) << t << std::right << std::setw(22) << fmt(r.per_leaf_lcu[t])
              << std::setw(22) << fmt(r.per_leaf_burg[t]) << '\n';
  }
  std::cout << std::left << std::setw(8) << "total" << std::right << std::setw(22) << fmt(r.lambda_lcu)
            << std::setw(22) << fmt(r.lambda_burg) << '\n';
  if (write) write_file_atomic(fs::path(c.out) / "lambda.json", to_json(r).dump(1) + "\n");
  return kOk;
}

const char* kCsvHeader = "kind,n_t,rho,scheme,bias,variance,rmse,shots,frob_error,lambda_lcu,lambda_burg,status";
const char* kFffHeader = ",fff_init,fff_iters,shots_to_1mHa";

std::string csv_row(const std::string& kind, int n_t, double rho, const std::string& scheme, const EstimatorStats& s,
                    long long shots, double frob, const LambdaReport& lr, const std::string& status) {
  std::ostringstream o;
  o << kind << ',' << n_t << ',' << fmt(rho) << ',' << scheme << ',' << fmt(s.bias) << ',' << fmt(s.variance) << ','
    << fmt(s.rmse) << ',' << shots << ',' << fmt(frob) << ',' << fmt(lr.lambda_lcu) << ',' << fmt(lr.lambda_burg)
    << ',' << status;
  return o.str();
}

struct MeasureOptions {
  bool gap = false;
  std::optional<double> target;
  std::optional<std::string> fff;
};

int cmd_measure(const RunConfig& c, const std::string& rep_path, const MeasureOptions& m) {
  const ParsedFcidump p = load_input(c);
  const IntegralSet& set = p.integrals;
  const DFRepresentation rep = load_rep(rep_path);
  if (rep.n != set.n) throw UsageError("representation and integrals have different orbital counts");
  const SectorSpec sector = sector_of(c, p);
  const PauliHamiltonian h = build_pauli_hamiltonian(rep);
  const Scheme scheme = parse_scheme(c.scheme);
  const LambdaReport lr = lambda_report(rep);
  const double frob = frobenius_error(rep, set.eri);

  std::ostringstream csv;
  if (m.gap) {
    const FciResult s = fci_ground_state(set, sector, SpinTarget::Singlet);
    const FciResult t = fci_ground_state(set, sector, SpinTarget::Triplet);
    const MeasurementPlan plan = allocate(h, scheme, c.shots);
    const EstimatorStats g = gap_stats(h, s.state, t.state, plan, plan, t.energy - s.energy);
    csv << kCsvHeader << '\n' << csv_row("gap", rep.n_t(), c.rho, c.scheme, g, 2 * c.shots, frob, lr, "ok") << '\n';
  } else {
    const FciResult gs = fci_ground_state(set, sector, SpinTarget::Lowest);
    const auto moments = basis_moments(h, gs.state);
    if (m.target) {
      const long long shots = shots_to_target(h, moments, gs.energy, scheme, *m.target);
      const MeasurementPlan plan = allocate(h, scheme, shots);
      const EstimatorStats st = combine(h.constant, moments, plan.shots_per_basis, gs.energy);
      csv << kCsvHeader << '\n' << csv_row("target", rep.n_t(), c.rho, c.scheme, st, shots, frob, lr, "ok") << '\n';
    } else if (m.fff) {
      FffInit init = FffInit::Zero;
      if (*m.fff == "eq6") init = FffInit::Eq6;
      else if (*m.fff == "random") init = FffInit::Random;
      else if (*m.fff != "zero") throw UsageError("--fff must be zero, eq6 or random");
      const FFFCoefficients c0 = fff_initial(rep, init, substream(c.seed, kFffInitStream));
      const FffResult r = fff_optimize(set, rep, c0, gs.state, c.shots);
      const PauliHamiltonian hf = build_fff_hamiltonian(set, rep, r.c);
      const EstimatorStats st = estimator_stats(hf, gs.state, r.plan, gs.energy);
      csv << kCsvHeader << kFffHeader << '\n'
          << csv_row("fff", rep.n_t(), c.rho, "optimal", st, c.shots, frob, lr, r.converged ? "ok" : "not_converged")
          << ',' << *m.fff << ',' << r.iterations << ',' << static_cast<long long>(std::ceil(r.shots_to_target))
          << '\n';
    } else {
      const MeasurementPlan plan = allocate(h, scheme, c.shots);
      const EstimatorStats st = combine(h.constant, moments, plan.shots_per_basis, gs.energy);
      csv << kCsvHeader << '\n' << csv_row("energy", rep.n_t(), c.rho, c.scheme, st, c.shots, frob, lr, "ok") << '\n';
    }
  }
  write_file_atomic(fs::path(c.out) / "measure.csv", csv.str());
  std::cout << csv.str();
  return kOk;
}

int cmd_sweep(const RunConfig& base, const std::string& axis, const std::vector<std::string>& values) {
  if (values.empty()) throw UsageError("--values needs at least one entry");
  if (axis != "nt" && axis != "rho") throw UsageError("--axis must be nt or rho");
  const ParsedFcidump p = load_input(base);
  const IntegralSet& set = p.integrals;
  const SectorSpec sector = sector_of(base, p);
  const FciResult gs = fci_ground_state(set, sector, SpinTarget::Lowest);
  const Scheme scheme = parse_scheme(base.scheme);

  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  for (const auto& value : values) {
    RunConfig c = base;
    try {
      if (axis == "nt") c.n_t = std::stoi(value);
      else c.rho = std::stod(value);
    } catch (const std::exception&) {
      throw UsageError("cannot parse sweep value '" + value + "'");
    }
    if (c.fixed_rho) c.rho = 0.0;
    try {
      const Factorized f = factorize(c, set);
      const PauliHamiltonian h = build_pauli_hamiltonian(f.rep);
      const MeasurementPlan plan = allocate(h, scheme, c.shots);
      const EstimatorStats st = combine(h.constant, basis_moments(h, gs.state), plan.shots_per_basis, gs.energy);
      csv << csv_row("energy", f.rep.n_t(), c.rho, c.scheme, st, c.shots, f.frob_error, lambda_report(f.rep),
                     f.converged ? "ok" : "not_converged")
          << '\n';
    } catch (const std::exception& e) {
      std::string msg = e.what();
      for (auto& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
      csv << "energy," << (axis == "nt" ? value : std::to_string(c.n_t)) << ',' << fmt(c.rho) << ',' << c.scheme
          << ",,,,,,,,error: " << msg << '\n';
    }
  }
  write_file_atomic(fs::path(base.out) / "sweep.csv", csv.str());
  std::cout << csv.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dfkit: double-factorized Hamiltonians, lambda values and measurement budgets"};
  app.require_subcommand(1);
  Flags flags;

  auto* fact = app.add_subcommand("factorize", "factorize an FCIDUMP and write the representation");
  add_common(fact, flags);

  std::string rep_path;
  auto* lam = app.add_subcommand("lambda", "report lambda values of a representation");
  add_common(lam, flags);
  lam->add_option("--rep", rep_path, "representation JSON")->required();

  MeasureOptions mopt;
  auto* meas = app.add_subcommand("measure", "estimator statistics against the exact ground state");
  add_common(meas, flags);
  meas->add_option("--rep", rep_path, "representation JSON")->required();
  meas->add_flag("--gap", mopt.gap, "singlet-triplet gap statistics");
  meas->add_option("--shots-to-target", mopt.target, "report the shot count reaching this rmse (Hartree)");
  meas->add_option("--fff", mopt.fff, "optimize fluid fragments from zero | eq6 | random");

  std::string axis;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "factorize and measure over a list of n_t or rho values");
  add_common(sweep, flags);
  sweep->add_option("--axis", axis, "nt | rho")->required();
  sweep->add_option("--values", values, "comma-separated values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const RunConfig c = resolve(flags);
    if (*fact) return cmd_factorize(c);
    if (*lam) return cmd_lambda(c, rep_path, flags.out.has_value());
    if (*meas) return cmd_measure(c, rep_path, mopt);
    if (*sweep) return cmd_sweep(c, axis, values);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const BoundsError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ConsistencyError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const UnreachableError& e) {
    std::cerr << "unreachable: " << e.what() << " (bias floor " << fmt(e.bias_floor()) << ")\n";
    return kNoConvergence;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
