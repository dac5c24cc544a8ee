// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfkit/serialize.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "dfkit/errors.hpp"

namespace dfkit {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ParseError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("field '" + what + "' has the wrong type");
  }
}

Json vector_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = get<double>(row[static_cast<std::size_t>(c)], "matrix entry");
  }
  return m;
}

Json to_json(const DFRepresentation& rep) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = rep.n;
  j["n_t"] = rep.n_t();
  j["offset"] = rep.offset;
  j["one_body"] = {{"u0", matrix_to_json(rep.one_body.u0)}, {"f_eigs", vector_to_json(rep.one_body.f_eigs)}};
  Json leaves = Json::array();
  for (const auto& leaf : rep.leaves) {
    Json l;
    l["u"] = matrix_to_json(leaf.u);
    l["z"] = matrix_to_json(leaf.z);
    l["g"] = leaf.origin ? Json(leaf.origin->g) : Json(nullptr);
    leaves.push_back(std::move(l));
  }
  j["leaves"] = std::move(leaves);
  return j;
}

DFRepresentation representation_from_json(const Json& j) {
  const int version = get<int>(field(j, "schema_version"), "schema_version");
  if (version != kSchemaVersion) throw ParseError("unsupported schema_version " + std::to_string(version));
  DFRepresentation rep;
  rep.n = get<int>(field(j, "n"), "n");
  if (rep.n < 1) throw ParseError("n must be positive");
  rep.offset = get<double>(field(j, "offset"), "offset");
  const Json& one = field(j, "one_body");
  rep.one_body.u0 = matrix_from_json(field(one, "u0"));
  const Json& f = field(one, "f_eigs");
  if (!f.is_array()) throw ParseError("f_eigs must be an array");
  rep.one_body.f_eigs.resize(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) rep.one_body.f_eigs(static_cast<Eigen::Index>(i)) = get<double>(f[i], "f_eigs");
  if (rep.one_body.u0.rows() != rep.n || rep.one_body.u0.cols() != rep.n || rep.one_body.f_eigs.size() != rep.n) {
    throw ParseError("one-body factor does not match n");
  }
  rep.one_body.f_matrix = rep.one_body.u0 * rep.one_body.f_eigs.asDiagonal() * rep.one_body.u0.transpose();

  const Json& leaves = field(j, "leaves");
  if (!leaves.is_array()) throw ParseError("leaves must be an array");
  for (const auto& l : leaves) {
    DFLeaf leaf;
    leaf.u = matrix_from_json(field(l, "u"));
    leaf.z = matrix_from_json(field(l, "z"));
    if (leaf.u.rows() != rep.n || leaf.u.cols() != rep.n || leaf.z.rows() != rep.n || leaf.z.cols() != rep.n) {
      throw ParseError("leaf " + std::to_string(rep.leaves.size()) + " does not match n");
    }
    if (l.contains("g") && !l["g"].is_null()) leaf.origin = XdfOrigin{get<double>(l["g"], "g"), Mat(), 0.0};
    rep.leaves.push_back(std::move(leaf));
  }
  if (j.contains("n_t") && get<int>(j["n_t"], "n_t") != rep.n_t()) throw ParseError("n_t does not match the leaf list");
  return rep;
}

Json to_json(const LambdaReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["lambda_lcu"] = r.lambda_lcu;
  j["lambda_burg"] = r.lambda_burg;
  j["one_body"] = r.one_body_part;
  j["per_leaf_lcu"] = r.per_leaf_lcu;
  j["per_leaf_burg"] = r.per_leaf_burg;
  return j;
}

Json to_json(const EstimatorStats& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["exact"] = s.exact;
  j["estimate"] = s.estimate;
  j["bias"] = s.bias;
  j["variance"] = s.variance;
  j["rmse"] = s.rmse;
  j["per_basis_variance"] = s.per_basis_variance;
  j["per_basis_mean"] = s.per_basis_mean;
  j["shots_per_basis"] = s.shots_per_basis;
  return j;
}

Json to_json(const TraceRecord& r) {
  Json j;
  j["cycle"] = r.cycle;
  j["cost"] = r.cost;
  j["frob_error"] = r.frob_error;
  j["penalty"] = r.penalty;
  j["cg_iters"] = r.cg_iters;
  j["lbfgs_iters"] = r.lbfgs_iters;
  return j;
}

void apply_json(const Json& j, OptimizerConfig& opt) {
  check_keys(j, {"n_t", "frob_tol", "max_outer_iters", "stall_tol", "lbfgs", "cg", "l1"}, "optimizer");
  if (j.contains("n_t")) opt.n_t = get<int>(j["n_t"], "n_t");
  if (j.contains("frob_tol")) opt.frob_tol = get<double>(j["frob_tol"], "frob_tol");
  if (j.contains("max_outer_iters")) opt.max_outer_iters = get<int>(j["max_outer_iters"], "max_outer_iters");
  if (j.contains("stall_tol")) opt.stall_tol = get<double>(j["stall_tol"], "stall_tol");
  if (j.contains("lbfgs")) {
    const Json& l = j["lbfgs"];
    check_keys(l, {"memory", "grad_tol", "max_iters"}, "lbfgs");
    if (l.contains("memory")) opt.lbfgs.memory = get<int>(l["memory"], "lbfgs.memory");
    if (l.contains("grad_tol")) opt.lbfgs.grad_tol = get<double>(l["grad_tol"], "lbfgs.grad_tol");
    if (l.contains("max_iters")) opt.lbfgs.max_iters = get<int>(l["max_iters"], "lbfgs.max_iters");
  }
  if (j.contains("cg")) {
    const Json& c = j["cg"];
    check_keys(c, {"rel_tol", "max_iters"}, "cg");
    if (c.contains("rel_tol")) opt.cg.rel_tol = get<double>(c["rel_tol"], "cg.rel_tol");
    if (c.contains("max_iters")) opt.cg.max_iters = get<int>(c["max_iters"], "cg.max_iters");
  }
  if (j.contains("l1")) {
    const Json& l = j["l1"];
    check_keys(l, {"max_sweeps", "sign_tol"}, "l1");
    if (l.contains("max_sweeps")) opt.l1.max_sweeps = get<int>(l["max_sweeps"], "l1.max_sweeps");
    if (l.contains("sign_tol")) opt.l1.sign_tol = get<double>(l["sign_tol"], "l1.sign_tol");
  }
}

void apply_json(const Json& j, RegularizationConfig& reg) {
  check_keys(j, {"gamma", "rho"}, "regularization");
  if (j.contains("gamma")) reg.gamma = get<int>(j["gamma"], "gamma");
  if (j.contains("rho")) {
    const Json& r = j["rho"];
    if (r.is_number()) {
      reg.rho = r.get<double>();
      reg.rho_tensor.clear();
    } else if (r.is_array()) {
      reg.rho_tensor.clear();
      for (const auto& m : r) reg.rho_tensor.push_back(matrix_from_json(m));
    } else {
      throw ParseError("rho must be a number or an array of matrices");
    }
  }
}

Json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  const auto tmp = dir / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace dfkit
