// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfkit/integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <sstream>

#include "dfkit/errors.hpp"

namespace dfkit {

namespace {

using Index4 = std::array<int, 4>;

// The eight index permutations preserving (pq|rs) for real orbitals.
std::array<Index4, 8> permutations(int p, int q, int r, int s) {
  return {{{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
           {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}}};
}

Index4 canonical(int p, int q, int r, int s) {
  if (p < q) std::swap(p, q);
  if (r < s) std::swap(r, s);
  if (std::make_pair(p, q) < std::make_pair(r, s)) {
    std::swap(p, r);
    std::swap(q, s);
  }
  return {p, q, r, s};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

bool header_key(const std::string& header, const std::string& key, int& out) {
  const std::regex re("\\b" + key + "\\s*=\\s*(-?\\d+)");
  std::smatch m;
  if (!std::regex_search(header, m, re)) return false;
  out = std::stoi(m[1].str());
  return true;
}

double parse_value(std::string token, int line_no) {
  for (auto& c : token) {
    if (c == 'D' || c == 'd') c = 'E';
  }
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw ParseError("malformed value '" + token + "'", line_no);
  }
  return v;
}

int parse_index(const std::string& token, int line_no) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(token, &pos);
  } catch (const std::exception&) {
    throw ParseError("malformed index '" + token + "'", line_no);
  }
  if (pos != token.size()) throw ParseError("malformed index '" + token + "'", line_no);
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%24.16E", v);
  return buf;
}

constexpr double kDuplicateTol = 1e-10;

}  // namespace

IntegralSet IntegralSet::zeros(int n) {
  IntegralSet s;
  s.n = n;
  s.h_one = Mat::Zero(n, n);
  s.eri = Mat::Zero(n * n, n * n);
  return s;
}

void IntegralSet::set_two_symmetric(int p, int q, int r, int s, double value) {
  for (const auto& [a, b, c, d] : permutations(p, q, r, s)) two(a, b, c, d) = value;
}

ParsedFcidump parse_fcidump(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::string header;
  bool in_header = false;
  bool header_done = false;

  while (!header_done && std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string u = upper(t);
    if (!in_header) {
      if (u.rfind("&FCI", 0) != 0 && u.rfind("$FCI", 0) != 0) {
        throw ParseError("expected '&FCI' header", line_no);
      }
      in_header = true;
    }
    header += u + "\n";
    if (u.find("&END") != std::string::npos || u.find("$END") != std::string::npos || u == "/") {
      header_done = true;
    }
  }
  if (!header_done) throw ParseError("unterminated FCIDUMP header", line_no);

  FcidumpHeader meta;
  if (!header_key(header, "NORB", meta.norb) || meta.norb < 0) {
    throw ParseError("header lacks a valid NORB");
  }
  header_key(header, "NELEC", meta.nelec);
  header_key(header, "MS2", meta.ms2);

  const int n = meta.norb;
  IntegralSet set = IntegralSet::zeros(n);

  // Entries keyed by canonical orbit; one-electron keys use {p, q, -1, -1}.
  std::map<Index4, double> entries;
  bool have_core = false;

  auto store = [&](const Index4& key, double value) {
    auto [it, inserted] = entries.emplace(key, value);
    if (!inserted) {
      if (std::abs(it->second - value) > kDuplicateTol) {
        std::ostringstream msg;
        msg << "conflicting duplicate entry: " << it->second << " vs " << value;
        throw ConsistencyError("line " + std::to_string(line_no) + ": " + msg.str());
      }
      it->second = value;
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string w; ls >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (tok.size() != 5) throw ParseError("expected 'value i j k l'", line_no);

    const double value = parse_value(tok[0], line_no);
    std::array<int, 4> idx{};
    for (int a = 0; a < 4; ++a) idx[a] = parse_index(tok[a + 1], line_no);
    for (int a = 0; a < 4; ++a) {
      if (idx[a] < 0 || idx[a] > n) {
        throw BoundsError("line " + std::to_string(line_no) + ": index " + std::to_string(idx[a]) +
                          " outside [1, " + std::to_string(n) + "]");
      }
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      if (have_core && std::abs(set.e_core - value) > kDuplicateTol) {
        throw ConsistencyError("line " + std::to_string(line_no) + ": conflicting core energy");
      }
      set.e_core = value;
      have_core = true;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      store(canonical(i - 1, j - 1, k - 1, l - 1), value);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      store({std::max(i, j) - 1, std::min(i, j) - 1, -1, -1}, value);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // Orbital energy line; carries no Hamiltonian information.
    } else {
      throw ParseError("unrecognised index pattern", line_no);
    }
  }

  for (const auto& [key, value] : entries) {
    if (key[2] < 0) {
      set.h_one(key[0], key[1]) = value;
      set.h_one(key[1], key[0]) = value;
    } else {
      set.set_two_symmetric(key[0], key[1], key[2], key[3], value);
    }
  }
  return {std::move(set), meta};
}

ParsedFcidump parse_fcidump(const std::string& text) {
  std::istringstream in(text);
  return parse_fcidump(in);
}

ParsedFcidump read_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_fcidump(in);
}

std::string write_fcidump(const IntegralSet& set, const FcidumpHeader& header) {
  const int n = set.n;
  std::ostringstream out;
  out << " &FCI NORB=" << n << ",NELEC=" << header.nelec << ",MS2=" << header.ms2 << ",\n  ORBSYM=";
  for (int p = 0; p < n; ++p) out << "1,";
  out << "\n  ISYM=1,\n &END\n";
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s <= r; ++s) {
          if (p * n + q < r * n + s) continue;
          const double v = set.two(p, q, r, s);
          if (v == 0.0) continue;
          out << format_double(v) << ' ' << p + 1 << ' ' << q + 1 << ' ' << r + 1 << ' ' << s + 1 << '\n';
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      const double v = set.h_one(p, q);
      if (v == 0.0) continue;
      out << format_double(v) << ' ' << p + 1 << ' ' << q + 1 << " 0 0\n";
    }
  out << format_double(set.e_core) << " 0 0 0 0\n";
  return out.str();
}

std::vector<std::string> validate(const IntegralSet& set, double tol) {
  std::vector<std::string> out;
  const int n = set.n;
  char buf[160];

  const double h_scale = set.h_one.size() ? set.h_one.cwiseAbs().maxCoeff() : 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const double d = std::abs(set.h_one(p, q) - set.h_one(q, p));
      if (d > tol * h_scale) {
        std::snprintf(buf, sizeof buf, "h_one (%d,%d) asymmetric by %.3e", p, q, d);
        out.emplace_back(buf);
      }
    }

  const double g_scale = set.eri.size() ? set.eri.cwiseAbs().maxCoeff() : 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s <= r; ++s) {
          if (p * n + q < r * n + s) continue;
          std::vector<Index4> orbit;
          for (const auto& t : permutations(p, q, r, s)) {
            if (std::find(orbit.begin(), orbit.end(), t) == orbit.end()) orbit.push_back(t);
          }
          std::vector<double> values;
          for (const auto& [a, b, c, d] : orbit) values.push_back(set.two(a, b, c, d));
          std::vector<double> sorted = values;
          std::sort(sorted.begin(), sorted.end());
          const double median = sorted[(sorted.size() - 1) / 2];
          std::size_t worst = 0;
          double worst_dev = 0.0;
          for (std::size_t i = 0; i < values.size(); ++i) {
            const double dev = std::abs(values[i] - median);
            if (dev > worst_dev) {
              worst_dev = dev;
              worst = i;
            }
          }
          if (worst_dev > tol * g_scale) {
            const auto& [a, b, c, d] = orbit[worst];
            std::snprintf(buf, sizeof buf, "eri (%d,%d,%d,%d) deviates from its permutation orbit by %.3e", a,
                          b, c, d, worst_dev);
            out.emplace_back(buf);
          }
        }
  return out;
}

IntegralSet random_symmetric_set(int n, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("random_symmetric_set requires n >= 1");
  std::mt19937_64 rng(seed);
  // Portable uniform [-1, 1): the top 53 bits of each draw.
  auto uniform = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };

  IntegralSet set = IntegralSet::zeros(n);
  set.e_core = uniform();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      const double v = uniform();
      set.h_one(p, q) = v;
      set.h_one(q, p) = v;
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s <= r; ++s) {
          if (p * n + q < r * n + s) continue;
          set.set_two_symmetric(p, q, r, s, uniform());
        }
  return set;
}

IntegralSet rotate_integrals(const IntegralSet& set, const Mat& u) {
  const int n = set.n;
  IntegralSet out = IntegralSet::zeros(n);
  out.e_core = set.e_core;
  out.h_one = u.transpose() * set.h_one * u;
  Mat kron(n * n, n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) kron(a * n + b, p * n + q) = u(a, p) * u(b, q);
  out.eri = kron.transpose() * set.eri * kron;
  return out;
}

}  // namespace dfkit
