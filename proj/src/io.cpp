// Copyright 2026 The ctoqw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctoqw/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ctoqw/error.hpp"

namespace ctoqw::io {

namespace {

cplx scalar_from_json(const json& v, const char* name) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ValidationError(std::string("coin file: entries of ") + name +
                          " must be [re, im] pairs");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

void dump_value(std::ostringstream& os, const json& v, int depth) {
  const auto indent = [&](int level) { os << std::string(static_cast<std::size_t>(2 * level), ' '); };
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        indent(depth + 1);
        os << json(it.key()).dump() << ": ";
        dump_value(os, it.value(), depth + 1);
      }
      os << "\n";
      indent(depth);
      os << "}";
      return;
    }
    case json::value_t::array: {
      // Arrays of scalars stay on one line; nested structures get one element per line.
      bool flat = true;
      for (const auto& e : v) flat = flat && e.is_primitive();
      if (flat) {
        os << "[";
        for (std::size_t k = 0; k < v.size(); ++k) {
          if (k > 0) os << ", ";
          dump_value(os, v[k], depth);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k > 0) os << ",\n";
        indent(depth + 1);
        dump_value(os, v[k], depth + 1);
      }
      os << "\n";
      indent(depth);
      os << "]";
      return;
    }
    case json::value_t::number_float:
      os << format_real(v.get<double>());
      return;
    default:
      os << v.dump();
      return;
  }
}

}  // namespace

std::string format_real(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, Eigen::Index d, const char* name) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != d) {
    throw ValidationError(std::string("coin file: ") + name + " must have " + std::to_string(d) +
                          " rows");
  }
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw ValidationError(std::string("coin file: ") + name + " must have " + std::to_string(d) +
                            " columns");
    }
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = scalar_from_json(row[static_cast<std::size_t>(j)], name);
  }
  return m;
}

CoinFile parse_coin(const json& doc) {
  if (!doc.is_object()) throw ValidationError("coin file: top level must be an object");
  for (const char* key : {"d", "C", "A", "H"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("coin file: missing key \"") + key + "\"");
  }
  if (!doc["d"].is_number_integer() || doc["d"].get<long>() < 1) {
    throw ValidationError("coin file: \"d\" must be a positive integer");
  }
  const auto d = static_cast<Eigen::Index>(doc["d"].get<long>());
  Coin coin = Coin::validate(matrix_from_json(doc["C"], d, "C"), matrix_from_json(doc["A"], d, "A"),
                             matrix_from_json(doc["H"], d, "H"));
  std::optional<DensityMatrix> rho0;
  if (doc.contains("rho0")) rho0 = DensityMatrix::from_matrix(matrix_from_json(doc["rho0"], d, "rho0"));
  std::string description;
  if (doc.contains("description") && doc["description"].is_string()) {
    description = doc["description"].get<std::string>();
  }
  return {std::move(coin), std::move(rho0), std::move(description)};
}

CoinFile read_coin_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open coin file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("coin file " + path.string() + ": malformed JSON (" + e.what() + ")");
  }
  return parse_coin(doc);
}

json coin_to_json(const Coin& coin, const std::optional<DensityMatrix>& rho0,
                  const std::string& description) {
  json doc;
  if (!description.empty()) doc["description"] = description;
  doc["d"] = coin.dim();
  doc["C"] = to_json(coin.C());
  doc["A"] = to_json(coin.A());
  doc["H"] = to_json(coin.H());
  if (rho0) doc["rho0"] = to_json(rho0->matrix());
  return doc;
}

std::string dump(const json& doc) {
  std::ostringstream os;
  dump_value(os, doc, 0);
  os << "\n";
  return os.str();
}

void write_series_csv(std::ostream& os, const std::vector<double>& t, const std::vector<double>& p) {
  os << "t,p\n";
  for (std::size_t k = 0; k < t.size() && k < p.size(); ++k) {
    os << format_real(t[k]) << ',' << format_real(p[k]) << '\n';
  }
}

void write_profile_csv(std::ostream& os, const std::vector<BlockState>& states) {
  os << "t,site,trace\n";
  for (const BlockState& s : states) {
    for (int i = -s.M; i <= s.M; ++i) {
      os << format_real(s.time) << ',' << i << ',' << format_real(s.trace_at(i)) << '\n';
    }
  }
}

void write_path_csv(std::ostream& os, const TrajectoryPath& path) {
  os << "jump_index,time,site\n";
  os << "0," << format_real(0.0) << ',' << path.sites.front() << '\n';
  for (std::size_t k = 0; k < path.jump_times.size(); ++k) {
    os << k + 1 << ',' << format_real(path.jump_times[k]) << ',' << path.sites[k + 1] << '\n';
  }
}

json drift_estimate_to_json(const DriftEstimate& est) {
  return json{{"mean", est.mean},
              {"stderr", est.std_error},
              {"n_paths", est.n_paths},
              {"horizon", est.horizon},
              {"seed", est.seed}};
}

}  // namespace ctoqw::io
