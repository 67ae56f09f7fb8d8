#pragma once

#include "chanvar/bounds.hpp"
#include "chanvar/channel.hpp"
#include "chanvar/properties.hpp"
#include "chanvar/state.hpp"
#include "chanvar/variance.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace chanvar {

using json = nlohmann::json;

/// Shape or type violation in an input document. Distinct from domain errors
/// (a well-formed channel that fails completeness is not a schema error).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File cannot be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& keys, const char* what) {
  if (!j.is_object()) throw SchemaError(std::string(what) + ": expected a JSON object");
  for (const auto& item : j.items())
    if (!keys.count(item.key()))
      throw SchemaError(std::string(what) + ": unexpected key '" + item.key() + "'");
  for (const std::string& k : keys)
    if (!j.contains(k)) throw SchemaError(std::string(what) + ": missing key '" + k + "'");
}

inline cplx entry_from_json(const json& e, const char* what) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw SchemaError(std::string(what) + ": entry must be [re, im]");
  return cplx(e[0].get<double>(), e[1].get<double>());
}

inline cmat matrix_from_json(const json& m, Index rows, Index cols, const char* what) {
  if (!m.is_array() || static_cast<Index>(m.size()) != rows)
    throw SchemaError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  cmat out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = m[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw SchemaError(std::string(what) + ": expected " + std::to_string(cols) + " entries per row");
    for (Index c = 0; c < cols; ++c)
      out(r, c) = entry_from_json(row[static_cast<std::size_t>(c)], what);
  }
  return out;
}

inline json matrix_to_json(const cmat& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Schema: { "dim": n, "kraus": [ op, ... ] }, op = dim rows of dim [re, im]
/// entries.
inline KrausMap channel_from_json(const json& j) {
  detail::require_keys(j, {"dim", "kraus"}, "channel");
  const json& jd = j.at("dim");
  if (!jd.is_number_integer() || jd.get<long long>() <= 0)
    throw SchemaError("channel: 'dim' must be a positive integer");
  const Index dim = jd.get<Index>();
  const json& jk = j.at("kraus");
  if (!jk.is_array() || jk.empty())
    throw SchemaError("channel: 'kraus' must be a non-empty array");
  std::vector<cmat> ops;
  ops.reserve(jk.size());
  for (const json& op : jk) ops.push_back(detail::matrix_from_json(op, dim, dim, "channel"));
  return KrausMap::from_ops(std::move(ops));
}

inline json channel_to_json(const KrausMap& m) {
  json j;
  j["dim"] = m.dim();
  json ops = json::array();
  for (const cmat& k : m.ops) ops.push_back(detail::matrix_to_json(k));
  j["kraus"] = std::move(ops);
  return j;
}

/// Schema: { "bloch": [rx, ry, rz] } or { "matrix": nested [re, im] rows }.
inline DensityMatrix state_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("state: expected a JSON object");
  if (j.size() != 1 || (!j.contains("bloch") && !j.contains("matrix")))
    throw SchemaError("state: expected exactly one of 'bloch' or 'matrix'");
  if (j.contains("bloch")) {
    const json& b = j.at("bloch");
    if (!b.is_array() || b.size() != 3 || !b[0].is_number() || !b[1].is_number() ||
        !b[2].is_number())
      throw SchemaError("state: 'bloch' must be an array of three numbers");
    return DensityMatrix::from_bloch(b[0].get<double>(), b[1].get<double>(), b[2].get<double>());
  }
  const json& m = j.at("matrix");
  if (!m.is_array() || m.empty()) throw SchemaError("state: 'matrix' must be a non-empty array");
  const Index dim = static_cast<Index>(m.size());
  return DensityMatrix::from_matrix(detail::matrix_from_json(m, dim, dim, "state"));
}

inline json state_to_json(const DensityMatrix& rho) {
  json j;
  j["matrix"] = detail::matrix_to_json(rho.rho());
  return j;
}

inline json params_to_json(const BoundParams& p) {
  json j;
  j["M"] = p.M;
  j["L"] = p.L;
  j["variant"] = variant_name(p.variant);
  return j;
}

inline BoundParams params_from_json(const json& j) {
  detail::require_keys(j, {"M", "L", "variant"}, "params");
  if (!j.at("M").is_number() || !j.at("L").is_number() || !j.at("variant").is_string())
    throw SchemaError("params: M and L must be numbers, variant a string");
  BoundParams p;
  p.M = j.at("M").get<double>();
  p.L = j.at("L").get<double>();
  p.variant = variant_from_string(j.at("variant").get<std::string>());
  return p;
}

inline json uncertainty_to_json(const UncertaintyValue& u) {
  json j;
  j["value"] = u.value;
  j["per_kraus"] = u.per_kraus;
  return j;
}

inline json report_to_json(const BoundReport& r) {
  json j;
  j["kind"] = r.kind;
  j["lhs"] = r.lhs;
  j["bound"] = r.bound;
  j["gap"] = r.gap;
  if (r.ratio) j["ratio"] = std::isfinite(*r.ratio) ? json(*r.ratio) : json();
  if (r.params) j["params"] = params_to_json(*r.params);
  json mx;
  mx["per_channel"] = r.maximizer.per_channel;
  if (!r.maximizer.signs.empty()) mx["signs"] = r.maximizer.signs;
  j["maximizer"] = std::move(mx);
  if (!r.winner.empty()) {
    j["winner"] = r.winner;
    json comps;
    for (const auto& [name, value] : r.components) comps[name] = value;
    j["components"] = std::move(comps);
  }
  return j;
}

inline json instance_to_json(const CheckInstance& inst) {
  json j;
  json chans = json::array();
  for (const KrausChannel& ch : inst.channels) chans.push_back(channel_to_json(ch.map()));
  j["channels"] = std::move(chans);
  json states = json::array();
  for (const DensityMatrix& s : inst.states) states.push_back(state_to_json(s));
  j["states"] = std::move(states);
  if (!inst.weights.empty()) j["weights"] = inst.weights;
  if (inst.unitary) j["unitary"] = detail::matrix_to_json(*inst.unitary);
  if (inst.params) j["params"] = params_to_json(*inst.params);
  if (inst.dim_a > 0) {
    j["dim_a"] = inst.dim_a;
    j["dim_b"] = inst.dim_b;
  }
  return j;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  return json::parse(in);  // throws json::parse_error on malformed input
}

/// 17 significant digits: enough for exact double round-trips.
inline std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_csv(const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows, std::ostream& os) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << columns[i];
  }
  os << '\n';
  for (const std::vector<double>& row : rows) {
    if (row.size() != columns.size())
      throw std::invalid_argument("write_csv: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_full(row[i]);
    }
    os << '\n';
  }
}

}  // namespace chanvar
