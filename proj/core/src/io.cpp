#include "sepmeas/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "sepmeas/errors.hpp"

namespace sepmeas::io {

namespace {

constexpr double kStateMatchTol = 1e-12;

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError("complex number must be a two-element [re, im] array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("vector must be a non-empty array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw InputError("matrix must be a non-empty array of rows");
  }
  const std::size_t cols = j[0].size();
  CMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
    }
  }
  return m;
}

json instance_to_json(const Instance& inst) {
  json states = json::array();
  for (int j = 1; j <= inst.n(); ++j) states.push_back(vector_to_json(inst.state(j)));
  const auto dims = inst.party_dims().dims();
  return json{{"n", inst.n()},
              {"dims", std::vector<std::size_t>(dims.begin(), dims.end())},
              {"omit", inst.omit()},
              {"states", std::move(states)}};
}

Instance instance_from_json(const json& j) {
  int n = 0;
  int omit = 1;
  std::vector<std::size_t> dims;
  try {
    n = require(j, "n").get<int>();
    dims = require(j, "dims").get<std::vector<std::size_t>>();
    omit = j.contains("omit") ? j.at("omit").get<int>() : 1;
  } catch (const json::exception& e) {
    throw InputError(std::string("instance: ") + e.what());
  }
  if (dims.empty()) throw InputError("instance: dims must be non-empty");
  Instance inst = make_instance(n, dims, omit);
  if (j.contains("states")) {
    const json& states = j.at("states");
    if (!states.is_array() || states.size() != static_cast<std::size_t>(n)) {
      throw InputError("instance: expected " + std::to_string(n) + " states");
    }
    for (int label = 1; label <= n; ++label) {
      const CVector stored = vector_from_json(states[static_cast<std::size_t>(label - 1)]);
      if (stored.size() != inst.state(label).size() || (stored - inst.state(label)).norm() > kStateMatchTol) {
        throw InputError("instance: stored state " + std::to_string(label) + " does not match n/dims");
      }
    }
  }
  return inst;
}

json usd_report_to_json(const UsdReport& report) {
  return json{{"failure_probability", report.failure_probability},
              {"weights", report.weights},
              {"q_values", report.q_values},
              {"optimal", report.optimal},
              {"psd_min_eigenvalue", report.psd_min_eigenvalue},
              {"per_state_success", report.per_state_success}};
}

json measurement_to_json(std::span<const ProductOperator> ops) {
  json out = json::array();
  for (const ProductOperator& op : ops) {
    json entry = json::array();
    for (const HermOp& factor : op) entry.push_back(matrix_to_json(factor.matrix()));
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<ProductOperator> measurement_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("measurement must be a non-empty array of entries");
  std::vector<ProductOperator> out;
  for (std::size_t e = 0; e < j.size(); ++e) {
    if (!j[e].is_array() || j[e].empty()) {
      throw InputError("measurement entry " + std::to_string(e) + " must be a list of factor matrices");
    }
    // A single bare matrix (array of rows of [re, im]) is an unfactored operator.
    if (j[e][0].is_array() && !j[e][0].empty() && j[e][0][0].is_number()) {
      throw InputError("measurement entry " + std::to_string(e) + " is not in factored product form");
    }
    ProductOperator op;
    for (const json& factor : j[e]) op.emplace_back(matrix_from_json(factor));
    out.push_back(std::move(op));
  }
  return out;
}

json cone_report_to_json(const ConeReport& report) {
  json parties = json::array();
  for (const PartyCount& p : report.parties) {
    parties.push_back(json{{"party", p.party},
                           {"generators", p.generators},
                           {"rays", p.rays},
                           {"extreme", p.extreme},
                           {"skipped", p.skipped}});
  }
  return json{{"parties", std::move(parties)},
              {"total", report.total},
              {"bound", report.bound},
              {"verdict", to_string(report.verdict)},
              {"warnings", report.warnings},
              {"notes", report.notes}};
}

json sim_report_to_json(const SimReport& report) {
  json counts = json::object();
  for (const OutcomeTally& t : report.counts) counts[t.outcome] = t.count;
  return json{{"seed", report.seed},
              {"trials", report.trials},
              {"copies", report.copies},
              {"counts", std::move(counts)},
              {"misidentifications", report.misidentifications},
              {"empirical_failure", report.empirical_failure},
              {"theoretical_failure", report.theoretical_failure},
              {"tv_distance", report.tv_distance}};
}

json manifest_to_json(const RunManifest& manifest) {
  return json{{"command", manifest.command},
              {"parameters", manifest.parameters},
              {"version", manifest.version},
              {"seeds", manifest.seeds},
              {"timestamp", manifest.timestamp}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace sepmeas::io
