#pragma once

// JSON encodings shared by the command-line tool and external consumers.
// Complex scalars are [re, im] arrays; matrices are nested row-major arrays.
// Doubles are written in shortest round-trip form, so parse(dump(x)) == x.

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sepmeas/cone.hpp"
#include "sepmeas/instance.hpp"
#include "sepmeas/simulator.hpp"
#include "sepmeas/usd.hpp"

namespace sepmeas::io {

using nlohmann::json;

json complex_to_json(Complex z);
Complex complex_from_json(const json& j);

json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);

json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

/// {"n", "dims", "omit", "states"}; states[j-1] holds the amplitudes of Psi_j.
json instance_to_json(const Instance& inst);

/// Rebuilds the instance from n/dims/omit and requires the stored states to
/// match the rebuilt ones within 1e-12. Throws InputError on malformed input.
Instance instance_from_json(const json& j);

json usd_report_to_json(const UsdReport& report);

/// Array of entries, each an array of per-party factor matrices.
json measurement_to_json(std::span<const ProductOperator> ops);
std::vector<ProductOperator> measurement_from_json(const json& j);

json cone_report_to_json(const ConeReport& report);
json sim_report_to_json(const SimReport& report);

struct RunManifest {
  std::string command;
  json parameters = json::object();
  std::string version;
  std::vector<std::uint64_t> seeds;
  std::string timestamp;  // ISO-8601 UTC
};

json manifest_to_json(const RunManifest& manifest);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace sepmeas::io
