#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "pentadot/dynamics.hpp"
#include "pentadot/encoding.hpp"
#include "pentadot/gates.hpp"
#include "pentadot/model.hpp"

namespace pentadot {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Device file: {"dots": [{"id","U","mu"[,"bz"]}...], "edges": [{"i","j","t"}...]}.
/// "bz" is written only when nonzero.
json device_to_json(const DeviceGraph& g);
DeviceGraph device_from_json(const json& j);
DeviceGraph load_device(const std::string& path);
void save_device(const std::string& path, const DeviceGraph& g);

/// {"edges": [{"i","j","dt"}...], "sites": [{"id","dmu","bz"}...]}.
json delta_to_json(const DeviceDelta& d);
DeviceDelta delta_from_json(const json& j);

/// Complex matrix as rows of [re, im] pairs.
json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const json& j);

json gate_report(const EffectiveGate& g);
json cphase_plan_json(const CPhasePlan& p);

/// Sector descriptor, nonzero coefficients as [index, re, im] triples per
/// vector, and the gauge record. Coefficients below `cutoff` are dropped.
json encoded_basis_json(const EncodedBasis& e, double cutoff = 0.0);

/// Everything needed to rerun a command. `params` holds the command's own
/// options as a JSON object (keys sorted, so dumps are stable).
struct RunConfig {
  std::string command;
  std::string device;
  json params = json::object();
  std::uint64_t seed = 20031;
  std::string output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

json run_config_to_json(const RunConfig& c);
RunConfig run_config_from_json(const json& j);

/// One-line provenance header for CSV outputs: "# pentadot-run {json}".
std::string provenance_line(const RunConfig& c);
/// Reads the RunConfig back from the first line of a CSV output or from the
/// "config" member of a JSON output.
RunConfig parse_provenance(const std::string& text);

/// Serializes with fixed formatting so equal inputs give equal bytes.
std::string dump(const json& j);

}  // namespace pentadot
