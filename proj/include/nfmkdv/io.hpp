#pragma once

// JSON and CSV persistence. Floating-point values are written with 17
// significant digits so that files round-trip bit-exactly.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "nfmkdv/solver.hpp"
#include "nfmkdv/spectral_state.hpp"

namespace nfmkdv {

using Json = nlohmann::ordered_json;

std::string format_double(double x);

// {"K": int, "t": float, "re": [...], "im": [...]} ordered k = -K ... K.
Json state_to_json(const SpectralState& v);
SpectralState state_from_json(const Json& j);

Json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const Json& j);

// Field names mirror SolverConfig. Missing fields keep their defaults;
// unknown fields are rejected.
Json config_to_json(const SolverConfig& cfg);
SolverConfig config_from_json(const Json& j);

// FNV-1a (64 bit) over the compact dump of j, as 16 hex digits.
std::string config_hash(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// Header "# config_hash=<hash>" then rows k,re,im.
void write_state_csv(std::ostream& out, const SpectralState& v, const std::string& hash);

// Result table. Cells are JSON scalars; meta holds scalar results and goes
// into "# key=value" comment lines of the CSV form.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json meta = Json::object();
};

void write_table_csv(std::ostream& out, const Table& table, const std::string& hash);
Json table_to_json(const Table& table, const std::string& hash);

// Rows t,H0,H1/2,Hs,mass.
Table norm_series_table(const Trajectory& traj, double s);

}  // namespace nfmkdv
