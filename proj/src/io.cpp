#include "nfmkdv/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include "nfmkdv/errors.hpp"

namespace nfmkdv {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json state_to_json(const SpectralState& v) {
  Json re = Json::array(), im = Json::array();
  for (const auto& c : v.coefficients()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  return Json{{"K", v.cutoff()}, {"t", v.time()}, {"re", re}, {"im", im}};
}

SpectralState state_from_json(const Json& j) {
  try {
    const int K = j.at("K").get<int>();
    if (K < 0) throw ValidationError("state K must be nonnegative");
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const auto size = static_cast<std::size_t>(2 * K + 1);
    if (re.size() != size || im.size() != size) {
      throw ValidationError("state arrays must have 2K+1 = " + std::to_string(size) + " entries");
    }
    SpectralState v(K, j.value("t", 0.0));
    for (int k = -K; k <= K; ++k) {
      const auto idx = static_cast<std::size_t>(k + K);
      v[k] = Complex(re[idx].get<double>(), im[idx].get<double>());
    }
    if (!v.is_finite()) throw ValidationError("state contains non-finite coefficients");
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed state JSON: ") + e.what());
  }
}

Json trajectory_to_json(const Trajectory& traj) {
  Json arr = Json::array();
  for (const auto& v : traj.states) arr.push_back(state_to_json(v));
  return arr;
}

Trajectory trajectory_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("trajectory JSON must be an array of states");
  Trajectory traj;
  for (const auto& s : j) traj.states.push_back(state_from_json(s));
  return traj;
}

Json config_to_json(const SolverConfig& c) {
  return Json{{"K", c.K},         {"s", c.s},
              {"sigma", c.sigma}, {"dt", c.dt},
              {"T", c.T},         {"n", c.n},
              {"grid_m", c.grid_m}, {"picard_max", c.picard_max},
              {"tol", c.tol},     {"C_cal", c.C_cal},
              {"alpha_cal", c.alpha_cal}};
}

SolverConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("config JSON must be an object");
  static const std::set<std::string> known = {"K", "s", "sigma", "dt", "T", "n", "grid_m",
                                              "picard_max", "tol", "C_cal", "alpha_cal"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ValidationError("unknown config field '" + item.key() + "'");
  }
  SolverConfig c;
  try {
    c.K = j.value("K", c.K);
    c.s = j.value("s", c.s);
    c.sigma = j.value("sigma", c.sigma);
    c.dt = j.value("dt", c.dt);
    c.T = j.value("T", c.T);
    c.n = j.value("n", c.n);
    c.grid_m = j.value("grid_m", c.grid_m);
    c.picard_max = j.value("picard_max", c.picard_max);
    c.tol = j.value("tol", c.tol);
    c.C_cal = j.value("C_cal", c.C_cal);
    c.alpha_cal = j.value("alpha_cal", c.alpha_cal);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed config field: ") + e.what());
  }
  return c;
}

std::string config_hash(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void write_state_csv(std::ostream& out, const SpectralState& v, const std::string& hash) {
  out << "# config_hash=" << hash << "\nk,re,im\n";
  for (int k = -v.cutoff(); k <= v.cutoff(); ++k) {
    out << k << ',' << format_double(v[k].real()) << ',' << format_double(v[k].imag()) << '\n';
  }
}

namespace {

std::string cell_text(const Json& c) {
  if (c.is_number_float()) return format_double(c.get<double>());
  if (c.is_string()) return c.get<std::string>();
  return c.dump();
}

}  // namespace

void write_table_csv(std::ostream& out, const Table& table, const std::string& hash) {
  out << "# config_hash=" << hash << '\n';
  for (const auto& [key, value] : table.meta.items()) out << "# " << key << '=' << cell_text(value) << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

Json table_to_json(const Table& table, const std::string& hash) {
  Json j = {{"config_hash", hash}, {"meta", table.meta}, {"columns", table.columns}, {"rows", Json::array()}};
  for (const auto& row : table.rows) j["rows"].push_back(row);
  return j;
}

Table norm_series_table(const Trajectory& traj, double s) {
  Table t;
  t.columns = {"t", "H0", "H1/2", "Hs", "mass"};
  for (const auto& v : traj.states) {
    t.rows.push_back({v.time(), sobolev_norm(v, 0.0), sobolev_norm(v, 0.5), sobolev_norm(v, s), l2_mass(v)});
  }
  return t;
}

}  // namespace nfmkdv
