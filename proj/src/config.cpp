#include "ballfields/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace ballfields {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError("field \"" + key + "\" is required");
  return j.at(key);
}

double get_number(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw ConfigError("\"" + key + "\" must be a number");
  return v.get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError("\"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

std::vector<double> get_vector(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_array() || v.empty()) throw ConfigError("\"" + key + "\" must be a nonempty array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError("\"" + key + "\" must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Point get_point(const json& j, const std::string& key, int dim) {
  const auto v = get_vector(j, key);
  if (static_cast<int>(v.size()) != dim)
    throw ConfigError("\"" + key + "\" must have exactly " + std::to_string(dim) +
                      " coordinates");
  Point p{};
  for (int i = 0; i < dim; ++i) p[i] = v[i];
  return p;
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = require(j, key);
  if (!v.is_string()) throw ConfigError("\"" + key + "\" must be a string");
  return v.get<std::string>();
}

Measure parse_base_measure(const json& j, int dim) {
  const std::string type = get_string(j, "type");
  if (type == "atomic") {
    const json& atoms = require(j, "atoms");
    if (!atoms.is_array() || atoms.empty())
      throw ConfigError("\"atoms\" must be a nonempty array");
    std::vector<std::pair<Point, double>> list;
    for (const auto& a : atoms)
      list.emplace_back(get_point(a, "point", dim), get_number(a, "weight"));
    return Measure::atomic(dim, std::move(list));
  }
  if (type == "uniform_box") {
    Box box;
    box.dim = dim;
    box.lo = get_point(j, "lo", dim);
    box.hi = get_point(j, "hi", dim);
    return Measure::uniform_box(box, get_number_or(j, "density", 1.0));
  }
  if (type == "interval_lebesgue") {
    if (dim != 1) throw ConfigError("interval_lebesgue requires dimension 1");
    return Measure::interval_lebesgue(get_number(j, "t"));
  }
  if (type == "takenaka") return Measure::takenaka(dim, get_point(j, "z", dim));
  if (type == "combination") {
    const json& terms = require(j, "terms");
    if (!terms.is_array() || terms.empty())
      throw ConfigError("\"terms\" must be a nonempty array");
    std::vector<std::pair<double, Measure>> list;
    for (const auto& t : terms)
      list.emplace_back(get_number(t, "coefficient"),
                        parse_measure(require(t, "measure"), dim));
    return Measure::combination(list);
  }
  throw ConfigError("unknown measure type \"" + type + "\"");
}

}  // namespace

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return j;
}

Measure parse_measure(const json& j, int dim) {
  try {
    Measure m = parse_base_measure(j, dim);
    if (j.contains("dilate")) m = m.dilated(get_number(j, "dilate"));
    if (j.contains("rotate")) {
      const json& r = j.at("rotate");
      if (dim == 1) {
        m = m.rotated(Rotation::reflection());
      } else {
        const auto plane = get_vector(r, "plane");
        if (plane.size() != 2) throw ConfigError("\"plane\" must list two axes");
        m = m.rotated(Rotation::plane(static_cast<int>(plane[0]),
                                      static_cast<int>(plane[1]),
                                      get_number(r, "angle")));
      }
    }
    if (j.contains("translate")) m = m.translated(get_point(j, "translate", dim));
    return m;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

WeightLaw parse_weight_law(const json& j) {
  const std::string type = get_string(j, "type");
  try {
    if (type == "point_mass") return WeightLaw::point_mass(get_number(j, "m0"));
    if (type == "gaussian")
      return WeightLaw::gaussian(get_number(j, "mean"), get_number(j, "variance"));
    if (type == "exact_stable")
      return WeightLaw::exact_stable(get_number(j, "alpha"), get_number(j, "sigma"),
                                     get_number(j, "b"), get_number_or(j, "tau", 0.0));
    if (type == "two_sided_pareto")
      return WeightLaw::two_sided_pareto(get_number(j, "alpha"), get_number(j, "scale"),
                                         get_number(j, "right_fraction"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown weight law type \"" + type + "\"");
}

RadiusLaw parse_radius_law(const json& j) {
  const std::string type = get_string(j, "type");
  try {
    if (type == "pareto_tail")
      return RadiusLaw::pareto_tail(get_number(j, "beta"), get_number(j, "r_min"));
    if (type == "small_power")
      return RadiusLaw::small_power(get_number(j, "beta"), get_number(j, "r_max"),
                                    get_number_or(j, "c_beta", 1.0));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown radius law type \"" + type + "\"");
}

RegimeSpec parse_regime(const json& j, int dim, double alpha, double beta) {
  RegimeSpec spec;
  spec.d = dim;
  spec.alpha = alpha;
  spec.beta = beta;
  const double eps = get_number(j, "epsilon");
  if (eps != -1.0 && eps != 1.0) throw ConfigError("\"epsilon\" must be -1 or +1");
  spec.epsilon = static_cast<int>(eps);
  spec.lambda0 = get_number(j, "lambda0");
  if (!(spec.lambda0 > 0.0)) throw ConfigError("lambda0 must be positive");
  spec.theta_lambda = get_number(j, "theta_lambda");
  if (!(spec.theta_lambda >= 0.0)) throw ConfigError("theta_lambda must be nonnegative");
  if (j.contains("rho_ladder")) spec.rho_ladder = get_vector(j, "rho_ladder");
  for (double r : spec.rho_ladder)
    if (!(r > 0.0)) throw ConfigError("rho_ladder entries must be positive");
  return spec;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  ExperimentConfig c;
  const double seed = get_number_or(j, "seed", 0.0);
  if (seed < 0.0) throw ConfigError("seed must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.dimension = static_cast<int>(get_number_or(j, "dimension", 1.0));
  if (c.dimension < 1 || c.dimension > kMaxDim)
    throw ConfigError("dimension must lie in {1,2,3}");
  c.threads = static_cast<int>(get_number_or(j, "threads", 1.0));
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  const double reps = get_number_or(j, "replicates", 1000.0);
  if (!(reps >= 1.0)) throw ConfigError("replicates must be at least 1");
  c.replicates = static_cast<std::size_t>(reps);
  c.threshold = get_number_or(j, "threshold", 0.05);
  if (!(c.threshold > 0.0)) throw ConfigError("threshold must be positive");
  c.fast_path_threshold = get_number_or(j, "fast_path_threshold", 1e4);
  if (j.contains("output")) c.output = get_string(j, "output");
  if (j.contains("theta_grid")) {
    const json& tg = j.at("theta_grid");
    if (tg.is_array()) {
      c.theta_grid = get_vector(j, "theta_grid");
    } else {
      const int pts = static_cast<int>(get_number_or(tg, "points", 21.0));
      const double star = get_number(tg, "theta_star");
      if (!(star > 0.0)) throw ConfigError("theta_star must be positive");
      if (pts < 3 || pts % 2 == 0)
        throw ConfigError("theta_grid points must be odd and at least 3");
      const int half = pts / 2;
      for (int i = 0; i < pts; ++i)
        c.theta_grid.push_back(star * static_cast<double>(i - half) /
                               static_cast<double>(half));
      c.theta_grid[half] = 0.0;
    }
  }
  // Echo with every default explicit.
  c.raw = j;
  c.raw["seed"] = c.seed;
  c.raw["dimension"] = c.dimension;
  c.raw["threads"] = c.threads;
  c.raw["replicates"] = c.replicates;
  c.raw["threshold"] = c.threshold;
  c.raw["fast_path_threshold"] = c.fast_path_threshold;
  c.raw["output"] = c.output;
  return c;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

void write_manifest(const std::string& dir, const nlohmann::json& config_echo,
                    std::uint64_t seed, double wall_seconds,
                    const std::string& subcommand) {
  nlohmann::json m;
  m["config"] = config_echo;
  m["seed"] = seed;
  m["subcommand"] = subcommand;
  m["version"] = "0.1.0";
  m["wall_time_seconds"] = wall_seconds;
  std::ofstream out(std::filesystem::path(dir) / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << m.dump(2) << "\n";
}

}  // namespace ballfields
