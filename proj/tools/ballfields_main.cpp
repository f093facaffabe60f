// ballfields: batch experiment runner for the weighted random balls model.
//
// Subcommands: simulate, limit, converge, membership, covariation, bridge,
// report. Every run writes a manifest (config echo, seed, version, wall time)
// plus plot-ready CSVs into the output directory.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ballfields/config.hpp"
#include "ballfields/limits.hpp"
#include "ballfields/regimes.hpp"
#include "ballfields/simulate.hpp"

namespace bf = ballfields;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunContext {
  bf::ExperimentConfig cfg;
  json spec;  // raw validated config
  fs::path out;
};

std::string out_file(const RunContext& ctx, const std::string& name) {
  return (ctx.out / name).string();
}

std::vector<double> theta_grid_or(const RunContext& ctx,
                                  const std::function<double(double)>& cf_modulus) {
  if (!ctx.cfg.theta_grid.empty()) return ctx.cfg.theta_grid;
  return bf::select_theta_grid(cf_modulus);
}

void write_cf_curve(const RunContext& ctx, const std::string& name,
                    const bf::CFCurve& curve) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < curve.theta.size(); ++i)
    rows.push_back({curve.theta[i], curve.value[i].real(), curve.value[i].imag(),
                    i < curve.error.size() ? curve.error[i] : 0.0});
  bf::write_csv(out_file(ctx, name), {"theta", "re", "im", "error"}, rows);
}

void write_stable_params(const RunContext& ctx, const std::string& name,
                         const bf::StableParams& p) {
  bf::write_csv(out_file(ctx, name), {"index", "scale", "skew", "shift"},
                {{p.index, p.scale, p.skew, p.shift}});
}

double number_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw bf::ConfigError("\"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

double number(const json& j, const std::string& key) {
  if (!j.contains(key)) throw bf::ConfigError("field \"" + key + "\" is required");
  if (!j.at(key).is_number())
    throw bf::ConfigError("\"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

std::vector<double> vector_field(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).empty())
    throw bf::ConfigError("\"" + key + "\" must be a nonempty array");
  std::vector<double> out;
  for (const auto& e : j.at(key)) {
    if (!e.is_number()) throw bf::ConfigError("\"" + key + "\" must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

const json& object_field(const json& j, const std::string& key) {
  if (!j.contains(key)) throw bf::ConfigError("field \"" + key + "\" is required");
  return j.at(key);
}

// --- simulate: one ball configuration plus the normalized replicate vector ---
void cmd_simulate(const RunContext& ctx) {
  const bf::Measure mu = bf::parse_measure(object_field(ctx.spec, "measure"),
                                           ctx.cfg.dimension);
  const bf::WeightLaw g = bf::parse_weight_law(object_field(ctx.spec, "weight_law"));
  const bf::RadiusLaw f = bf::parse_radius_law(object_field(ctx.spec, "radius_law"));
  const double rho = number_or(ctx.spec, "rho", 1.0);
  const double lambda = number(ctx.spec, "lambda");
  const double n = number_or(ctx.spec, "n", 1.0);
  const bf::RadiusLaw f_rho = f.rescaled(rho);
  const double delta = ctx.spec.contains("delta")
                           ? number(ctx.spec, "delta")
                           : bf::choose_truncation(lambda, f_rho, g, mu, 1e-3 * n);

  bf::RngStream rng(ctx.cfg.seed, 0);
  const bf::BallSample sample =
      bf::sample_balls(lambda, f_rho, g, mu.support(), delta, rng, 0);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    std::vector<double> row;
    for (int k = 0; k < ctx.cfg.dimension; ++k) row.push_back(sample.x[i][k]);
    row.push_back(sample.r[i]);
    row.push_back(sample.m[i]);
    rows.push_back(std::move(row));
  }
  std::vector<std::string> header;
  for (int k = 0; k < ctx.cfg.dimension; ++k) header.push_back("x" + std::to_string(k));
  header.push_back("r");
  header.push_back("m");
  bf::write_csv(out_file(ctx, "sample.csv"), header, rows);

  bf::ReplicateOptions ro;
  ro.count = ctx.cfg.replicates;
  ro.seed = ctx.cfg.seed;
  ro.threads = ctx.cfg.threads;
  ro.fast_path_threshold = ctx.cfg.fast_path_threshold;
  const std::vector<double> reps = bf::replicate(mu, lambda, f_rho, g, n, delta, ro);
  std::vector<std::vector<double>> rep_rows;
  for (std::size_t i = 0; i < reps.size(); ++i)
    rep_rows.push_back({static_cast<double>(i), reps[i]});
  bf::write_csv(out_file(ctx, "replicates.csv"), {"index", "value"}, rep_rows);
}

// --- limit: CF curve and StableParams of a declared limit law ---
void cmd_limit(const RunContext& ctx) {
  const json& lim = object_field(ctx.spec, "limit");
  if (!lim.contains("type") || !lim.at("type").is_string())
    throw bf::ConfigError("\"limit.type\" must be a string");
  const std::string type = lim.at("type").get<std::string>();
  const bf::Measure mu = bf::parse_measure(object_field(ctx.spec, "measure"),
                                           ctx.cfg.dimension);
  const bf::WeightLaw g = bf::parse_weight_law(object_field(ctx.spec, "weight_law"));

  if (type == "j") {
    const bf::RadiusLaw f = bf::parse_radius_law(object_field(ctx.spec, "radius_law"));
    const double a = number(lim, "a");
    auto theta = theta_grid_or(ctx, [&](double t) {
      return std::exp(bf::j_exponent(mu, a, g, f.beta(), f.c_beta(), t).real());
    });
    write_cf_curve(ctx, "cf.csv", bf::j_cf(mu, a, g, f.beta(), f.c_beta(), theta));
    return;
  }

  bf::StableParams p;
  if (type == "z_alpha") {
    const bf::RadiusLaw f = bf::parse_radius_law(object_field(ctx.spec, "radius_law"));
    const bf::StableParams& att = g.attracting();
    p = bf::z_alpha_params(mu, att.index, f.beta(), f.c_beta(), att.scale, att.skew);
  } else if (type == "z_tilde_gamma") {
    const bf::RadiusLaw f = bf::parse_radius_law(object_field(ctx.spec, "radius_law"));
    p = bf::z_tilde_gamma_params(mu, f.beta(), g.alpha(), f.c_beta(), g);
  } else if (type == "z_tilde_alpha") {
    const bf::RadiusLaw f = bf::parse_radius_law(object_field(ctx.spec, "radius_law"));
    p = bf::z_tilde_alpha_params(mu, f, g);
  } else {
    throw bf::ConfigError("unknown limit type \"" + type + "\"");
  }
  write_stable_params(ctx, "stable_params.csv", p);
  auto theta =
      theta_grid_or(ctx, [&](double t) { return std::abs(bf::stable_cf_value(p, t)); });
  write_cf_curve(ctx, "cf.csv", bf::stable_cf(p, theta));
}

// --- converge: full convergence ladder against the classified limit ---
void cmd_converge(const RunContext& ctx) {
  const bf::Measure mu = bf::parse_measure(object_field(ctx.spec, "measure"),
                                           ctx.cfg.dimension);
  const bf::WeightLaw g = bf::parse_weight_law(object_field(ctx.spec, "weight_law"));
  const bf::RadiusLaw f = bf::parse_radius_law(object_field(ctx.spec, "radius_law"));
  const bf::RegimeSpec spec = bf::parse_regime(object_field(ctx.spec, "regime"),
                                               ctx.cfg.dimension, g.alpha(), f.beta());
  bf::ConvergenceOptions opts;
  opts.replicates = ctx.cfg.replicates;
  opts.seed = ctx.cfg.seed;
  opts.threads = ctx.cfg.threads;
  opts.threshold = ctx.cfg.threshold;
  opts.fast_path_threshold = ctx.cfg.fast_path_threshold;
  opts.theta_grid = ctx.cfg.theta_grid;
  const bf::ConvergenceReport rep = bf::run_convergence(spec, mu, f, g, opts);

  std::vector<std::vector<double>> ladder_rows;
  for (const auto& row : rep.rows)
    ladder_rows.push_back({row.rho, row.lambda, row.n, row.delta, row.truncation,
                           row.distance, row.theta_at});
  bf::write_csv(out_file(ctx, "convergence.csv"),
                {"rho", "lambda", "n", "delta", "truncation_bound", "distance",
                 "theta_at"},
                ladder_rows);

  std::vector<std::vector<double>> diff_rows;
  for (const auto& row : rep.rows)
    for (std::size_t j = 0; j < rep.limit.theta.size(); ++j)
      diff_rows.push_back(
          {row.rho, rep.limit.theta[j], row.abs_diff[j], rep.replicate_radius});
  bf::write_csv(out_file(ctx, "cf_diff.csv"), {"rho", "theta", "abs_diff", "radius"},
                diff_rows);

  write_cf_curve(ctx, "limit_cf.csv", rep.limit);
  if (rep.cls.label != bf::RegimeLabel::Intermediate)
    write_stable_params(ctx, "stable_params.csv", rep.limit_params);

  for (std::size_t li = 0; li < rep.samples.size(); ++li) {
    char name[48];
    std::snprintf(name, sizeof(name), "replicates_%02zu.csv", li);
    std::vector<std::vector<double>> rep_rows;
    for (std::size_t i = 0; i < rep.samples[li].size(); ++i)
      rep_rows.push_back({static_cast<double>(i), rep.samples[li][i]});
    bf::write_csv(out_file(ctx, name), {"index", "value"}, rep_rows);
  }

  bf::write_csv(out_file(ctx, "summary.csv"),
                {"final_distance", "threshold", "final_pass", "monotone_pass",
                 "replicate_radius"},
                {{rep.rows.empty() ? 0.0 : rep.rows.back().distance, rep.threshold,
                  rep.final_pass ? 1.0 : 0.0, rep.monotone_pass ? 1.0 : 0.0,
                  rep.replicate_radius}});
}

// --- membership: gamma(r) growth-exponent probe ---
void cmd_membership(const RunContext& ctx) {
  const bf::Measure mu = bf::parse_measure(object_field(ctx.spec, "measure"),
                                           ctx.cfg.dimension);
  const double alpha = number(ctx.spec, "alpha");
  const double beta = number(ctx.spec, "beta");
  std::vector<double> r_grid;
  if (ctx.spec.contains("r_grid")) {
    r_grid = vector_field(ctx.spec, "r_grid");
  } else {
    for (int i = 0; i <= 24; ++i) r_grid.push_back(std::pow(10.0, -3.0 + 0.25 * i));
  }
  const bf::MembershipReport rep = bf::membership_probe(mu, alpha, beta, r_grid);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.r_grid.size(); ++i)
    rows.push_back({rep.r_grid[i], rep.gamma_values[i]});
  bf::write_csv(out_file(ctx, "gamma.csv"), {"r", "gamma"}, rows);
  bf::write_csv(out_file(ctx, "summary.csv"),
                {"q_hat", "p_hat", "small_r_ok", "large_r_ok"},
                {{rep.q_hat, rep.p_hat, rep.small_r_ok ? 1.0 : 0.0,
                  rep.large_r_ok ? 1.0 : 0.0}});
}

// --- covariation: [mu1, mu2]_alpha under the stable-dependent limit ---
void cmd_covariation(const RunContext& ctx) {
  const bf::Measure mu1 = bf::parse_measure(object_field(ctx.spec, "measure"),
                                            ctx.cfg.dimension);
  const bf::Measure mu2 = bf::parse_measure(object_field(ctx.spec, "measure2"),
                                            ctx.cfg.dimension);
  const bf::WeightLaw g = bf::parse_weight_law(object_field(ctx.spec, "weight_law"));
  const bf::RadiusLaw f = bf::parse_radius_law(object_field(ctx.spec, "radius_law"));
  const bf::StableParams& att = g.attracting();
  const double value =
      bf::covariation(mu1, mu2, att.index, f.beta(), f.c_beta(), att.scale);
  bf::write_csv(out_file(ctx, "covariation.csv"),
                {"alpha", "beta", "covariation"}, {{att.index, f.beta(), value}});
}

// --- bridge: per-a CF distance of a^{-(d-beta)/alpha} J(mu_a) to Z_alpha ---
void cmd_bridge(const RunContext& ctx) {
  const bf::Measure mu = bf::parse_measure(object_field(ctx.spec, "measure"),
                                           ctx.cfg.dimension);
  const bf::WeightLaw g = bf::parse_weight_law(object_field(ctx.spec, "weight_law"));
  const bf::RadiusLaw f = bf::parse_radius_law(object_field(ctx.spec, "radius_law"));
  const std::vector<double> a_ladder = vector_field(ctx.spec, "a_ladder");
  const bf::StableParams& att = g.attracting();
  const bf::StableParams zp =
      bf::z_alpha_params(mu, att.index, f.beta(), f.c_beta(), att.scale, att.skew);
  auto theta =
      theta_grid_or(ctx, [&](double t) { return std::abs(bf::stable_cf_value(zp, t)); });
  const std::vector<double> dist =
      bf::zj_bridge(mu, g, f.beta(), f.c_beta(), a_ladder, theta);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < a_ladder.size(); ++i)
    rows.push_back({a_ladder[i], dist[i]});
  bf::write_csv(out_file(ctx, "bridge.csv"), {"a", "distance"}, rows);
}

// --- report: merge CSVs sharing one header and summarize row counts ---
void cmd_report(const RunContext& ctx) {
  if (!ctx.spec.contains("inputs") || !ctx.spec.at("inputs").is_array() ||
      ctx.spec.at("inputs").empty())
    throw bf::ConfigError("\"inputs\" must be a nonempty array");
  std::ofstream merged(out_file(ctx, "report.csv"));
  if (!merged) throw std::runtime_error("cannot write report.csv");
  std::string common_header;
  std::vector<std::vector<double>> summary_rows;
  std::size_t source = 0;
  for (const auto& entry : ctx.spec.at("inputs")) {
    if (!entry.is_string()) throw bf::ConfigError("\"inputs\" must contain file paths");
    const std::string path = entry.get<std::string>();
    std::ifstream in(path);
    if (!in) throw bf::ConfigError("cannot open input CSV " + path);
    std::string header;
    if (!std::getline(in, header)) throw bf::ConfigError("input CSV is empty: " + path);
    if (common_header.empty()) {
      common_header = header;
      merged << common_header << ",source\n";
    } else if (header != common_header) {
      throw bf::ConfigError("input CSV headers differ: " + path);
    }
    std::size_t count = 0;
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      merged << line << "," << source << "\n";
      ++count;
    }
    summary_rows.push_back({static_cast<double>(source), static_cast<double>(count)});
    ++source;
  }
  merged.close();
  bf::write_csv(out_file(ctx, "summary.csv"), {"source", "rows"}, summary_rows);
}

int dispatch(const std::string& sub, const RunContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(ctx.out);
  if (sub == "simulate") cmd_simulate(ctx);
  else if (sub == "limit") cmd_limit(ctx);
  else if (sub == "converge") cmd_converge(ctx);
  else if (sub == "membership") cmd_membership(ctx);
  else if (sub == "covariation") cmd_covariation(ctx);
  else if (sub == "bridge") cmd_bridge(ctx);
  else if (sub == "report") cmd_report(ctx);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bf::write_manifest(ctx.out.string(), ctx.cfg.raw, ctx.cfg.seed, wall, sub);
  return 0;
}

void emit_error(const std::string& type, const std::string& message) {
  json err;
  err["error"]["type"] = type;
  err["error"]["message"] = message;
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted random balls: simulation and limit verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  long long seed_override = -1;
  int threads_override = 0;

  const std::vector<std::string> names = {"simulate",   "limit",  "converge",
                                          "membership", "covariation", "bridge",
                                          "report"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--threads", threads_override, "cap worker threads");
    sub->add_option("--out", out_override, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    emit_error("config", e.what());
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    RunContext ctx;
    ctx.spec = bf::load_json(config_path);
    ctx.cfg = bf::parse_config(ctx.spec);
    if (seed_override >= 0) {
      ctx.cfg.seed = static_cast<std::uint64_t>(seed_override);
      ctx.cfg.raw["seed"] = ctx.cfg.seed;
    }
    if (threads_override > 0) {
      ctx.cfg.threads = threads_override;
    } else if (!ctx.spec.contains("threads")) {
      if (const char* env = std::getenv("BALLFIELDS_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) ctx.cfg.threads = t;
      }
    }
    ctx.cfg.raw["threads"] = ctx.cfg.threads;
    if (!out_override.empty()) ctx.cfg.output = out_override;
    ctx.cfg.raw["output"] = ctx.cfg.output;
    ctx.out = ctx.cfg.output;
    return dispatch(sub, ctx);
  } catch (const bf::ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const bf::ResourceGuardError& e) {
    emit_error("resource_guard", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("numeric", e.what());
    return 3;
  }
}
