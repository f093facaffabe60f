#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ballfields/laws.hpp"
#include "ballfields/limits.hpp"
#include "ballfields/measures.hpp"
#include "ballfields/regimes.hpp"
#include "ballfields/simulate.hpp"
#include "ballfields/stats.hpp"

namespace py = pybind11;
using namespace ballfields;

namespace {

Point to_point(const std::vector<double>& v) {
  if (v.empty() || v.size() > 3)
    throw std::invalid_argument("point needs 1 to 3 coordinates");
  Point p = make_point(v[0]);
  for (std::size_t i = 1; i < v.size(); ++i) p[i] = v[i];
  return p;
}

Box to_box(const std::vector<double>& lo, const std::vector<double>& hi) {
  if (lo.size() != hi.size())
    throw std::invalid_argument("box corners need matching dimensions");
  Box b;
  b.dim = static_cast<int>(lo.size());
  b.lo = to_point(lo);
  b.hi = to_point(hi);
  return b;
}

}  // namespace

PYBIND11_MODULE(_ballfields, m) {
  m.doc() = "Weighted random balls: simulation and limit-law verification";

  py::class_<StableParams>(m, "StableParams")
      .def(py::init<>())
      .def_readwrite("index", &StableParams::index)
      .def_readwrite("scale", &StableParams::scale)
      .def_readwrite("skew", &StableParams::skew)
      .def_readwrite("shift", &StableParams::shift)
      .def("__repr__", [](const StableParams& p) {
        return "StableParams(index=" + std::to_string(p.index) +
               ", scale=" + std::to_string(p.scale) +
               ", skew=" + std::to_string(p.skew) +
               ", shift=" + std::to_string(p.shift) + ")";
      });

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream") = 0);

  py::class_<Measure>(m, "Measure")
      .def_static("atomic",
                  [](int dim,
                     const std::vector<std::pair<std::vector<double>, double>>& atoms) {
                    std::vector<std::pair<Point, double>> pts;
                    pts.reserve(atoms.size());
                    for (const auto& [x, w] : atoms) pts.emplace_back(to_point(x), w);
                    return Measure::atomic(dim, std::move(pts));
                  })
      .def_static("uniform_box",
                  [](const std::vector<double>& lo, const std::vector<double>& hi,
                     double density) {
                    return Measure::uniform_box(to_box(lo, hi), density);
                  },
                  py::arg("lo"), py::arg("hi"), py::arg("density") = 1.0)
      .def_static("interval_lebesgue", &Measure::interval_lebesgue, py::arg("t"))
      .def_static("takenaka",
                  [](int dim, const std::vector<double>& z) {
                    return Measure::takenaka(dim, to_point(z));
                  })
      .def_static("combination", &Measure::combination)
      .def("translated",
           [](const Measure& mu, const std::vector<double>& s) {
             return mu.translated(to_point(s));
           })
      .def("dilated", &Measure::dilated)
      .def("ball_mass",
           [](const Measure& mu, const std::vector<double>& x, double r) {
             return mu.ball_mass(to_point(x), r);
           })
      .def("total_mass", &Measure::total_mass)
      .def("total_variation", &Measure::total_variation)
      .def("dim", &Measure::dim);

  py::class_<WeightLaw>(m, "WeightLaw")
      .def_static("point_mass", &WeightLaw::point_mass)
      .def_static("gaussian", &WeightLaw::gaussian)
      .def_static("exact_stable", &WeightLaw::exact_stable)
      .def_static("two_sided_pareto", &WeightLaw::two_sided_pareto)
      .def("alpha", &WeightLaw::alpha)
      .def("mean", &WeightLaw::mean)
      .def("cf", &WeightLaw::cf)
      .def("psi", &WeightLaw::psi)
      .def("abs_moment", &WeightLaw::abs_moment)
      .def("signed_abs_moment", &WeightLaw::signed_abs_moment)
      .def("sample", &WeightLaw::sample)
      .def("attracting", &WeightLaw::attracting);

  py::class_<RadiusLaw>(m, "RadiusLaw")
      .def_static("pareto_tail", &RadiusLaw::pareto_tail)
      .def_static("small_power", &RadiusLaw::small_power, py::arg("beta"),
                  py::arg("r_max"), py::arg("c_beta") = 1.0)
      .def("beta", &RadiusLaw::beta)
      .def("epsilon", &RadiusLaw::epsilon)
      .def("density", &RadiusLaw::density)
      .def("moment", &RadiusLaw::moment)
      .def("rescaled", &RadiusLaw::rescaled);

  py::class_<BallSample>(m, "BallSample")
      .def_property_readonly("r", [](const BallSample& s) { return s.r; })
      .def_property_readonly("m", [](const BallSample& s) { return s.m; })
      .def_property_readonly(
          "x",
          [](const BallSample& s) {
            std::vector<std::vector<double>> out;
            out.reserve(s.x.size());
            for (const auto& p : s.x)
              out.emplace_back(p.begin(), p.begin() + s.window.dim);
            return out;
          })
      .def("__len__", &BallSample::size);

  m.def("mean_field", &mean_field);
  m.def("sample_balls",
        [](double lambda, const RadiusLaw& f, const WeightLaw& g, const Measure& mu,
           double delta, RngStream& rng) {
          return sample_balls(lambda, f, g, mu.support(), delta, rng);
        },
        py::arg("lam"), py::arg("radius_law"), py::arg("weight_law"),
        py::arg("measure"), py::arg("delta"), py::arg("rng"));
  m.def("evaluate_m", &evaluate_M);
  m.def("choose_truncation", &choose_truncation);

  py::class_<ReplicateOptions>(m, "ReplicateOptions")
      .def(py::init<>())
      .def_readwrite("count", &ReplicateOptions::count)
      .def_readwrite("seed", &ReplicateOptions::seed)
      .def_readwrite("threads", &ReplicateOptions::threads)
      .def_readwrite("fast_path_threshold", &ReplicateOptions::fast_path_threshold);
  m.def("replicate", &replicate, py::arg("measure"), py::arg("lam"),
        py::arg("radius_law"), py::arg("weight_law"), py::arg("n"), py::arg("delta"),
        py::arg("options"));

  m.def("i_const", &i_const);
  m.def("s_const", &s_const);
  m.def("stable_cf_value", &stable_cf_value);
  m.def("sample_stable", &sample_stable);
  m.def("z_alpha_params", &z_alpha_params);
  m.def("j_exponent", &j_exponent);
  m.def("zj_bridge", &zj_bridge);
  m.def("gamma_mark_skew", &gamma_mark_skew);
  m.def("z_tilde_gamma_params", &z_tilde_gamma_params);
  m.def("z_tilde_alpha_params", &z_tilde_alpha_params);
  m.def("covariation", &covariation);
  m.def("density_power_integrals", &density_power_integrals);
  m.def("select_theta_grid", &select_theta_grid, py::arg("cf_modulus"),
        py::arg("points") = 21);

  py::enum_<RegimeLabel>(m, "RegimeLabel")
      .value("StableDependent", RegimeLabel::StableDependent)
      .value("Intermediate", RegimeLabel::Intermediate)
      .value("GammaRegime", RegimeLabel::GammaRegime)
      .value("AlphaRegime", RegimeLabel::AlphaRegime)
      .value("TrivialN0", RegimeLabel::TrivialN0)
      .value("Rejected", RegimeLabel::Rejected);
  m.def("regime_name", &regime_name);

  py::class_<Classification>(m, "Classification")
      .def_readonly("label", &Classification::label)
      .def_readonly("reason", &Classification::reason)
      .def_readonly("a", &Classification::a)
      .def("lam", &Classification::lambda)
      .def("normalization", &Classification::normalization);
  m.def("classify", &classify, py::arg("d"), py::arg("alpha"), py::arg("beta"),
        py::arg("epsilon"), py::arg("theta_lambda"), py::arg("lambda0"));

  py::class_<RegimeSpec>(m, "RegimeSpec")
      .def(py::init<>())
      .def_readwrite("d", &RegimeSpec::d)
      .def_readwrite("alpha", &RegimeSpec::alpha)
      .def_readwrite("beta", &RegimeSpec::beta)
      .def_readwrite("epsilon", &RegimeSpec::epsilon)
      .def_readwrite("lambda0", &RegimeSpec::lambda0)
      .def_readwrite("theta_lambda", &RegimeSpec::theta_lambda)
      .def_readwrite("rho_ladder", &RegimeSpec::rho_ladder);

  py::class_<ConvergenceOptions>(m, "ConvergenceOptions")
      .def(py::init<>())
      .def_readwrite("replicates", &ConvergenceOptions::replicates)
      .def_readwrite("seed", &ConvergenceOptions::seed)
      .def_readwrite("threads", &ConvergenceOptions::threads)
      .def_readwrite("threshold", &ConvergenceOptions::threshold)
      .def_readwrite("fast_path_threshold", &ConvergenceOptions::fast_path_threshold)
      .def_readwrite("theta_grid", &ConvergenceOptions::theta_grid);

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("rho", &ConvergenceRow::rho)
      .def_readonly("lam", &ConvergenceRow::lambda)
      .def_readonly("n", &ConvergenceRow::n)
      .def_readonly("delta", &ConvergenceRow::delta)
      .def_readonly("distance", &ConvergenceRow::distance)
      .def_readonly("theta_at", &ConvergenceRow::theta_at);

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("cls", &ConvergenceReport::cls)
      .def_readonly("limit_params", &ConvergenceReport::limit_params)
      .def_readonly("rows", &ConvergenceReport::rows)
      .def_readonly("replicate_radius", &ConvergenceReport::replicate_radius)
      .def_readonly("final_pass", &ConvergenceReport::final_pass)
      .def_readonly("monotone_pass", &ConvergenceReport::monotone_pass);
  m.def("run_convergence", &run_convergence);

  py::class_<PowerFit>(m, "PowerFit")
      .def_readonly("slope", &PowerFit::slope)
      .def_readonly("intercept", &PowerFit::intercept)
      .def_readonly("residual", &PowerFit::residual);
  m.def("power_fit", &power_fit);

  py::class_<FbmReport>(m, "FbmReport")
      .def_readonly("t_grid", &FbmReport::t_grid)
      .def_readonly("variances", &FbmReport::variances)
      .def_readonly("fit", &FbmReport::fit);
  m.def("fbm_variance_check", &fbm_variance_check, py::arg("radius_law"),
        py::arg("weight_law"), py::arg("lambda0"), py::arg("theta_lambda"),
        py::arg("rho"), py::arg("t_grid"), py::arg("replicates"), py::arg("seed"),
        py::arg("threads") = 1, py::arg("fast_path_threshold") = 1e4);

  py::class_<MembershipReport>(m, "MembershipReport")
      .def_readonly("r_grid", &MembershipReport::r_grid)
      .def_readonly("gamma_values", &MembershipReport::gamma_values)
      .def_readonly("q_hat", &MembershipReport::q_hat)
      .def_readonly("p_hat", &MembershipReport::p_hat)
      .def_readonly("small_r_ok", &MembershipReport::small_r_ok)
      .def_readonly("large_r_ok", &MembershipReport::large_r_ok);
  m.def("membership_probe", &membership_probe);

  m.def("bek_ratios", &bek_ratios);
  m.def("truncated_moment_check",
        [](const WeightLaw& g, const std::vector<double>& x_grid,
           std::size_t n_samples, std::uint64_t seed) {
          RngStream rng(seed, 0);
          const auto rep = truncated_moment_check(g, x_grid, n_samples, rng);
          return py::make_tuple(rep.s1, rep.s2, rep.tail_abs, rep.center_sq);
        });
}
