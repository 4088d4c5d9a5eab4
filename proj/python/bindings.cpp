#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "privopt/condition.hpp"
#include "privopt/experiments.hpp"
#include "privopt/mechanism.hpp"
#include "privopt/report.hpp"
#include "privopt/solver.hpp"

namespace py = pybind11;
using namespace privopt;

namespace {

ConstrainedProblem make_lp(const Vector& c, const std::string& sense,
                           const Matrix& A, const Vector& b,
                           const std::vector<bool>& nonneg) {
  ConstrainedProblem p;
  if (sense != "max" && sense != "min")
    throw std::invalid_argument("sense must be 'max' or 'min'");
  p.objective = LinearObjective{c, sense == "max" ? Sense::Maximize : Sense::Minimize};
  p.constraints = {A, b};
  p.nonneg = nonneg;
  return p;
}

ConstrainedProblem make_qp(const Matrix& Q, const Vector& c, const Matrix& A,
                           const Vector& b, const std::vector<bool>& nonneg) {
  ConstrainedProblem p;
  p.objective = QuadraticObjective{Q, c};
  p.constraints = {A, b};
  p.nonneg = nonneg;
  return p;
}

SensitivityModel make_sens(double delta_sens, const Vector& floors,
                           const std::vector<bool>& private_rows) {
  SensitivityModel s;
  s.delta_sens = delta_sens;
  s.floors = floors;
  s.private_rows = private_rows;
  return s;
}

NormIndex norm_from_string(const std::string& p) {
  if (p == "1") return NormIndex::One;
  if (p == "2") return NormIndex::Two;
  if (p == "inf") return NormIndex::Inf;
  throw std::invalid_argument("norm must be '1', '2' or 'inf'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "differentially private linearly-constrained optimization";

  py::register_exception<InfeasibleFloorSystem>(m, "InfeasibleFloorSystemError");
  py::register_exception<NoPureDpMechanism>(m, "NoPureDpMechanismError");
  py::register_exception<SolverFailure>(m, "SolverFailureError");
  py::register_exception<NotStronglyStable>(m, "NotStronglyStableError");
  py::register_exception<DimensionTooLarge>(m, "DimensionTooLargeError");

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_u64", &Rng::next_u64)
      .def("next_unit", &Rng::next_unit)
      .def("split", &Rng::split, py::arg("stream"))
      .def_property_readonly("seed", &Rng::seed);

  py::class_<PrivacyParams>(m, "PrivacyParams")
      .def(py::init<double, double>(), py::arg("epsilon"), py::arg("delta"))
      .def_readonly("epsilon", &PrivacyParams::epsilon)
      .def_readonly("delta", &PrivacyParams::delta);

  py::class_<TruncLaplace>(m, "TruncLaplace")
      .def(py::init<double, double>(), py::arg("scale"), py::arg("half_width"))
      .def_property_readonly("scale", &TruncLaplace::scale)
      .def_property_readonly("half_width", &TruncLaplace::half_width)
      .def("pdf", &TruncLaplace::pdf, py::arg("eta"))
      .def("cdf", &TruncLaplace::cdf, py::arg("eta"))
      .def("inverse_cdf", &TruncLaplace::inverse_cdf, py::arg("u"))
      .def("sample", &TruncLaplace::sample, py::arg("rng"))
      .def("tail_mass_beyond", &TruncLaplace::tail_mass_beyond, py::arg("delta_sens"));

  m.def("shift_width", &shift_width, py::arg("delta_sens"), py::arg("privacy"),
        py::arg("m"));
  m.def("laplace_sample", &laplace_sample, py::arg("scale"), py::arg("rng"));

  py::class_<ConstrainedProblem>(m, "ConstrainedProblem")
      .def_property_readonly("num_vars", &ConstrainedProblem::num_vars)
      .def_property_readonly("is_linear", &ConstrainedProblem::is_linear)
      .def_property_readonly("A",
                             [](const ConstrainedProblem& p) { return p.constraints.A; })
      .def_property_readonly("b",
                             [](const ConstrainedProblem& p) { return p.constraints.b; })
      .def("objective_value", &ConstrainedProblem::objective_value, py::arg("x"));

  m.def("linear_problem", &make_lp, py::arg("c"), py::arg("sense"), py::arg("A"),
        py::arg("b"), py::arg("nonneg") = std::vector<bool>{});
  m.def("quadratic_problem", &make_qp, py::arg("Q"), py::arg("c"), py::arg("A"),
        py::arg("b"), py::arg("nonneg") = std::vector<bool>{});

  py::class_<SensitivityModel>(m, "SensitivityModel")
      .def_readonly("delta_sens", &SensitivityModel::delta_sens)
      .def_readonly("floors", &SensitivityModel::floors)
      .def("num_private", &SensitivityModel::num_private);
  m.def("sensitivity_model", &make_sens, py::arg("delta_sens"), py::arg("floors"),
        py::arg("private_rows") = std::vector<bool>{});

  py::class_<Solution>(m, "Solution")
      .def_property_readonly("status",
                             [](const Solution& s) { return to_string(s.status); })
      .def_readonly("x", &Solution::x)
      .def_readonly("objective", &Solution::objective)
      .def_readonly("iterations", &Solution::iterations);

  py::class_<PrivateSolution>(m, "PrivateSolution")
      .def_readonly("b_bar", &PrivateSolution::b_bar)
      .def_readonly("x", &PrivateSolution::x)
      .def_readonly("objective", &PrivateSolution::objective)
      .def_readonly("seed", &PrivateSolution::seed)
      .def_readonly("feasible_wrt_original", &PrivateSolution::feasible_wrt_original);

  m.def("solve_lp", [](const ConstrainedProblem& p) { return solve_lp(p); },
        py::arg("problem"));
  m.def("solve_qp", [](const ConstrainedProblem& p) { return solve_qp(p); },
        py::arg("problem"));
  m.def("enumerate_vertices",
        [](const Matrix& A, const Vector& b) { return enumerate_vertices(A, b); },
        py::arg("A"), py::arg("b"));

  m.def("perturb_constraints", &perturb_constraints, py::arg("b"), py::arg("sens"),
        py::arg("privacy"), py::arg("rng"));
  m.def("baseline_laplace_perturb", &baseline_laplace_perturb, py::arg("b"),
        py::arg("sens"), py::arg("privacy"), py::arg("floor_at_zero"), py::arg("rng"));
  m.def(
      "solve_private",
      [](const ConstrainedProblem& p, const SensitivityModel& s,
         const PrivacyParams& privacy, Rng& rng, bool check_floors) {
        PrivateSolveOptions opts;
        opts.check_floors = check_floors;
        return solve_private(p, s, privacy, rng, opts);
      },
      py::arg("problem"), py::arg("sens"), py::arg("privacy"), py::arg("rng"),
      py::arg("check_floors") = true);
  m.def("solve_pure_dp",
        [](const ConstrainedProblem& p, const Vector& floors) {
          return solve_pure_dp(p, floors);
        },
        py::arg("problem"), py::arg("floors"));
  m.def("audit_feasibility",
        [](const Matrix& A, const Vector& x, const Vector& b, double tol) {
          auto rep = audit_feasibility(A, x, b, tol);
          return py::make_tuple(rep.violated, rep.max_violation);
        },
        py::arg("A"), py::arg("x"), py::arg("b"), py::arg("tol") = 1e-7);

  py::class_<DpAuditReport>(m, "DpAuditReport")
      .def_readonly("delta_hat", &DpAuditReport::delta_hat)
      .def_readonly("slack", &DpAuditReport::slack)
      .def_readonly("max_overlap_ratio", &DpAuditReport::max_overlap_ratio)
      .def_readonly("max_overlap_ratio_normed", &DpAuditReport::max_overlap_ratio_normed);
  m.def(
      "empirical_dp_check",
      [](const std::string& mechanism, double b, double b_prime,
         const PrivacyParams& privacy, int n_samples, int n_bins, double delta_sens,
         std::uint64_t seed) {
        double s = shift_width(delta_sens, privacy, 1);
        ScalarMechanism mech;
        if (mechanism == "truncated") {
          TruncLaplace d(delta_sens / privacy.epsilon, s);
          mech = [d, s](double v, Rng& r) { return v - s + d.sample(r); };
        } else if (mechanism == "baseline") {
          double scale = delta_sens / privacy.epsilon;
          mech = [scale, s](double v, Rng& r) {
            return std::max(v - s + laplace_sample(scale, r), 0.0);
          };
        } else {
          throw std::invalid_argument("mechanism must be 'truncated' or 'baseline'");
        }
        Rng rng(seed);
        return empirical_dp_check(mech, b, b_prime, privacy, n_samples, n_bins, rng);
      },
      py::arg("mechanism"), py::arg("b"), py::arg("b_prime"), py::arg("privacy"),
      py::arg("n_samples") = 100000, py::arg("n_bins") = 200,
      py::arg("delta_sens") = 1.0, py::arg("seed") = 0);

  m.def("cond_diag", &cond_diag, py::arg("diag"));
  m.def("cond_sigma_min", &cond_sigma_min, py::arg("A"));
  m.def("cond_strong_stable", &cond_strong_stable, py::arg("A"));
  m.def(
      "cond_bruteforce",
      [](const Matrix& A, const std::string& p, const std::string& q) {
        return cond_bruteforce(A, norm_from_string(p), norm_from_string(q));
      },
      py::arg("A"), py::arg("p"), py::arg("q"));
  m.def("upper_bound", &upper_bound, py::arg("lipschitz"), py::arg("delta_sens"),
        py::arg("privacy"), py::arg("m"), py::arg("alpha"));
  m.def("lower_bound", &lower_bound, py::arg("delta_sens"), py::arg("privacy"),
        py::arg("diag"));

  py::class_<ReturnsData>(m, "ReturnsData")
      .def_readonly("mean", &ReturnsData::mean)
      .def_readonly("covariance", &ReturnsData::covariance)
      .def_readonly("n_assets", &ReturnsData::n_assets)
      .def_readonly("n_weeks", &ReturnsData::n_weeks);
  m.def("load_returns_csv", &load_returns_csv, py::arg("path"));
  m.def("synthesize_returns", &synthesize_returns, py::arg("n_assets"),
        py::arg("n_weeks"), py::arg("seed"));

  py::class_<PortfolioInstance>(m, "PortfolioInstance")
      .def_readonly("problem", &PortfolioInstance::problem)
      .def_readonly("sens", &PortfolioInstance::sens);
  m.def("portfolio_instance", &portfolio_instance, py::arg("returns"),
        py::arg("r_min"), py::arg("budget"));

  py::class_<QualityCell>(m, "QualityCell")
      .def_readonly("epsilon", &QualityCell::epsilon)
      .def_readonly("delta", &QualityCell::delta)
      .def_readonly("mean_ratio", &QualityCell::mean_ratio)
      .def_readonly("std_error", &QualityCell::std_error)
      .def_readonly("n_feasible", &QualityCell::n_feasible)
      .def_readonly("flagged", &QualityCell::flagged);
  py::class_<QualityGrid>(m, "QualityGrid")
      .def_readonly("cells", &QualityGrid::cells)
      .def_readonly("budget", &QualityGrid::budget)
      .def_readonly("v_star", &QualityGrid::v_star)
      .def_readonly("violations", &QualityGrid::violations);

  py::class_<PortfolioSweepConfig>(m, "PortfolioSweepConfig")
      .def(py::init<>())
      .def_readwrite("n_investors", &PortfolioSweepConfig::n_investors)
      .def_readwrite("r_min", &PortfolioSweepConfig::r_min)
      .def_readwrite("epsilon_grid", &PortfolioSweepConfig::epsilon_grid)
      .def_readwrite("delta_grid", &PortfolioSweepConfig::delta_grid)
      .def_readwrite("trials", &PortfolioSweepConfig::trials)
      .def_readwrite("seed", &PortfolioSweepConfig::seed)
      .def_readwrite("redraw_budget", &PortfolioSweepConfig::redraw_budget)
      .def_readwrite("threads", &PortfolioSweepConfig::threads);
  m.def("run_portfolio_sweep", &run_portfolio_sweep, py::arg("config"),
        py::arg("returns"), py::call_guard<py::gil_scoped_release>());

  py::class_<AdSweepConfig>(m, "AdSweepConfig")
      .def(py::init<>())
      .def_readwrite("groups", &AdSweepConfig::groups)
      .def_readwrite("advertisers", &AdSweepConfig::advertisers)
      .def_readwrite("impressions_per_group", &AdSweepConfig::impressions_per_group)
      .def_readwrite("budget_center", &AdSweepConfig::budget_center)
      .def_readwrite("delta_sens", &AdSweepConfig::delta_sens)
      .def_readwrite("zero_prob", &AdSweepConfig::zero_prob)
      .def_readwrite("delta", &AdSweepConfig::delta)
      .def_readwrite("epsilon_grid", &AdSweepConfig::epsilon_grid)
      .def_readwrite("sims", &AdSweepConfig::sims)
      .def_readwrite("seed", &AdSweepConfig::seed)
      .def_readwrite("threads", &AdSweepConfig::threads);
  py::class_<AdSweepRow>(m, "AdSweepRow")
      .def_readonly("epsilon", &AdSweepRow::epsilon)
      .def_readonly("revenue_ratio", &AdSweepRow::revenue_ratio)
      .def_readonly("revenue_ratio_se", &AdSweepRow::revenue_ratio_se)
      .def_readonly("baseline_violation_fraction",
                    &AdSweepRow::baseline_violation_fraction)
      .def_readonly("our_violation_fraction", &AdSweepRow::our_violation_fraction)
      .def_readonly("sims", &AdSweepRow::sims);
  m.def("run_advertising_sweep", &run_advertising_sweep, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<TransportInstance>(m, "TransportInstance")
      .def_readonly("problem", &TransportInstance::problem)
      .def_readonly("sens", &TransportInstance::sens);
  m.def("transportation_instance", &transportation_instance, py::arg("supplies"),
        py::arg("demands"), py::arg("costs"), py::arg("max_demands"),
        py::arg("delta_sens") = 1.0);
}
