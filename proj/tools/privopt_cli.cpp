// privopt: differentially private linearly-constrained optimization.
//
// Subcommands: perturb, solve, bounds, cond, experiment-portfolio,
// experiment-advertising, demo-transportation, audit-dp.  All numeric work
// lives in the library; this file only parses flags, moves JSON/CSV in and
// out, and maps failures onto exit codes:
//   2 usage error, 3 input parse error, 4 solver/mechanism error.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "privopt/condition.hpp"
#include "privopt/experiments.hpp"
#include "privopt/json_io.hpp"
#include "privopt/mechanism.hpp"
#include "privopt/report.hpp"

using namespace privopt;

namespace {

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw CLI::ValidationError("empty list: " + text);
  return out;
}

Vector parse_vector(const std::string& text) {
  auto vals = parse_grid(text);
  Vector v(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<int>(i)) = vals[i];
  return v;
}

// rows separated by ';', entries by ','
Matrix parse_matrix(const std::string& text) {
  std::vector<Vector> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    if (row.empty()) continue;
    rows.push_back(parse_vector(row));
  }
  if (rows.empty()) throw CLI::ValidationError("empty matrix: " + text);
  Matrix m(static_cast<int>(rows.size()), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols())
      throw CLI::ValidationError("ragged matrix: " + text);
    m.row(static_cast<int>(i)) = rows[i];
  }
  return m;
}

Matrix matrix_from_file(const std::string& path) {
  Json j = load_json_file(path);
  if (j.is_object() && j.contains("A")) return matrix_from_json(j["A"]);
  return matrix_from_json(j);
}

NormIndex parse_norm(const std::string& text) {
  if (text == "1") return NormIndex::One;
  if (text == "2") return NormIndex::Two;
  if (text == "inf") return NormIndex::Inf;
  throw CLI::ValidationError("norm must be 1, 2 or inf: " + text);
}

int threads_default() {
  if (const char* env = std::getenv("PRIVOPT_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

void emit(const std::vector<ReportRow>& rows, const std::string& csv_path,
          const std::string& svg_path) {
  if (!csv_path.empty())
    write_file_atomic(csv_path, to_csv(rows));
  else
    std::cout << to_csv(rows);
  if (!svg_path.empty()) write_file_atomic(svg_path, to_svg(rows));
}

// Accepts either --sens model.json, or --floors floors.json (an array or
// {"floors": [...]}) together with --delta-sens.
SensitivityModel sensitivity_from_flags(const std::string& sens_path,
                                        const std::string& floors_path,
                                        double delta_sens) {
  if (!sens_path.empty()) return sensitivity_from_json(load_json_file(sens_path));
  if (floors_path.empty())
    throw CLI::ValidationError("provide --sens or --floors with --delta-sens");
  Json j = load_json_file(floors_path);
  SensitivityModel s;
  s.delta_sens = delta_sens;
  s.floors = vector_from_json(j.is_object() && j.contains("floors") ? j["floors"] : j);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentially private linearly-constrained optimization"};
  app.require_subcommand(1);

  // ---- perturb ----
  auto* perturb = app.add_subcommand("perturb", "release a perturbed constraint vector");
  std::string pe_b, pe_sens, pe_floors, pe_out;
  double pe_eps = 1.0, pe_delta = 0.1, pe_dsens = 1.0;
  std::uint64_t pe_seed = 0;
  bool pe_baseline = false, pe_no_floor = false;
  perturb->add_option("--b", pe_b, "constraint vector, comma separated")->required();
  perturb->add_option("--sens", pe_sens, "sensitivity model JSON file");
  perturb->add_option("--floors", pe_floors, "floors JSON file (with --delta-sens)");
  perturb->add_option("--delta-sens", pe_dsens, "sensitivity Delta (with --floors)");
  perturb->add_option("--eps", pe_eps, "privacy epsilon")->required();
  perturb->add_option("--delta", pe_delta, "privacy delta")->required();
  perturb->add_option("--seed", pe_seed, "rng seed (default 0)");
  perturb->add_option("--out", pe_out, "output JSON path (default stdout)");
  perturb->add_flag("--baseline", pe_baseline, "use the unbounded-Laplace baseline");
  perturb->add_flag("--no-floor-at-zero", pe_no_floor, "baseline: skip the max{., 0}");

  // ---- solve ----
  auto* solve_cmd = app.add_subcommand("solve", "solve a private instance");
  std::string so_problem, so_sens, so_floors, so_out;
  double so_eps = 1.0, so_delta = 0.1, so_dsens = 1.0;
  std::uint64_t so_seed = 0;
  bool so_pure = false, so_no_check = false;
  solve_cmd->add_option("--problem", so_problem, "problem JSON file")->required();
  solve_cmd->add_option("--sens", so_sens, "sensitivity model JSON file");
  solve_cmd->add_option("--floors", so_floors, "floors JSON file (with --delta-sens)");
  solve_cmd->add_option("--delta-sens", so_dsens, "sensitivity Delta (with --floors)");
  solve_cmd->add_option("--eps", so_eps, "privacy epsilon");
  solve_cmd->add_option("--delta", so_delta, "privacy delta");
  solve_cmd->add_option("--seed", so_seed, "rng seed (default 0)");
  solve_cmd->add_option("--out", so_out, "output JSON path (default stdout)");
  solve_cmd->add_flag("--pure-dp", so_pure, "solve over the floors (eps, 0) release");
  solve_cmd->add_flag("--no-floor-check", so_no_check, "skip the Assumption-1 probe");

  // ---- bounds ----
  auto* bounds = app.add_subcommand("bounds", "evaluate the utility bounds");
  double bo_L = 1.0, bo_sens = 1.0, bo_eps = 1.0, bo_delta = 1.0, bo_alpha = 1.0;
  int bo_m = 1;
  std::string bo_diag;
  bounds->add_option("--L", bo_L, "Lipschitz constant")->required();
  bounds->add_option("--delta-sens", bo_sens, "sensitivity Delta")->required();
  bounds->add_option("--eps", bo_eps, "privacy epsilon")->required();
  bounds->add_option("--delta", bo_delta, "privacy delta")->required();
  bounds->add_option("--m", bo_m, "number of (private) constraints")->required();
  bounds->add_option("--alpha", bo_alpha, "alpha_{p,q} * m^(1/p) aggregate")->required();
  bounds->add_option("--diag", bo_diag, "positive diagonal: adds the lower bound");

  // ---- cond ----
  auto* cond = app.add_subcommand("cond", "condition numbers of a linear system");
  std::string co_method, co_matrix, co_diag, co_p = "inf", co_q = "1";
  cond->add_option("--method", co_method, "diag | sigma-min | strong-stable | brute")
      ->required();
  cond->add_option("--matrix", co_matrix, "matrix JSON file ([[..],..] or {\"A\": ..})");
  cond->add_option("--diag", co_diag, "diagonal entries, comma separated");
  cond->add_option("--p", co_p, "norm index p: 1 | 2 | inf");
  cond->add_option("--q", co_q, "norm index q: 1 | 2 | inf");

  // ---- experiment-portfolio ----
  auto* pf = app.add_subcommand("experiment-portfolio", "portfolio quality sweep");
  std::string pf_returns, pf_out, pf_svg;
  PortfolioSweepConfig pf_cfg;
  pf_cfg.threads = 0;  // 0: use --threads, then PRIVOPT_THREADS, then 1
  std::string pf_eps = "0.5,1.0,1.5,2.0,2.5";
  std::string pf_delta = "1e-06,0.00025,0.001,0.002";
  int pf_assets = 28, pf_weeks = 1363;
  std::uint64_t pf_data_seed = 7;
  pf->add_option("--returns", pf_returns, "returns CSV (weeks x tickers); synthetic if absent");
  pf->add_option("--assets", pf_assets, "synthetic asset count (default 28)");
  pf->add_option("--weeks", pf_weeks, "synthetic week count (default 1363)");
  pf->add_option("--data-seed", pf_data_seed, "synthetic data seed (default 7)");
  pf->add_option("--investors", pf_cfg.n_investors, "number of investors (default 1000)");
  pf->add_option("--r-min", pf_cfg.r_min, "minimum return target (default 2.5)");
  pf->add_option("--eps-grid", pf_eps, "epsilon grid");
  pf->add_option("--delta-grid", pf_delta, "delta grid");
  pf->add_option("--trials", pf_cfg.trials, "trials per cell (default 50)");
  pf->add_option("--seed", pf_cfg.seed, "sweep seed (default 0)");
  pf->add_option("--threads", pf_cfg.threads, "worker threads");
  pf->add_flag("--redraw-budget", pf_cfg.redraw_budget, "draw a fresh budget per trial");
  pf->add_option("--out", pf_out, "CSV output path (default stdout)");
  pf->add_option("--svg", pf_svg, "SVG plot path");

  // ---- experiment-advertising ----
  auto* ad = app.add_subcommand("experiment-advertising", "advertising revenue sweep");
  AdSweepConfig ad_cfg;
  ad_cfg.threads = 0;
  std::string ad_eps = "1e-05,0.0001,0.001,0.01,0.1,1.0";
  std::string ad_out, ad_svg;
  ad->add_option("--groups", ad_cfg.groups, "inventory groups M (default 200)");
  ad->add_option("--advertisers", ad_cfg.advertisers, "advertisers N (default 10)");
  ad->add_option("--impressions", ad_cfg.impressions_per_group, "impressions per group");
  ad->add_option("--budget-center", ad_cfg.budget_center, "budget center");
  ad->add_option("--delta-sens", ad_cfg.delta_sens, "budget sensitivity Delta");
  ad->add_option("--zero-prob", ad_cfg.zero_prob, "probability of a zero bid");
  ad->add_option("--delta", ad_cfg.delta, "privacy delta (default 1e-4)");
  ad->add_option("--eps-grid", ad_eps, "epsilon grid");
  ad->add_option("--sims", ad_cfg.sims, "simulations per epsilon (default 50)");
  ad->add_option("--seed", ad_cfg.seed, "sweep seed (default 0)");
  ad->add_option("--threads", ad_cfg.threads, "worker threads");
  ad->add_option("--out", ad_out, "CSV output path (default stdout)");
  ad->add_option("--svg", ad_svg, "SVG plot path");

  // ---- demo-transportation ----
  auto* tr = app.add_subcommand("demo-transportation", "private transportation demo");
  std::string tr_sup, tr_dem, tr_cost, tr_maxdem, tr_out;
  double tr_eps = 1.0, tr_delta = 0.25, tr_sens_v = 1.0;
  std::uint64_t tr_seed = 0;
  tr->add_option("--supplies", tr_sup, "pharmacy supplies, comma separated")->required();
  tr->add_option("--demands", tr_dem, "hospital demands, comma separated")->required();
  tr->add_option("--costs", tr_cost, "cost matrix, rows ';' separated")->required();
  tr->add_option("--max-demands", tr_maxdem, "max plausible demands")->required();
  tr->add_option("--eps", tr_eps, "privacy epsilon");
  tr->add_option("--delta", tr_delta, "privacy delta");
  tr->add_option("--delta-sens", tr_sens_v, "demand sensitivity Delta");
  tr->add_option("--seed", tr_seed, "rng seed (default 0)");
  tr->add_option("--out", tr_out, "solution JSON path");

  // ---- audit-dp ----
  auto* audit = app.add_subcommand("audit-dp", "empirical (eps, delta) audit");
  double au_eps = 1.0, au_delta = 0.1, au_sens = 1.0, au_b = 1.0, au_bp = 0.0;
  int au_samples = 1000000, au_bins = 200;
  std::uint64_t au_seed = 0;
  bool au_baseline = false;
  audit->add_option("--eps", au_eps, "privacy epsilon")->required();
  audit->add_option("--delta", au_delta, "privacy delta")->required();
  audit->add_option("--delta-sens", au_sens, "sensitivity Delta");
  audit->add_option("--b", au_b, "first input (default 1)");
  audit->add_option("--b-prime", au_bp, "neighboring input (default 0)");
  audit->add_option("--samples", au_samples, "samples per input (default 1e6)");
  audit->add_option("--bins", au_bins, "histogram bins (default 200)");
  audit->add_option("--seed", au_seed, "rng seed (default 0)");
  audit->add_flag("--baseline", au_baseline, "audit the unbounded-Laplace baseline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*perturb) {
      Vector b = parse_vector(pe_b);
      SensitivityModel sens = sensitivity_from_flags(pe_sens, pe_floors, pe_dsens);
      PrivacyParams privacy(pe_eps, pe_delta);
      Rng rng(pe_seed);
      Vector out = pe_baseline
                       ? baseline_laplace_perturb(b, sens, privacy, !pe_no_floor, rng)
                       : perturb_constraints(b, sens, privacy, rng);
      Json j;
      j["b_bar"] = to_json(out);
      j["seed"] = pe_seed;
      if (!pe_out.empty())
        write_file_atomic(pe_out, j.dump(2) + "\n");
      else
        std::cout << j.dump(2) << "\n";
    } else if (*solve_cmd) {
      ConstrainedProblem problem = problem_from_json(load_json_file(so_problem));
      SensitivityModel sens = sensitivity_from_flags(so_sens, so_floors, so_dsens);
      Json j;
      if (so_pure) {
        Solution s = solve_pure_dp(problem, sens.floors);
        j = solution_to_json(s);
      } else {
        PrivacyParams privacy(so_eps, so_delta);
        Rng rng(so_seed);
        PrivateSolveOptions opts;
        opts.check_floors = !so_no_check;
        PrivateSolution ps = solve_private(problem, sens, privacy, rng, opts);
        j = private_solution_to_json(ps);
      }
      if (!so_out.empty())
        write_file_atomic(so_out, j.dump(2) + "\n");
      else
        std::cout << j.dump(2) << "\n";
    } else if (*bounds) {
      PrivacyParams privacy(bo_eps, bo_delta);
      std::optional<Vector> diag;
      if (!bo_diag.empty()) diag = parse_vector(bo_diag);
      BoundReport rep =
          bound_report(bo_L, bo_sens, privacy, bo_m, bo_alpha, NormIndex::Inf, diag);
      std::cout << "upper_bound " << format_double(rep.upper) << "\n";
      if (rep.lower)
        std::cout << "lower_bound " << format_double(*rep.lower) << "\n";
    } else if (*cond) {
      double value = 0.0;
      if (co_method == "diag") {
        if (!co_diag.empty()) {
          value = cond_diag(parse_vector(co_diag));
        } else {
          CondSpec spec;
          spec.method = CondMethod::Diagonal;
          value = condition_number(matrix_from_file(co_matrix), spec);
        }
      } else if (co_method == "sigma-min") {
        value = cond_sigma_min(matrix_from_file(co_matrix));
      } else if (co_method == "strong-stable") {
        value = cond_strong_stable(matrix_from_file(co_matrix));
      } else if (co_method == "brute") {
        value = cond_bruteforce(matrix_from_file(co_matrix), parse_norm(co_p),
                                parse_norm(co_q));
      } else {
        std::cerr << "unknown method: " << co_method << "\n";
        return 2;
      }
      std::cout << format_double(value) << "\n";
    } else if (*pf) {
      pf_cfg.epsilon_grid = parse_grid(pf_eps);
      pf_cfg.delta_grid = parse_grid(pf_delta);
      if (pf_cfg.threads <= 0) pf_cfg.threads = threads_default();
      ReturnsData returns = pf_returns.empty()
                                ? synthesize_returns(pf_assets, pf_weeks, pf_data_seed)
                                : load_returns_csv(pf_returns);
      QualityGrid grid = run_portfolio_sweep(pf_cfg, returns);
      emit(report_rows(grid, pf_cfg.trials), pf_out, pf_svg);
    } else if (*ad) {
      ad_cfg.epsilon_grid = parse_grid(ad_eps);
      if (ad_cfg.threads <= 0) ad_cfg.threads = threads_default();
      auto rows = run_advertising_sweep(ad_cfg);
      emit(report_rows(rows, ad_cfg.delta, ad_cfg.seed), ad_out, ad_svg);
    } else if (*tr) {
      Vector sup = parse_vector(tr_sup);
      Vector dem = parse_vector(tr_dem);
      Vector maxdem = parse_vector(tr_maxdem);
      Matrix costs = parse_matrix(tr_cost);
      TransportInstance inst =
          transportation_instance(sup, dem, costs, maxdem, tr_sens_v);
      Solution opt = solve_lp(inst.problem);
      if (opt.status != SolveStatus::Optimal)
        throw SolverFailure("transportation optimum: " + to_string(opt.status));
      PrivacyParams privacy(tr_eps, tr_delta);
      Rng rng(tr_seed);
      PrivateSolution ps = solve_private(inst.problem, inst.sens, privacy, rng);
      std::cout << "optimal_cost " << format_double(opt.objective) << "\n";
      std::cout << "private_cost " << format_double(ps.objective) << "\n";
      std::cout << "gap " << format_double(ps.objective - opt.objective) << "\n";
      std::cout << "feasible_wrt_original " << (ps.feasible_wrt_original ? "true" : "false")
                << "\n";
      if (!tr_out.empty()) write_file_atomic(tr_out, private_solution_to_json(ps).dump(2) + "\n");
    } else if (*audit) {
      PrivacyParams privacy(au_eps, au_delta);
      ScalarMechanism mech;
      if (au_baseline) {
        double scale = au_sens / au_eps;
        double s = shift_width(au_sens, privacy, 1);
        mech = [scale, s](double b, Rng& r) {
          return std::max(b - s + laplace_sample(scale, r), 0.0);
        };
      } else {
        double s = shift_width(au_sens, privacy, 1);
        TruncLaplace d(au_sens / au_eps, s);
        mech = [d, s](double b, Rng& r) { return b - s + d.sample(r); };
      }
      Rng rng(au_seed);
      auto rep = empirical_dp_check(mech, au_b, au_bp, privacy, au_samples, au_bins, rng);
      std::cout << "delta_hat " << format_double(rep.delta_hat) << "\n";
      std::cout << "slack " << format_double(rep.slack) << "\n";
      std::cout << "max_overlap_ratio " << format_double(rep.max_overlap_ratio) << "\n";
      std::cout << "max_overlap_ratio_normed "
                << format_double(rep.max_overlap_ratio_normed) << "\n";
      std::cout << "bins " << rep.n_bins << " samples " << rep.n_samples << "\n";
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what();
    if (e.row() >= 0) std::cerr << " (row " << e.row() << ", column " << e.column() << ")";
    std::cerr << "\n";
    return 3;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleFloorSystem& e) {
    std::cerr << "mechanism error: " << e.what() << "\n";
    return 4;
  } catch (const NoPureDpMechanism& e) {
    std::cerr << "mechanism error: " << e.what() << "\n";
    return 4;
  } catch (const NotStronglyStable& e) {
    std::cerr << "condition error: " << e.what() << "\n";
    return 4;
  } catch (const SolverFailure& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  } catch (const SingularMatrix& e) {
    std::cerr << "condition error: " << e.what() << "\n";
    return 4;
  } catch (const InfeasibleInstance& e) {
    std::cerr << "instance error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
