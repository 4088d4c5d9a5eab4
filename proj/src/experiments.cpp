#include "privopt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "privopt/errors.hpp"

namespace privopt {

namespace {

// Run fn(i) for i in [0, count) on up to `threads` workers.  Each index
// owns its output slot, so results do not depend on scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double standard_normal(Rng& rng) {
  // Box-Muller; one value per call keeps the draw order obvious.
  double u1 = rng.next_open();
  double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace

ReturnsData parse_returns_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n_cols = -1;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (!header_seen) {
      header_seen = true;
      n_cols = static_cast<int>(cells.size());
      if (n_cols < 1) throw ParseError("empty header row", lineno, 1);
      continue;
    }
    if (static_cast<int>(cells.size()) != n_cols)
      throw ParseError("row has " + std::to_string(cells.size()) +
                           " cells, expected " + std::to_string(n_cols),
                       lineno, 1);
    std::vector<double> vals(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      try {
        std::size_t used = 0;
        vals[j] = std::stod(cells[j], &used);
        while (used < cells[j].size() && std::isspace(static_cast<unsigned char>(cells[j][used])))
          ++used;
        if (used != cells[j].size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        throw ParseError("cell is not numeric: \"" + cells[j] + "\"", lineno,
                         static_cast<int>(j) + 1);
      }
    }
    rows.push_back(std::move(vals));
  }
  if (!header_seen) throw ParseError("file has no header row", 1, 1);
  const int weeks = static_cast<int>(rows.size());
  if (weeks < 2) throw DimensionError("need at least 2 weeks of returns");

  ReturnsData data;
  data.n_assets = n_cols;
  data.n_weeks = weeks;
  Matrix R(weeks, n_cols);
  for (int t = 0; t < weeks; ++t)
    for (int j = 0; j < n_cols; ++j) R(t, j) = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
  data.mean = R.colwise().mean();
  Matrix centered = R.rowwise() - data.mean.transpose();
  data.covariance = centered.transpose() * centered / (weeks - 1);
  return data;
}

ReturnsData load_returns_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_returns_csv(buf.str());
}

ReturnsData synthesize_returns(int n_assets, int n_weeks, std::uint64_t seed) {
  if (n_assets < 1) throw std::invalid_argument("n_assets must be >= 1");
  if (n_weeks < n_assets + 1)
    throw std::invalid_argument("n_weeks must be >= n_assets + 1");

  Rng root(seed);
  Rng load_rng = root.split(1);
  Rng path_rng = root.split(2);

  const int n_factors = std::min(3, n_assets);
  // Risk/return ramp: later assets earn more and swing more, so hitting a
  // high return target forces capital toward volatile names and the budget
  // constraint binds.
  Vector mu(n_assets), vol(n_assets);
  for (int i = 0; i < n_assets; ++i) {
    double ramp = n_assets > 1 ? static_cast<double>(i) / (n_assets - 1) : 1.0;
    mu(i) = 0.0025 + 0.0040 * ramp;
    vol(i) = 0.012 + 0.018 * ramp;
  }
  Matrix loadings = Matrix::Zero(n_assets, n_factors);
  Vector idio(n_assets);
  const double factor_share[3] = {0.55, 0.25, 0.15};
  for (int i = 0; i < n_assets; ++i) {
    double used = 0.0;
    for (int k = 0; k < n_factors; ++k) {
      double jitter = 0.8 + 0.4 * load_rng.next_unit();
      double sign = (k > 0 && load_rng.next_unit() < 0.5) ? -1.0 : 1.0;
      loadings(i, k) = sign * vol(i) * factor_share[k] * jitter;
      used += loadings(i, k) * loadings(i, k);
    }
    double rem = vol(i) * vol(i) - used;
    idio(i) = std::sqrt(std::max(rem, 0.25 * vol(i) * vol(i)));
  }

  Matrix R(n_weeks, n_assets);
  for (int t = 0; t < n_weeks; ++t) {
    Vector f(n_factors);
    for (int k = 0; k < n_factors; ++k) f(k) = standard_normal(path_rng);
    for (int i = 0; i < n_assets; ++i) {
      double r = mu(i) + loadings.row(i).dot(f) + idio(i) * standard_normal(path_rng);
      R(t, i) = r;
    }
  }

  ReturnsData data;
  data.n_assets = n_assets;
  data.n_weeks = n_weeks;
  data.mean = R.colwise().mean();
  Matrix centered = R.rowwise() - data.mean.transpose();
  data.covariance = centered.transpose() * centered / (n_weeks - 1);
  return data;
}

PortfolioInstance portfolio_instance(const ReturnsData& returns, double r_min,
                                     double budget) {
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be > 0");
  const int n = returns.n_assets;
  PortfolioInstance inst;
  Matrix A(2, n);
  A.row(0) = -returns.mean.transpose();  // mean'x >= r_min, negated
  A.row(1).setOnes();                    // 1'x <= budget
  Vector b(2);
  b << -r_min, budget;
  inst.problem.objective = QuadraticObjective{returns.covariance, Vector::Zero(n)};
  inst.problem.constraints = {A, b};
  inst.problem.nonneg.assign(static_cast<std::size_t>(n), true);
  inst.sens.delta_sens = 1.0;  // one investor moves the budget by at most 1
  inst.sens.floors = Vector(2);
  inst.sens.floors << -r_min, 0.0;
  inst.sens.private_rows = {false, true};
  return inst;
}

QualityGrid run_portfolio_sweep(const PortfolioSweepConfig& cfg,
                                const ReturnsData& returns) {
  if (cfg.epsilon_grid.empty() || cfg.delta_grid.empty())
    throw std::invalid_argument("epsilon and delta grids must be nonempty");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");

  Rng root(cfg.seed);
  QualityGrid grid;
  grid.seed = cfg.seed;

  Rng budget_rng = root.split(0);
  double budget = 0.0;
  for (int i = 0; i < cfg.n_investors; ++i) budget += budget_rng.next_unit();
  grid.budget = budget;

  PortfolioInstance base = portfolio_instance(returns, cfg.r_min, budget);
  Solution opt = solve_qp(base.problem);
  grid.v_star = opt.status == SolveStatus::Optimal
                    ? opt.objective
                    : std::numeric_limits<double>::quiet_NaN();

  const int n_eps = static_cast<int>(cfg.epsilon_grid.size());
  const int n_del = static_cast<int>(cfg.delta_grid.size());
  grid.cells.resize(static_cast<std::size_t>(n_eps * n_del));

  if (opt.status != SolveStatus::Optimal) {
    for (int ci = 0; ci < n_eps * n_del; ++ci) {
      auto& cell = grid.cells[static_cast<std::size_t>(ci)];
      cell.epsilon = cfg.epsilon_grid[static_cast<std::size_t>(ci / n_del)];
      cell.delta = cfg.delta_grid[static_cast<std::size_t>(ci % n_del)];
      cell.flagged = true;
    }
    return grid;
  }

  struct TrialOut {
    double ratio = 0.0;
    bool ok = false;
    bool violated = false;
  };
  const int total = n_eps * n_del * cfg.trials;
  std::vector<TrialOut> out(static_cast<std::size_t>(total));

  parallel_for(total, cfg.threads, [&](int idx) {
    int ci = idx / cfg.trials;
    int trial = idx % cfg.trials;
    double eps = cfg.epsilon_grid[static_cast<std::size_t>(ci / n_del)];
    double del = cfg.delta_grid[static_cast<std::size_t>(ci % n_del)];
    Rng stream = root.split(static_cast<std::uint64_t>(ci) + 1)
                     .split(static_cast<std::uint64_t>(trial) + 1);
    double b_t = budget;
    double v_t = grid.v_star;
    PortfolioInstance inst = base;
    if (cfg.redraw_budget) {
      b_t = 0.0;
      for (int i = 0; i < cfg.n_investors; ++i) b_t += stream.next_unit();
      inst = portfolio_instance(returns, cfg.r_min, b_t);
      Solution o = solve_qp(inst.problem);
      if (o.status != SolveStatus::Optimal) return;
      v_t = o.objective;
    }
    PrivateSolveOptions opts;
    // A zero budget floor leaves no room for a positive return target,
    // so the floor probe would always refuse; infeasible perturbed
    // problems are flagged instead.
    opts.check_floors = false;
    opts.audit_tol =
        1e-7 * std::max(1.0, inst.problem.constraints.b.lpNorm<Eigen::Infinity>());
    try {
      PrivateSolution ps =
          solve_private(inst.problem, inst.sens, PrivacyParams(eps, del), stream, opts);
      auto& slot = out[static_cast<std::size_t>(idx)];
      slot.ratio = v_t != 0.0 ? ps.objective / v_t
                              : (std::abs(ps.objective) < 1e-12 ? 1.0 : 0.0);
      slot.ok = true;
      slot.violated = !ps.feasible_wrt_original;
    } catch (const SolverFailure&) {
      // infeasible perturbed problem: leave the slot marked not-ok
    }
  });

  for (int ci = 0; ci < n_eps * n_del; ++ci) {
    auto& cell = grid.cells[static_cast<std::size_t>(ci)];
    cell.epsilon = cfg.epsilon_grid[static_cast<std::size_t>(ci / n_del)];
    cell.delta = cfg.delta_grid[static_cast<std::size_t>(ci % n_del)];
    double sum = 0.0, sumsq = 0.0;
    int k = 0;
    for (int t = 0; t < cfg.trials; ++t) {
      const auto& slot = out[static_cast<std::size_t>(ci * cfg.trials + t)];
      if (!slot.ok) continue;
      sum += slot.ratio;
      sumsq += slot.ratio * slot.ratio;
      ++k;
      if (slot.violated) ++grid.violations;
    }
    cell.n_feasible = k;
    cell.flagged = k < cfg.trials;
    if (k > 0) {
      cell.mean_ratio = sum / k;
      double var = k > 1 ? std::max(0.0, (sumsq - sum * sum / k) / (k - 1)) : 0.0;
      cell.std_error = k > 1 ? std::sqrt(var / k) : 0.0;
    }
  }
  return grid;
}

AdInstance advertising_instance(const AdSweepConfig& cfg, Rng& rng) {
  if (cfg.groups < 1 || cfg.advertisers < 1)
    throw std::invalid_argument("groups and advertisers must be positive");
  if (cfg.zero_prob < 0.0 || cfg.zero_prob > 1.0)
    throw std::invalid_argument("zero_prob must be in [0, 1]");
  const int M = cfg.groups;
  const int N = cfg.advertisers;
  const int n = N * M;  // x_ij at index i*M + j

  // Draw order: costs row-major per advertiser, then budgets.
  Matrix costs(N, M);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < M; ++j) {
      if (rng.next_unit() < cfg.zero_prob) {
        costs(i, j) = 0.0;
      } else {
        costs(i, j) = rng.next_unit();
      }
    }
  }
  Vector budgets(N);
  for (int i = 0; i < N; ++i)
    budgets(i) = cfg.budget_center + cfg.delta_sens * (rng.next_unit() - 0.5);

  AdInstance inst;
  Matrix A = Matrix::Zero(M + N, n);
  Vector b(M + N);
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i < N; ++i) A(j, i * M + j) = 1.0;
    b(j) = cfg.impressions_per_group;
  }
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < M; ++j) A(M + i, i * M + j) = costs(i, j);
    b(M + i) = budgets(i);
  }
  Vector c(n);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j) c(i * M + j) = costs(i, j);

  inst.problem.objective = LinearObjective{c, Sense::Maximize};
  inst.problem.constraints = {std::move(A), std::move(b)};
  inst.problem.nonneg.assign(static_cast<std::size_t>(n), true);

  inst.sens.delta_sens = cfg.delta_sens;
  inst.sens.floors = Vector(M + N);
  inst.sens.floors.head(M) = inst.problem.constraints.b.head(M);
  inst.sens.floors.tail(N).setZero();
  inst.sens.private_rows.assign(static_cast<std::size_t>(M + N), false);
  for (int i = 0; i < N; ++i)
    inst.sens.private_rows[static_cast<std::size_t>(M + i)] = true;
  return inst;
}

std::vector<AdSweepRow> run_advertising_sweep(const AdSweepConfig& cfg) {
  if (cfg.epsilon_grid.empty())
    throw std::invalid_argument("epsilon grid must be nonempty");
  if (cfg.sims < 1) throw std::invalid_argument("sims must be >= 1");

  Rng root(cfg.seed);
  const int n_eps = static_cast<int>(cfg.epsilon_grid.size());
  const int total = n_eps * cfg.sims;

  struct SimOut {
    double ratio = 0.0;
    bool ratio_ok = false;
    double base_frac = 0.0;
    double our_frac = 0.0;
  };
  std::vector<SimOut> out(static_cast<std::size_t>(total));

  parallel_for(total, cfg.threads, [&](int idx) {
    int ei = idx / cfg.sims;
    int sim = idx % cfg.sims;
    double eps = cfg.epsilon_grid[static_cast<std::size_t>(ei)];
    PrivacyParams privacy(eps, cfg.delta);
    Rng stream = root.split(static_cast<std::uint64_t>(ei) + 1)
                     .split(static_cast<std::uint64_t>(sim) + 1);
    AdInstance inst = advertising_instance(cfg, stream);
    const Vector b_true = inst.problem.constraints.b;
    const int m_all = inst.problem.constraints.rows();

    PrivateSolveOptions opts;
    opts.check_floors = false;  // the floor system contains x = 0
    // 1e-7 relative: budgets sit at the 1e7 scale, so an absolute 1e-7
    // would flag plain solver roundoff as violations
    opts.audit_tol = 1e-7 * std::max(1.0, b_true.lpNorm<Eigen::Infinity>());
    PrivateSolution ours = solve_private(inst.problem, inst.sens, privacy, stream, opts);

    Vector b_base =
        baseline_laplace_perturb(b_true, inst.sens, privacy, true, stream);
    ConstrainedProblem base_problem = inst.problem;
    base_problem.constraints.b = b_base;
    Solution base_sol = solve_lp(base_problem);
    if (base_sol.status != SolveStatus::Optimal)
      throw SolverFailure("baseline LP: " + to_string(base_sol.status));

    auto& slot = out[static_cast<std::size_t>(idx)];
    FeasibilityReport our_audit =
        audit_feasibility(inst.problem.constraints.A, ours.x, b_true, opts.audit_tol);
    FeasibilityReport base_audit =
        audit_feasibility(inst.problem.constraints.A, base_sol.x, b_true, opts.audit_tol);
    slot.our_frac = static_cast<double>(our_audit.violated.size()) / m_all;
    slot.base_frac = static_cast<double>(base_audit.violated.size()) / m_all;
    if (base_sol.objective > 0.0) {
      slot.ratio = ours.objective / base_sol.objective;
      slot.ratio_ok = true;
    }
  });

  std::vector<AdSweepRow> rows;
  rows.reserve(static_cast<std::size_t>(n_eps));
  for (int ei = 0; ei < n_eps; ++ei) {
    AdSweepRow row;
    row.epsilon = cfg.epsilon_grid[static_cast<std::size_t>(ei)];
    row.sims = cfg.sims;
    double rsum = 0.0, rsumsq = 0.0;
    for (int sim = 0; sim < cfg.sims; ++sim) {
      const auto& slot = out[static_cast<std::size_t>(ei * cfg.sims + sim)];
      row.baseline_violation_fraction += slot.base_frac;
      row.our_violation_fraction += slot.our_frac;
      if (slot.ratio_ok) {
        rsum += slot.ratio;
        rsumsq += slot.ratio * slot.ratio;
        ++row.ratio_sims;
      }
    }
    row.baseline_violation_fraction /= cfg.sims;
    row.our_violation_fraction /= cfg.sims;
    if (row.ratio_sims > 0) {
      row.revenue_ratio = rsum / row.ratio_sims;
      if (row.ratio_sims > 1) {
        double var = std::max(
            0.0, (rsumsq - rsum * rsum / row.ratio_sims) / (row.ratio_sims - 1));
        row.revenue_ratio_se = std::sqrt(var / row.ratio_sims);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

TransportInstance transportation_instance(const Vector& supplies,
                                          const Vector& demands,
                                          const Matrix& costs,
                                          const Vector& max_demands,
                                          double delta_sens) {
  const int ns = static_cast<int>(supplies.size());
  const int nd = static_cast<int>(demands.size());
  if (costs.rows() != ns || costs.cols() != nd)
    throw std::invalid_argument("costs must be supplies x demands");
  if (max_demands.size() != nd)
    throw std::invalid_argument("max_demands must match demands");
  if ((max_demands.array() < demands.array()).any())
    throw std::invalid_argument("max_demands must dominate demands");
  if (supplies.sum() < demands.sum())
    throw InfeasibleInstance("total supply cannot cover total demand");

  const int n = ns * nd;  // x_ij at index i*nd + j
  TransportInstance inst;
  inst.n_supplies = ns;
  inst.n_demands = nd;
  Matrix A = Matrix::Zero(ns + nd, n);
  Vector b(ns + nd);
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nd; ++j) A(i, i * nd + j) = 1.0;
    b(i) = supplies(i);
  }
  for (int j = 0; j < nd; ++j) {
    for (int i = 0; i < ns; ++i) A(ns + j, i * nd + j) = -1.0;
    b(ns + j) = -demands(j);
  }
  Vector c(n);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nd; ++j) c(i * nd + j) = costs(i, j);

  inst.problem.objective = LinearObjective{c, Sense::Minimize};
  inst.problem.constraints = {std::move(A), std::move(b)};
  inst.problem.nonneg.assign(static_cast<std::size_t>(n), true);

  inst.sens.delta_sens = delta_sens;
  inst.sens.floors = Vector(ns + nd);
  inst.sens.floors.head(ns) = supplies;
  inst.sens.floors.tail(nd) = -max_demands;
  inst.sens.private_rows.assign(static_cast<std::size_t>(ns + nd), false);
  for (int j = 0; j < nd; ++j)
    inst.sens.private_rows[static_cast<std::size_t>(ns + j)] = true;
  return inst;
}

}  // namespace privopt
