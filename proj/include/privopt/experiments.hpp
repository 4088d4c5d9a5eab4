#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "privopt/mechanism.hpp"
#include "privopt/problem.hpp"

namespace privopt {

struct ReturnsData {
  Vector mean;        // average weekly linear returns
  Matrix covariance;  // sample covariance of the weekly returns
  int n_assets = 0;
  int n_weeks = 0;
};

// CSV of weeks x assets, header row of tickers.
ReturnsData load_returns_csv(const std::string& path);
ReturnsData parse_returns_csv(const std::string& text);

// Three-factor synthetic weekly returns with a risk/return ramp across
// assets; deterministic under seed.
ReturnsData synthesize_returns(int n_assets, int n_weeks, std::uint64_t seed);

struct PortfolioInstance {
  ConstrainedProblem problem;
  SensitivityModel sens;
};

// Markowitz instance: minimize x' Sigma x subject to mean'x >= r_min,
// 1'x <= budget, x >= 0.  Only the budget row is private (Delta = 1,
// floor 0).
PortfolioInstance portfolio_instance(const ReturnsData& returns, double r_min,
                                     double budget);

struct PortfolioSweepConfig {
  int n_investors = 1000;
  double r_min = 2.5;
  std::vector<double> epsilon_grid;
  std::vector<double> delta_grid;
  int trials = 50;
  std::uint64_t seed = 0;
  bool redraw_budget = false;  // default: one budget draw per sweep
  int threads = 1;
};

struct QualityCell {
  double epsilon = 0.0;
  double delta = 0.0;
  double mean_ratio = 0.0;  // private objective / optimal objective
  double std_error = 0.0;
  int n_feasible = 0;
  bool flagged = false;  // some trials came back infeasible
};

struct QualityGrid {
  std::vector<QualityCell> cells;
  double budget = 0.0;
  double v_star = 0.0;
  std::uint64_t seed = 0;
  int violations = 0;  // private solutions violating the true budget
};

QualityGrid run_portfolio_sweep(const PortfolioSweepConfig& cfg,
                                const ReturnsData& returns);

struct AdSweepConfig {
  int groups = 200;       // M inventory groups
  int advertisers = 10;   // N advertisers
  double impressions_per_group = 1e7;
  double budget_center = 1e7;
  double delta_sens = 1e2;
  double zero_prob = 0.2;
  double delta = 1e-4;
  std::vector<double> epsilon_grid;
  int sims = 50;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct AdInstance {
  ConstrainedProblem problem;
  SensitivityModel sens;
};

// Revenue LP over x_ij >= 0 with M public supply rows and N private
// budget rows (floor 0).  Consumes cost and budget draws from rng.
AdInstance advertising_instance(const AdSweepConfig& cfg, Rng& rng);

struct AdSweepRow {
  double epsilon = 0.0;
  double revenue_ratio = 0.0;  // ours / baseline, over sims with baseline > 0
  double revenue_ratio_se = 0.0;
  double baseline_violation_fraction = 0.0;
  double our_violation_fraction = 0.0;
  int sims = 0;
  int ratio_sims = 0;
};

std::vector<AdSweepRow> run_advertising_sweep(const AdSweepConfig& cfg);

struct TransportInstance {
  ConstrainedProblem problem;
  SensitivityModel sens;
  int n_supplies = 0;
  int n_demands = 0;
};

// Cost-minimizing shipment LP; demand rows are private (negated to <=,
// floored at the negated max plausible demand).
TransportInstance transportation_instance(const Vector& supplies,
                                          const Vector& demands,
                                          const Matrix& costs,
                                          const Vector& max_demands,
                                          double delta_sens = 1.0);

}  // namespace privopt
