#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "privopt/experiments.hpp"

namespace privopt {

// One grid cell of a sweep: epsilon, delta, metric, mean, stderr,
// n_trials, seed.
struct ReportRow {
  double epsilon = 0.0;
  double delta = 0.0;
  std::string metric;
  double mean = 0.0;
  double std_error = 0.0;
  int n_trials = 0;
  std::uint64_t seed = 0;
};

std::vector<ReportRow> report_rows(const QualityGrid& grid, int trials);
std::vector<ReportRow> report_rows(const std::vector<AdSweepRow>& rows,
                                   double delta, std::uint64_t seed);

// Bit-stable CSV rendering (%.12g) with a fixed header.
std::string to_csv(const std::vector<ReportRow>& rows);

// Line plot, one series per (metric, delta) pair, epsilon on the x axis.
std::string to_svg(const std::vector<ReportRow>& rows);

// write temp file then rename, so readers never see partial output
void write_file_atomic(const std::string& path, const std::string& content);

std::string format_double(double v);

}  // namespace privopt
