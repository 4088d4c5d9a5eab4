#include "privopt/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace privopt {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<ReportRow> report_rows(const QualityGrid& grid, int trials) {
  std::vector<ReportRow> rows;
  rows.reserve(grid.cells.size());
  for (const auto& cell : grid.cells) {
    ReportRow row;
    row.epsilon = cell.epsilon;
    row.delta = cell.delta;
    row.metric = cell.flagged ? "ratio_flagged" : "ratio";
    row.mean = cell.mean_ratio;
    row.std_error = cell.std_error;
    row.n_trials = cell.n_feasible > 0 ? cell.n_feasible : trials;
    row.seed = grid.seed;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> report_rows(const std::vector<AdSweepRow>& sweep,
                                   double delta, std::uint64_t seed) {
  std::vector<ReportRow> rows;
  rows.reserve(3 * sweep.size());
  for (const auto& r : sweep) {
    ReportRow ratio{r.epsilon, delta, "revenue_ratio", r.revenue_ratio,
                    r.revenue_ratio_se, r.ratio_sims, seed};
    ReportRow basev{r.epsilon, delta, "baseline_violation_fraction",
                    r.baseline_violation_fraction, 0.0, r.sims, seed};
    ReportRow ourv{r.epsilon, delta, "our_violation_fraction",
                   r.our_violation_fraction, 0.0, r.sims, seed};
    rows.push_back(std::move(ratio));
    rows.push_back(std::move(basev));
    rows.push_back(std::move(ourv));
  }
  return rows;
}

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::string out = "epsilon,delta,metric,mean,stderr,n_trials,seed\n";
  for (const auto& r : rows) {
    out += format_double(r.epsilon);
    out += ',';
    out += format_double(r.delta);
    out += ',';
    out += r.metric;
    out += ',';
    out += format_double(r.mean);
    out += ',';
    out += format_double(r.std_error);
    out += ',';
    out += std::to_string(r.n_trials);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::string to_svg(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no rows to plot");

  const double W = 720, H = 480;
  const double ml = 70, mr = 180, mt = 30, mb = 50;
  const double pw = W - ml - mr, ph = H - mt - mb;

  double xmin = rows[0].epsilon, xmax = rows[0].epsilon;
  double ymin = rows[0].mean, ymax = rows[0].mean;
  for (const auto& r : rows) {
    xmin = std::min(xmin, r.epsilon);
    xmax = std::max(xmax, r.epsilon);
    ymin = std::min(ymin, r.mean);
    ymax = std::max(ymax, r.mean);
  }
  bool logx = xmin > 0.0 && xmax / xmin > 50.0;
  auto xvalue = [&](double e) { return logx ? std::log10(e) : e; };
  double xlo = xvalue(xmin), xhi = xvalue(xmax);
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double e) { return ml + (xvalue(e) - xlo) / (xhi - xlo) * pw; };
  auto py = [&](double v) { return mt + (ymax - v) / (ymax - ymin) * ph; };

  std::map<std::string, std::vector<const ReportRow*>> series;
  for (const auto& r : rows)
    series[r.metric + " delta=" + format_double(r.delta)].push_back(&r);

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         format_double(W) + "\" height=\"" + format_double(H) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt + ph) +
         "\" x2=\"" + format_double(ml + pw) + "\" y2=\"" + format_double(mt + ph) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt) +
         "\" x2=\"" + format_double(ml) + "\" y2=\"" + format_double(mt + ph) +
         "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + format_double(ml + pw / 2) + "\" y=\"" +
         format_double(H - 12) + "\" text-anchor=\"middle\" font-size=\"13\">" +
         std::string(logx ? "epsilon (log scale)" : "epsilon") + "</text>\n";
  svg += "<text x=\"18\" y=\"" + format_double(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
         format_double(mt + ph / 2) + ")\">mean</text>\n";
  // y-axis end labels
  svg += "<text x=\"" + format_double(ml - 6) + "\" y=\"" + format_double(py(ymin) + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + format_double(ymin) + "</text>\n";
  svg += "<text x=\"" + format_double(ml - 6) + "\" y=\"" + format_double(py(ymax) + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + format_double(ymax) + "</text>\n";

  int si = 0;
  for (auto& [name, pts] : series) {
    std::vector<const ReportRow*> sorted = pts;
    std::sort(sorted.begin(), sorted.end(),
              [](const ReportRow* a, const ReportRow* b) {
                return a->epsilon < b->epsilon;
              });
    const char* color = palette[si % 8];
    std::string poly;
    for (const auto* r : sorted) {
      poly += format_double(px(r->epsilon)) + "," + format_double(py(r->mean)) + " ";
      svg += "<circle cx=\"" + format_double(px(r->epsilon)) + "\" cy=\"" +
             format_double(py(r->mean)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    svg += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    double ly = mt + 16.0 * (si + 1);
    svg += "<line x1=\"" + format_double(ml + pw + 8) + "\" y1=\"" + format_double(ly - 4) +
           "\" x2=\"" + format_double(ml + pw + 28) + "\" y2=\"" + format_double(ly - 4) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + format_double(ml + pw + 32) + "\" y=\"" + format_double(ly) +
           "\" font-size=\"11\">" + name + "</text>\n";
    ++si;
  }
  svg += "</svg>\n";
  return svg;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

}  // namespace privopt
