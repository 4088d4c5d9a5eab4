#include "privopt/json_io.hpp"

#include <fstream>
#include <limits>

#include "privopt/errors.hpp"

namespace privopt {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) {
    if (v(i) == kNegInf)
      arr.push_back(nullptr);
    else
      arr.push_back(v(i));
  }
  return arr;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ParseError("expected an array of arrays");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[static_cast<std::size_t>(i)].size()) != cols)
      throw ParseError("ragged matrix row", i + 1);
    for (int c = 0; c < cols; ++c)
      m(i, c) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array");
  Vector v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].is_null())
      v(static_cast<int>(i)) = kNegInf;
    else
      v(static_cast<int>(i)) = j[i].get<double>();
  }
  return v;
}

Json problem_to_json(const ConstrainedProblem& p) {
  Json obj;
  if (p.is_linear()) {
    const auto& lin = std::get<LinearObjective>(p.objective);
    obj["kind"] = "linear";
    obj["sense"] = lin.sense == Sense::Maximize ? "max" : "min";
    obj["c"] = to_json(lin.c);
  } else {
    const auto& quad = std::get<QuadraticObjective>(p.objective);
    obj["kind"] = "quadratic";
    obj["sense"] = "min";
    obj["Q"] = to_json(quad.Q);
    obj["c"] = to_json(quad.c);
  }
  Json out;
  out["objective"] = std::move(obj);
  out["A"] = to_json(p.constraints.A);
  out["b"] = to_json(p.constraints.b);
  Json nn = Json::array();
  for (int j = 0; j < p.num_vars(); ++j) nn.push_back(p.var_nonneg(j));
  out["nonneg"] = std::move(nn);
  return out;
}

ConstrainedProblem problem_from_json(const Json& j) {
  ConstrainedProblem p;
  if (!j.contains("objective") || !j.contains("A") || !j.contains("b"))
    throw ParseError("problem JSON needs objective, A and b");
  const Json& obj = j["objective"];
  std::string kind = obj.value("kind", "linear");
  Vector c = vector_from_json(obj.at("c"));
  if (kind == "linear") {
    std::string sense = obj.value("sense", "max");
    if (sense != "max" && sense != "min")
      throw ParseError("sense must be max or min");
    p.objective = LinearObjective{
        std::move(c), sense == "max" ? Sense::Maximize : Sense::Minimize};
  } else if (kind == "quadratic") {
    p.objective = QuadraticObjective{matrix_from_json(obj.at("Q")), std::move(c)};
  } else {
    throw ParseError("objective kind must be linear or quadratic");
  }
  p.constraints.A = matrix_from_json(j["A"]);
  p.constraints.b = vector_from_json(j["b"]);
  if (p.constraints.b.size() != p.constraints.A.rows())
    throw ParseError("b length does not match A");
  int n = p.constraints.cols();
  p.nonneg.assign(static_cast<std::size_t>(n), false);
  if (j.contains("nonneg")) {
    const Json& nn = j["nonneg"];
    if (static_cast<int>(nn.size()) != n)
      throw ParseError("nonneg length does not match the variable count");
    for (int k = 0; k < n; ++k)
      p.nonneg[static_cast<std::size_t>(k)] = nn[static_cast<std::size_t>(k)].get<bool>();
  }
  return p;
}

Json sensitivity_to_json(const SensitivityModel& s) {
  Json out;
  out["delta_sens"] = s.delta_sens;
  out["floors"] = to_json(s.floors);
  if (!s.private_rows.empty()) {
    Json pr = Json::array();
    for (bool v : s.private_rows) pr.push_back(v);
    out["private_rows"] = std::move(pr);
  }
  return out;
}

SensitivityModel sensitivity_from_json(const Json& j) {
  SensitivityModel s;
  if (!j.contains("delta_sens") || !j.contains("floors"))
    throw ParseError("sensitivity JSON needs delta_sens and floors");
  s.delta_sens = j["delta_sens"].get<double>();
  s.floors = vector_from_json(j["floors"]);
  if (j.contains("private_rows")) {
    const Json& pr = j["private_rows"];
    if (static_cast<int>(pr.size()) != s.floors.size())
      throw ParseError("private_rows length does not match floors");
    s.private_rows.resize(pr.size());
    for (std::size_t i = 0; i < pr.size(); ++i) s.private_rows[i] = pr[i].get<bool>();
  }
  return s;
}

Json solution_to_json(const Solution& s) {
  Json out;
  out["status"] = to_string(s.status);
  out["x"] = to_json(s.x);
  out["objective"] = s.objective;
  out["iterations"] = s.iterations;
  if (!s.note.empty()) out["note"] = s.note;
  return out;
}

Json private_solution_to_json(const PrivateSolution& s) {
  Json out;
  out["b_bar"] = to_json(s.b_bar);
  out["x"] = to_json(s.x);
  out["objective"] = s.objective;
  out["seed"] = s.seed;
  out["feasible_wrt_original"] = s.feasible_wrt_original;
  out["status"] = to_string(s.solver_result.status);
  out["iterations"] = s.solver_result.iterations;
  return out;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return j;
}

}  // namespace privopt
