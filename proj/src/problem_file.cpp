#include "collonet/problem_file.hpp"

#include <array>
#include <cmath>
#include <fstream>

namespace collonet {

using nlohmann::json;

namespace {

Factor::Kind factor_kind(const std::string& name) {
  if (name == "exp") return Factor::Kind::exp;
  if (name == "sin") return Factor::Kind::sin;
  if (name == "cos") return Factor::Kind::cos;
  throw ConfigError("unknown factor function '" + name + "' (expected exp, sin or cos)");
}

const char* factor_name(Factor::Kind k) {
  switch (k) {
    case Factor::Kind::exp: return "exp";
    case Factor::Kind::sin: return "sin";
    case Factor::Kind::cos: return "cos";
  }
  return "?";
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(where + ": missing required field '" + key + "'");
  }
  return j.at(key);
}

PointCloud points_from_array(const json& arr, std::size_t dim, PointTag tag, const std::string& where) {
  if (!arr.is_array()) throw ConfigError(where + ".points must be an array of coordinate arrays");
  PointCloud out(dim, tag);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& row = arr[i];
    if (!row.is_array() || row.size() != dim) {
      throw ConfigError(where + ".points[" + std::to_string(i) + "] must have " +
                        std::to_string(dim) + " coordinates");
    }
    std::vector<double> p;
    for (const auto& c : row) {
      if (!c.is_number()) throw ConfigError(where + ".points[" + std::to_string(i) + "] has a non-numeric entry");
      p.push_back(c.get<double>());
    }
    out.push_back(p);
  }
  return out;
}

PointCloud load_point_source(const json& j, std::size_t dim, PointTag tag,
                             const std::filesystem::path& base_dir, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  if (j.contains("points")) return points_from_array(j.at("points"), dim, tag, where);
  if (j.contains("csv")) {
    std::filesystem::path path = j.at("csv").get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw ConfigError(where + ": cannot open point file '" + path.string() + "'");
    auto cloud = PointCloud::read_csv(in);
    if (cloud.dim() != dim) {
      throw ConfigError(where + ": point file '" + path.string() + "' is " +
                        std::to_string(cloud.dim()) + "-D, problem is " + std::to_string(dim) + "-D");
    }
    cloud.set_tag(tag);
    return cloud;
  }
  if (j.contains("generator")) {
    const auto gen = j.at("generator").get<std::string>();
    if (gen == "rectangle" && dim == 2) {
      return rectangle_boundary(j.value("m_x", 10), j.value("m_y", 10));
    }
    if (gen == "circle" && dim == 2) {
      return circle_boundary(j.value("m", 20), j.value("radius", 1.0));
    }
    if (gen == "cube" && dim == 3) return box_boundary_3d(j.value("m", 7));
    if (gen == "grid") {
      std::vector<AxisBounds> bounds;
      if (j.contains("bounds")) {
        for (const auto& b : j.at("bounds")) bounds.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
      } else {
        bounds.assign(dim, AxisBounds{0.0, 1.0});
      }
      if (bounds.size() != dim) throw ConfigError(where + ": grid bounds must have one entry per axis");
      auto grid = interior_grid_rectangle(j.value("subdivisions", 10), bounds);
      grid.set_tag(tag);
      return grid;
    }
    throw ConfigError(where + ": generator '" + gen + "' is not available in " +
                      std::to_string(dim) + "-D");
  }
  throw ConfigError(where + " needs one of 'points', 'csv' or 'generator'");
}

}  // namespace

TermExpression::TermExpression(std::size_t dim, std::vector<Term> terms)
    : dim_(dim), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.powers.size() > dim_) throw ConfigError("term has more exponents than dimensions");
    for (int a : t.powers) {
      if (a < 0) throw ConfigError("term exponents must be non-negative integers");
    }
    for (const auto& f : t.factors) {
      if (f.axis >= dim_) throw ConfigError("factor axis " + std::to_string(f.axis) + " out of range");
      if (f.sign != 1.0 && f.sign != -1.0) throw ConfigError("factor sign must be +1 or -1");
    }
  }
}

TermExpression TermExpression::from_json(const json& j, std::size_t dim) {
  if (!j.is_array()) throw ConfigError("expression must be an array of terms");
  std::vector<Term> terms;
  for (const auto& jt : j) {
    Term t;
    t.coefficient = jt.value("c", 1.0);
    if (jt.contains("pow")) t.powers = jt.at("pow").get<std::vector<int>>();
    if (jt.contains("factors")) {
      for (const auto& jf : jt.at("factors")) {
        t.factors.push_back({factor_kind(require(jf, "fn", "factor").get<std::string>()),
                             require(jf, "axis", "factor").get<std::size_t>(),
                             jf.value("sign", 1.0)});
      }
    }
    terms.push_back(std::move(t));
  }
  return {dim, std::move(terms)};
}

json TermExpression::to_json() const {
  json arr = json::array();
  for (const auto& t : terms_) {
    json jt{{"c", t.coefficient}};
    if (!t.powers.empty()) jt["pow"] = t.powers;
    if (!t.factors.empty()) {
      json fs = json::array();
      for (const auto& f : t.factors) {
        fs.push_back({{"fn", factor_name(f.kind)}, {"axis", f.axis}, {"sign", f.sign}});
      }
      jt["factors"] = std::move(fs);
    }
    arr.push_back(std::move(jt));
  }
  return arr;
}

double TermExpression::operator()(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coefficient;
    for (std::size_t j = 0; j < t.powers.size(); ++j) {
      for (int k = 0; k < t.powers[j]; ++k) v *= x[j];
    }
    for (const auto& f : t.factors) {
      const double arg = f.sign * x[f.axis];
      switch (f.kind) {
        case Factor::Kind::exp: v *= std::exp(arg); break;
        case Factor::Kind::sin: v *= std::sin(arg); break;
        case Factor::Kind::cos: v *= std::cos(arg); break;
      }
    }
    sum += v;
  }
  return sum;
}

ProblemSpec ProblemFile::to_problem() const {
  std::optional<ScalarField> analytic;
  if (solution) analytic = ScalarField(*solution);
  BoundarySet boundary_set = lambda ? BoundarySet(boundary, boundary_values, *lambda)
                                    : BoundarySet::with_selected_lambda(boundary, boundary_values);
  return {dimension, Operator::laplacian, ScalarField(source), std::move(boundary_set), interior,
          std::move(analytic)};
}

ProblemFile parse_problem_file(const json& j, const std::filesystem::path& base_dir,
                               const std::string& name) {
  const int schema = require(j, "schema", name).get<int>();
  if (schema != 1) throw ConfigError(name + ": unsupported schema version " + std::to_string(schema));
  const auto dim = require(j, "dimension", name).get<std::size_t>();
  if (dim == 0) throw ConfigError(name + ": dimension must be positive");
  const auto op = j.value("operator", std::string("laplacian"));
  if (op != "laplacian") throw ConfigError(name + ": unsupported operator '" + op + "'");

  ProblemFile pf{name,
                 dim,
                 TermExpression::from_json(require(j, "source", name), dim),
                 std::nullopt,
                 std::nullopt,
                 load_point_source(require(j, "boundary", name), dim, PointTag::boundary, base_dir,
                                   name + ".boundary"),
                 {},
                 load_point_source(require(j, "interior", name), dim, PointTag::interior, base_dir,
                                   name + ".interior"),
                 std::nullopt};
  if (j.contains("solution")) pf.solution = TermExpression::from_json(j.at("solution"), dim);
  if (j.contains("hidden")) pf.hidden_count = j.at("hidden").get<std::size_t>();
  if (j.contains("lambda")) pf.lambda = j.at("lambda").get<double>();

  std::optional<TermExpression> values_expr;
  if (j.contains("boundary_values")) {
    const auto& bv = j.at("boundary_values");
    if (bv.is_array() && !bv.empty() && bv.front().is_number()) {
      pf.boundary_values = bv.get<std::vector<double>>();
      if (pf.boundary_values.size() != pf.boundary.size()) {
        throw ConfigError(name + ": " + std::to_string(pf.boundary_values.size()) +
                          " boundary values for " + std::to_string(pf.boundary.size()) + " points");
      }
    } else {
      values_expr = TermExpression::from_json(bv, dim);
    }
  } else if (pf.solution) {
    values_expr = pf.solution;
  } else {
    throw ConfigError(name + ": needs 'boundary_values' or an analytic 'solution'");
  }
  if (values_expr) {
    for (std::size_t i = 0; i < pf.boundary.size(); ++i) {
      pf.boundary_values.push_back((*values_expr)(pf.boundary[i]));
    }
  }
  return pf;
}

ProblemFile load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("problem file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    return parse_problem_file(j, path.parent_path(), path.filename().string());
  } catch (const json::exception& e) {
    throw ConfigError("problem file '" + path.string() + "': " + e.what());
  }
}

}  // namespace collonet
