#include "collonet/geometry.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "collonet/error.hpp"
#include "collonet/format.hpp"

namespace collonet {

std::string to_string(PointTag tag) {
  switch (tag) {
    case PointTag::boundary: return "boundary";
    case PointTag::interior: return "interior";
    default: return "unspecified";
  }
}

PointTag point_tag_from_string(const std::string& name) {
  if (name == "boundary") return PointTag::boundary;
  if (name == "interior") return PointTag::interior;
  if (name == "unspecified") return PointTag::unspecified;
  throw std::invalid_argument("unknown point tag '" + name + "'");
}

PointCloud::PointCloud(std::size_t dim, PointTag tag) : dim_(dim), tag_(tag) {
  if (dim_ == 0) throw std::invalid_argument("point dimension must be positive");
}

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords, PointTag tag)
    : dim_(dim), coords_(std::move(coords)), tag_(tag) {
  if (dim_ == 0) throw std::invalid_argument("point dimension must be positive");
  if (coords_.size() % dim_ != 0) {
    throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) throw std::invalid_argument("point cloud contains a non-finite coordinate");
  }
}

void PointCloud::push_back(std::span<const double> point) {
  if (point.size() != dim_) {
    throw std::invalid_argument("point of dimension " + std::to_string(point.size()) +
                                " added to a " + std::to_string(dim_) + "-D cloud");
  }
  for (double c : point) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
  }
  coords_.insert(coords_.end(), point.begin(), point.end());
}

void PointCloud::write_csv(std::ostream& out) const {
  out << "# dim=" << dim_ << " tag=" << to_string(tag_) << '\n';
  for (std::size_t i = 0; i < size(); ++i) {
    const auto p = (*this)[i];
    for (std::size_t j = 0; j < dim_; ++j) {
      if (j) out << ',';
      out << format_double(p[j]);
    }
    out << '\n';
  }
}

PointCloud PointCloud::read_csv(std::istream& in) {
  std::string line;
  std::size_t dim = 0;
  PointTag tag = PointTag::unspecified;
  std::vector<double> coords;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string field;
      while (header >> field) {
        if (field.rfind("dim=", 0) == 0) dim = std::stoul(field.substr(4));
        else if (field.rfind("tag=", 0) == 0) tag = point_tag_from_string(field.substr(4));
      }
      continue;
    }
    std::vector<double> row;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) row.push_back(parse_double(cell));
    if (dim == 0) dim = row.size();
    if (row.size() != dim) {
      throw std::invalid_argument("line " + std::to_string(line_no) + " has " +
                                  std::to_string(row.size()) + " coordinates, expected " +
                                  std::to_string(dim));
    }
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim == 0) throw std::invalid_argument("point file has neither a dim header nor any points");
  return {dim, std::move(coords), tag};
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return acc;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

ClosestPair closest_pair(const PointCloud& points) {
  if (points.size() < 2) throw std::invalid_argument("closest pair needs at least 2 points");
  ClosestPair best{0, 1, std::numeric_limits<double>::infinity()};
  double best2 = best.distance;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d2 = squared_distance(points[i], points[j]);
      if (d2 < best2) {
        best2 = d2;
        best = {i, j, 0.0};
      }
    }
  }
  best.distance = std::sqrt(best2);
  return best;
}

double select_lambda(const PointCloud& points) {
  if (points.size() < 2) throw std::invalid_argument("lambda selection needs at least 2 points");
  const auto pair = closest_pair(points);
  if (pair.distance == 0.0) throw DegenerateGeometryError(pair.first, pair.second, 0.0);
  return 1.0 / (pair.distance * pair.distance);
}

PointCloud deduplicate(const PointCloud& points, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("dedup tolerance must be positive");
  PointCloud kept(points.dim(), points.tag());
  const double tol2 = tol * tol;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool unique = true;
    for (std::size_t k = 0; k < kept.size() && unique; ++k) {
      unique = squared_distance(points[i], kept[k]) > tol2;
    }
    if (unique) kept.push_back(points[i]);
  }
  return kept;
}

PointCloud rectangle_boundary(int m_x, int m_y) {
  if (m_x < 2 || m_y < 2) throw std::invalid_argument("rectangle boundary needs m_x, m_y >= 2");
  const double dx = 1.0 / (m_x - 1);
  const double dy = 1.0 / (m_y - 1);
  PointCloud raw(2, PointTag::boundary);
  for (int i = 0; i < m_x; ++i) raw.push_back({i * dx, 0.0});
  for (int i = 0; i < m_x; ++i) raw.push_back({i * dx, 1.0});
  for (int i = 0; i < m_y; ++i) raw.push_back({0.0, i * dy});
  for (int i = 0; i < m_y; ++i) raw.push_back({1.0, i * dy});
  return deduplicate(raw, kDuplicateTolerance);
}

PointCloud interior_grid_rectangle(int subdivisions, std::span<const AxisBounds> bounds) {
  if (subdivisions < 2) throw std::invalid_argument("interior grid needs at least 2 subdivisions");
  if (bounds.empty()) throw std::invalid_argument("interior grid needs at least one axis");
  const std::size_t dim = bounds.size();
  const std::size_t per_axis = static_cast<std::size_t>(subdivisions - 1);
  std::size_t total = 1;
  for (std::size_t a = 0; a < dim; ++a) total *= per_axis;

  PointCloud grid(dim, PointTag::interior);
  std::vector<double> p(dim);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t a = dim; a-- > 0;) {
      const std::size_t i = rem % per_axis + 1;
      rem /= per_axis;
      p[a] = bounds[a].lo + (bounds[a].hi - bounds[a].lo) * static_cast<double>(i) / subdivisions;
    }
    grid.push_back(p);
  }
  return grid;
}

std::array<double, 2> polar_to_cartesian(double r, double phi) {
  if (r < 0.0) throw std::invalid_argument("radius must be non-negative");
  return {r * std::cos(phi), r * std::sin(phi)};
}

std::array<double, 3> spherical_to_cartesian(double r, double phi, double theta) {
  if (r < 0.0) throw std::invalid_argument("radius must be non-negative");
  const double st = std::sin(theta);
  return {r * st * std::cos(phi), r * st * std::sin(phi), r * std::cos(theta)};
}

PointCloud circle_boundary(int m, double radius) {
  if (m < 3) throw std::invalid_argument("circle boundary needs m >= 3");
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  PointCloud out(2, PointTag::boundary);
  for (int i = 1; i <= m; ++i) {
    const auto p = polar_to_cartesian(radius, 2.0 * std::numbers::pi * i / m);
    out.push_back(p);
  }
  return out;
}

namespace {

// Six faces of the box [lo0,hi0]×[lo1,hi1]×[lo2,hi2], each an m×m lattice.
template <typename Map>
PointCloud box_faces(int m, std::array<AxisBounds, 3> box, Map&& map) {
  if (m < 2) throw std::invalid_argument("3-D boundary needs m >= 2");
  PointCloud raw(3, PointTag::boundary);
  auto coord = [&](int axis, int i) {
    return box[axis].lo + (box[axis].hi - box[axis].lo) * i / (m - 1);
  };
  for (int fixed = 2; fixed >= 0; --fixed) {
    const int a = fixed == 0 ? 1 : 0;
    const int b = fixed == 2 ? 1 : 2;
    for (double side : {box[fixed].lo, box[fixed].hi}) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          std::array<double, 3> q{};
          q[fixed] = side;
          q[a] = coord(a, i);
          q[b] = coord(b, j);
          raw.push_back(map(q));
        }
      }
    }
  }
  return raw;
}

}  // namespace

PointCloud box_faces_3d(int m) {
  return box_faces(m, {AxisBounds{0, 1}, AxisBounds{0, 1}, AxisBounds{0, 1}},
                   [](const std::array<double, 3>& q) { return q; });
}

PointCloud box_boundary_3d(int m) {
  return deduplicate(box_faces_3d(m), 0.25 / (m - 1));
}

PointCloud spherical_sector_faces(int m) {
  constexpr double half_pi = std::numbers::pi / 2;
  return box_faces(m, {AxisBounds{0.5, 1.0}, AxisBounds{0, half_pi}, AxisBounds{0, half_pi}},
                   [](const std::array<double, 3>& q) {
                     return spherical_to_cartesian(q[0], q[1], q[2]);
                   });
}

PointCloud spherical_sector_boundary(int m) {
  return deduplicate(spherical_sector_faces(m), 0.25 * 0.5 / (m - 1));
}

PointCloud quarter_disk_boundary(int m_r, int m_phi) {
  if (m_r < 2 || m_phi < 2) throw std::invalid_argument("quarter disk needs m_r, m_phi >= 2");
  constexpr double half_pi = std::numbers::pi / 2;
  const double dr = 1.0 / (m_r - 1);
  const double dphi = half_pi / (m_phi - 1);
  PointCloud raw(2, PointTag::boundary);
  for (int i = 0; i < m_r; ++i) raw.push_back(polar_to_cartesian(i * dr, 0.0));
  for (int i = 0; i < m_r; ++i) raw.push_back(polar_to_cartesian(i * dr, half_pi));
  for (int i = 0; i < m_phi; ++i) raw.push_back(polar_to_cartesian(0.0, i * dphi));
  for (int i = 0; i < m_phi; ++i) raw.push_back(polar_to_cartesian(1.0, i * dphi));
  // cos(π/2) is not exactly zero; the tolerance absorbs it.
  return deduplicate(raw, kDuplicateTolerance);
}

double min_cross_distance(const PointCloud& a, const PointCloud& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      best = std::min(best, squared_distance(a[i], b[j]));
    }
  }
  return std::sqrt(best);
}

}  // namespace collonet
