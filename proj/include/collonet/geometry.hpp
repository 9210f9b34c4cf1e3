#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace collonet {

enum class PointTag { boundary, interior, unspecified };

std::string to_string(PointTag tag);
PointTag point_tag_from_string(const std::string& name);

/// A list of n-dimensional points stored contiguously, one point after another.
class PointCloud {
public:
  explicit PointCloud(std::size_t dim, PointTag tag = PointTag::unspecified);
  PointCloud(std::size_t dim, std::vector<double> coords,
             PointTag tag = PointTag::unspecified);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }
  PointTag tag() const noexcept { return tag_; }
  void set_tag(PointTag tag) noexcept { tag_ = tag; }

  std::span<const double> operator[](std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> coords() const noexcept { return coords_; }

  void push_back(std::span<const double> point);
  void push_back(std::initializer_list<double> point) {
    push_back(std::span<const double>(point.begin(), point.size()));
  }

  /// Serialize as `# dim=n tag=<tag>` then one comma-separated point per line.
  void write_csv(std::ostream& out) const;
  static PointCloud read_csv(std::istream& in);

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
  std::size_t dim_;
  std::vector<double> coords_;
  PointTag tag_;
};

double distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Closest pair of distinct indices (i < j) and their distance.
struct ClosestPair {
  std::size_t first;
  std::size_t second;
  double distance;
};
ClosestPair closest_pair(const PointCloud& points);

/// λ = 1/a² with a the minimum pairwise distance.
double select_lambda(const PointCloud& points);

/// Greedy in-order scan keeping a point only if it is farther than `tol`
/// from every point already kept.
PointCloud deduplicate(const PointCloud& points, double tol);

inline constexpr double kDuplicateTolerance = 1e-9;

PointCloud rectangle_boundary(int m_x, int m_y);

struct AxisBounds {
  double lo;
  double hi;
};

/// Strict-interior tensor grid: per axis lo + (hi-lo)·i/subdivisions, i = 1..subdivisions-1.
/// The first axis varies slowest.
PointCloud interior_grid_rectangle(int subdivisions, std::span<const AxisBounds> bounds);

std::array<double, 2> polar_to_cartesian(double r, double phi);

/// Physics convention: θ is the polar angle from +z, φ the azimuth.
std::array<double, 3> spherical_to_cartesian(double r, double phi, double theta);

/// m points at φ_i = 2πi/m, i = 1..m.
PointCloud circle_boundary(int m, double radius);

/// Raw (pre-dedup) face lattices of the unit cube: 6 faces of m×m points.
PointCloud box_faces_3d(int m);
/// Deduplicated unit-cube surface lattice; m=7 gives 218 points.
PointCloud box_boundary_3d(int m);

/// Raw face lattices of the (r, φ, θ) box [0.5,1]×[0,π/2]×[0,π/2] mapped to
/// Cartesian coordinates.
PointCloud spherical_sector_faces(int m);
/// Deduplicated with the close-point tolerance; m=7 gives 176 points.
PointCloud spherical_sector_boundary(int m);

/// Boundary of the quarter disk built from the polar rectangle
/// [0,1]×[0,π/2]: radial edges with m_r points, arc with m_phi points.
PointCloud quarter_disk_boundary(int m_r, int m_phi);

/// Smallest distance between a point of `a` and a point of `b`.
double min_cross_distance(const PointCloud& a, const PointCloud& b);

}  // namespace collonet
