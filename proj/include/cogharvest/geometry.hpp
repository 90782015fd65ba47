#pragma once

// Homogeneous Poisson point processes on a disk window and the kernels that
// consume them (nearest distance, disk-union membership, shot noise).
//
// The window truncates the plane. For unit-power shot noise at the center
// the expected contribution of points beyond radius W is
// 2*pi*lambda*W^(2-alpha)/(alpha-2); at alpha = 4, lambda <= 0.1, W = 50 that
// is below 3e-5 of the unit received power.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cogharvest/rng.hpp"

namespace cogharvest {

inline constexpr double kDefaultWindowRadius = 50.0;

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

double distance(Point2D a, Point2D b);

struct Disk {
  Point2D center;
  double radius = 0.0;

  bool contains(Point2D p) const;
  friend bool operator==(const Disk&, const Disk&) = default;
};

/// Disk of `radius` centered at the origin, optionally minus an excluded disk.
class Window {
public:
  explicit Window(double radius = kDefaultWindowRadius, std::optional<Disk> excluded = std::nullopt);

  double radius() const noexcept { return radius_; }
  const std::optional<Disk>& excluded() const noexcept { return excluded_; }

  /// Strictly inside the excluded disk counts as outside the window.
  bool admits(Point2D p) const;
  /// Area of window minus excluded disk.
  double admissible_area() const;

  Window scaled(double a) const;

  friend bool operator==(const Window&, const Window&) = default;

private:
  double radius_;
  std::optional<Disk> excluded_;
};

/// One realization of an HPPP. Coordinates are stored as separate x / y
/// arrays for the vector kernels.
class PointSample {
public:
  PointSample(double density, Window window);
  PointSample(double density, Window window, std::vector<double> xs, std::vector<double> ys);

  double density() const noexcept { return density_; }
  const Window& window() const noexcept { return window_; }
  std::size_t size() const noexcept { return xs_.size(); }
  bool empty() const noexcept { return xs_.empty(); }
  Point2D point(std::size_t i) const { return {xs_[i], ys_[i]}; }
  std::span<const double> xs() const noexcept { return xs_; }
  std::span<const double> ys() const noexcept { return ys_; }

  void push_back(Point2D p);
  void set_point(std::size_t i, Point2D p);

  friend bool operator==(const PointSample&, const PointSample&) = default;

private:
  double density_;
  Window window_;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Poisson count with mean density * admissible area, points i.i.d. uniform
/// over the admissible region. Points inside the excluded disk are dropped
/// from a sample of the full disk, which is the exact restriction of the
/// process.
PointSample sample_hppp(double density, const Window& window, StreamEngine& engine);
PointSample sample_hppp(double density, const Window& window, RngStream rng);

/// Uniform point of the full disk window (rejection from the bounding square).
Point2D sample_uniform_in_disk(double radius, StreamEngine& engine);

/// Squared distances to the window center of an HPPP on a full disk of
/// `radius`. Shot noise at the center needs nothing else.
void sample_hppp_center_sq_distances(double density, double radius, StreamEngine& engine,
                                     std::vector<double>& out);

/// nullopt for an empty sample ("no neighbor", i.e. infinite distance).
std::optional<double> nearest_distance(Point2D p, const PointSample& s);

/// True iff p lies in some closed disk of `radius` around a point of `centers`.
bool in_disk_union(Point2D p, const PointSample& centers, double radius);

/// power * sum over points of |at - point|^-alpha, skipping `exclude` if given.
/// Throws SingularityError when a counted point coincides with `at`.
double shot_noise(Point2D at, const PointSample& s, double alpha, double power,
                  std::optional<Point2D> exclude = std::nullopt);

/// Replaces every point that sits exactly on `at` by a fresh admissible
/// point. Returns the number of replacements.
std::size_t resample_coincident(PointSample& s, Point2D at, StreamEngine& engine);

/// Coordinates times a; density / a^2; window scaled by a.
PointSample scale_points(const PointSample& s, double a);

/// Union of two samples on identical windows; densities add.
PointSample superpose(const PointSample& s1, const PointSample& s2);

}  // namespace cogharvest
