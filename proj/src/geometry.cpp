#include "cogharvest/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cogharvest/error.hpp"
#include "cogharvest/simd/kernels.hpp"

namespace cogharvest {

namespace {

bool finite_point(Point2D p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Area of the intersection of two disks with radii r1, r2 at center distance d.
double disk_intersection_area(double r1, double r2, double d) {
  if (r1 <= 0.0 || r2 <= 0.0 || d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return std::numbers::pi * r * r;
  }
  const double a1 = std::acos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1));
  const double a2 = std::acos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2));
  const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(k, 0.0));
}

}  // namespace

double distance(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool Disk::contains(Point2D p) const {
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  return dx * dx + dy * dy <= radius * radius;
}

Window::Window(double radius, std::optional<Disk> excluded) : radius_(radius), excluded_(excluded) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("window radius must be finite and > 0");
  if (excluded_) {
    if (!(excluded_->radius >= 0.0) || !std::isfinite(excluded_->radius) || !finite_point(excluded_->center)) {
      throw InvalidArgument("excluded disk must have a finite center and radius >= 0");
    }
  }
}

bool Window::admits(Point2D p) const {
  if (p.x * p.x + p.y * p.y > radius_ * radius_) return false;
  if (excluded_) {
    const double dx = p.x - excluded_->center.x;
    const double dy = p.y - excluded_->center.y;
    if (dx * dx + dy * dy < excluded_->radius * excluded_->radius) return false;
  }
  return true;
}

double Window::admissible_area() const {
  double area = std::numbers::pi * radius_ * radius_;
  if (excluded_) {
    area -= disk_intersection_area(radius_, excluded_->radius,
                                   std::hypot(excluded_->center.x, excluded_->center.y));
  }
  return std::max(area, 0.0);
}

Window Window::scaled(double a) const {
  std::optional<Disk> ex;
  if (excluded_) ex = Disk{{excluded_->center.x * a, excluded_->center.y * a}, excluded_->radius * a};
  return Window(radius_ * a, ex);
}

PointSample::PointSample(double density, Window window) : density_(density), window_(std::move(window)) {}

PointSample::PointSample(double density, Window window, std::vector<double> xs, std::vector<double> ys)
    : density_(density), window_(std::move(window)), xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size()) throw InvalidArgument("coordinate arrays differ in length");
}

void PointSample::push_back(Point2D p) {
  xs_.push_back(p.x);
  ys_.push_back(p.y);
}

void PointSample::set_point(std::size_t i, Point2D p) {
  xs_.at(i) = p.x;
  ys_.at(i) = p.y;
}

Point2D sample_uniform_in_disk(double radius, StreamEngine& engine) {
  for (;;) {
    const double x = 2.0 * engine.uniform() - 1.0;
    const double y = 2.0 * engine.uniform() - 1.0;
    if (x * x + y * y <= 1.0) return {x * radius, y * radius};
  }
}

PointSample sample_hppp(double density, const Window& window, StreamEngine& engine) {
  if (!(density > 0.0) || !std::isfinite(density)) throw InvalidArgument("HPPP density must be finite and > 0");
  PointSample sample(density, window);
  const double r = window.radius();
  const std::uint64_t n = engine.poisson(density * std::numbers::pi * r * r);
  for (std::uint64_t i = 0; i < n; ++i) {
    const Point2D p = sample_uniform_in_disk(r, engine);
    if (window.admits(p)) sample.push_back(p);
  }
  return sample;
}

PointSample sample_hppp(double density, const Window& window, RngStream rng) {
  StreamEngine engine(rng, 0);
  return sample_hppp(density, window, engine);
}

void sample_hppp_center_sq_distances(double density, double radius, StreamEngine& engine,
                                     std::vector<double>& out) {
  out.clear();
  if (density == 0.0) return;
  const double r2 = radius * radius;
  const std::uint64_t n = engine.poisson(density * std::numbers::pi * r2);
  out.resize(n);
  // |X|^2 / R^2 is uniform on (0, 1] for X uniform on the disk.
  for (auto& d2 : out) d2 = r2 * engine.uniform_pos();
}

std::optional<double> nearest_distance(Point2D p, const PointSample& s) {
  if (s.empty()) return std::nullopt;
  return std::sqrt(simd::min_sq_distance(s.xs(), s.ys(), p.x, p.y));
}

bool in_disk_union(Point2D p, const PointSample& centers, double radius) {
  if (centers.empty()) return false;
  return simd::min_sq_distance(centers.xs(), centers.ys(), p.x, p.y) <= radius * radius;
}

double shot_noise(Point2D at, const PointSample& s, double alpha, double power, std::optional<Point2D> exclude) {
  if (!(alpha > 2.0)) throw InvalidArgument("path-loss exponent must exceed 2");
  if (!(power > 0.0)) throw InvalidArgument("shot-noise power must be > 0");
  if (s.empty()) return 0.0;

  const double half_alpha = 0.5 * alpha;
  double sum = 0.0;
  if (exclude) {
    std::vector<double> xs, ys;
    xs.reserve(s.size());
    ys.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.point(i) == *exclude) continue;
      xs.push_back(s.xs()[i]);
      ys.push_back(s.ys()[i]);
    }
    sum = simd::shot_noise_sum(xs, ys, at.x, at.y, half_alpha);
  } else {
    sum = simd::shot_noise_sum(s.xs(), s.ys(), at.x, at.y, half_alpha);
  }
  if (std::isinf(sum)) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.point(i) == at && !(exclude && s.point(i) == *exclude)) throw SingularityError(i);
    }
  }
  return power * sum;
}

std::size_t resample_coincident(PointSample& s, Point2D at, StreamEngine& engine) {
  std::size_t replaced = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    while (s.point(i) == at) {
      Point2D p;
      do {
        p = sample_uniform_in_disk(s.window().radius(), engine);
      } while (!s.window().admits(p));
      s.set_point(i, p);
      ++replaced;
    }
  }
  return replaced;
}

PointSample scale_points(const PointSample& s, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("scale factor must be finite and > 0");
  std::vector<double> xs(s.xs().begin(), s.xs().end());
  std::vector<double> ys(s.ys().begin(), s.ys().end());
  for (auto& x : xs) x *= a;
  for (auto& y : ys) y *= a;
  return PointSample(s.density() / (a * a), s.window().scaled(a), std::move(xs), std::move(ys));
}

PointSample superpose(const PointSample& s1, const PointSample& s2) {
  if (!(s1.window() == s2.window())) throw InvalidArgument("superposed samples must share a window");
  std::vector<double> xs(s1.xs().begin(), s1.xs().end());
  std::vector<double> ys(s1.ys().begin(), s1.ys().end());
  xs.insert(xs.end(), s2.xs().begin(), s2.xs().end());
  ys.insert(ys.end(), s2.ys().begin(), s2.ys().end());
  return PointSample(s1.density() + s2.density(), s1.window(), std::move(xs), std::move(ys));
}

}  // namespace cogharvest
