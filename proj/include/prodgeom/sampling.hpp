#pragma once

/**
 * @file sampling.hpp
 * @brief Domain boxes in the positive orthant and deterministic log-uniform
 * sampling over them.
 */

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "prodgeom/errors.hpp"

namespace prodgeom {

using Point = std::vector<double>;

/// Default seed for every sampled check.
inline constexpr std::uint64_t kDefaultSeed = 0;

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  /// The cube [lo, hi]^n.
  static Box cube(std::size_t n, double lo, double hi) {
    return {std::vector<double>(n, lo), std::vector<double>(n, hi)};
  }

  std::size_t size() const { return lo.size(); }

  /// Throws unless bounds are strictly positive with lo < hi on every axis.
  void validate() const {
    if (lo.empty() || lo.size() != hi.size()) {
      throw ValidationError("box: lower and upper bounds must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (!(lo[i] > 0.0) || !std::isfinite(hi[i])) {
        throw ValidationError("box: axis " + std::to_string(i) + " leaves the positive orthant");
      }
      if (!(lo[i] < hi[i])) {
        throw ValidationError("box: axis " + std::to_string(i) + " has lo >= hi");
      }
    }
  }

  Point center() const {
    Point c(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw. Kept
/// independent of std::uniform_real_distribution, whose output is
/// implementation-defined.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Log-uniform point in the box.
inline Point log_uniform_point(const Box& box, std::mt19937_64& rng) {
  Point p(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double a = std::log(box.lo[i]);
    const double b = std::log(box.hi[i]);
    p[i] = std::exp(a + (b - a) * unit_uniform(rng));
  }
  return p;
}

/// `count` log-uniform points drawn from mt19937_64(seed).
inline std::vector<Point> log_uniform_samples(const Box& box, std::size_t count,
                                              std::uint64_t seed = kDefaultSeed) {
  box.validate();
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(log_uniform_point(box, rng));
  return out;
}

/// `per_axis` geometrically spaced values on [lo, hi]; a single value is
/// the geometric mean.
inline std::vector<double> geometric_axis(double lo, double hi, std::size_t per_axis) {
  std::vector<double> out;
  if (per_axis == 0) return out;
  if (per_axis == 1) {
    out.push_back(std::sqrt(lo * hi));
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t k = 0; k < per_axis; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(per_axis - 1);
    out.push_back(k + 1 == per_axis ? hi : (k == 0 ? lo : std::exp(a + (b - a) * t)));
  }
  return out;
}

/// Full tensor grid, per_axis^n points, first axis varying slowest.
inline std::vector<Point> log_grid(const Box& box, std::size_t per_axis) {
  box.validate();
  std::vector<std::vector<double>> axes;
  for (std::size_t i = 0; i < box.size(); ++i) axes.push_back(geometric_axis(box.lo[i], box.hi[i], per_axis));
  std::vector<Point> out;
  if (per_axis == 0) return out;
  std::vector<std::size_t> idx(box.size(), 0);
  while (true) {
    Point p(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) p[i] = axes[i][idx[i]];
    out.push_back(std::move(p));
    std::size_t axis = box.size();
    while (axis > 0) {
      --axis;
      if (++idx[axis] < per_axis) break;
      idx[axis] = 0;
      if (axis == 0) return out;
    }
  }
}

}  // namespace prodgeom
