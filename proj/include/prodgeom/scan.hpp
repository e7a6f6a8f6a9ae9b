#pragma once

/**
 * @file scan.hpp
 * @brief Tabulates value, W, Gauss-Kronecker curvature, flatness residual
 * and one Hicks elasticity over a log-spaced grid.
 *
 * Rows may be computed on several threads; each thread writes only its own
 * slots, so the result is ordered by grid index regardless of scheduling.
 */

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

#include "prodgeom/elasticity.hpp"
#include "prodgeom/geometry.hpp"
#include "prodgeom/prodfun.hpp"
#include "prodgeom/sampling.hpp"

namespace prodgeom {

struct ScanRow {
  Point x;
  double value;
  double W;
  double gauss_kronecker;
  double flatness_residual;
  HicksValue hicks;
};

inline ScanRow scan_row(const FunctionExpr& expr, const Point& x, std::size_t i, std::size_t j) {
  const Jet2 jet = evaluate_jet(expr, x);
  const GraphGeometry g = graph_geometry_from_jet(jet, x);
  return {x, jet.value, g.W, g.gauss_kronecker, g.flatness_residual, detail::hicks_from_jet(jet, x, i, j)};
}

/// per_axis^n rows over the box; `threads` <= 1 runs serially.
inline std::vector<ScanRow> scan_grid(const FunctionExpr& expr, const Box& box, std::size_t per_axis,
                                      std::size_t pair_i = 0, std::size_t pair_j = 1, std::size_t threads = 1) {
  if (box.size() != expr.input_count()) throw ValidationError("scan: box dimension does not match input count");
  detail::check_pair(expr.input_count(), pair_i, pair_j);
  const auto grid = log_grid(box, per_axis);
  std::vector<ScanRow> rows(grid.size());

  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, grid.size()));
  if (workers == 1) {
    for (std::size_t k = 0; k < grid.size(); ++k) rows[k] = scan_row(expr, grid[k], pair_i, pair_j);
    return rows;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < grid.size(); k += workers) rows[k] = scan_row(expr, grid[k], pair_i, pair_j);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace prodgeom
