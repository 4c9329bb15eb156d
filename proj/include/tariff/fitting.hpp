#pragma once

/**
 * @file fitting.hpp
 * @brief Two-part tariff approximation of a unit-price curve.
 *
 * A plan's unit-price curve p(x) is sampled on a grid and approximated by the
 * hyperbola f/x + v. The parameters minimize
 *
 *   Q(f, v) = sum_i (f / x_i + v - p_i)^2
 *
 * which has the closed-form solution
 *
 *   f = [n S(p/x) - S(p) S(1/x)] / [n S(1/x^2) - S(1/x)^2]
 *   v = [S(p) - f S(1/x)] / n
 *
 * brute_force_fit() minimizes the same objective by exhaustive grid search
 * and serves as an independent cross-check.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tariff/errors.hpp"
#include "tariff/money.hpp"
#include "tariff/plans.hpp"
#include "tariff/pricing.hpp"

namespace tariff {

/// Evenly spaced capacities start, start+step, ... up to stop (inclusive).
class SampleGrid {
 public:
  SampleGrid(double start, double stop, double step) : start_(start), stop_(stop), step_(step) {
    if (!(std::isfinite(start) && std::isfinite(stop) && std::isfinite(step)))
      throw InvalidArgument("grid bounds must be finite");
    if (!(start > 0.0)) throw InvalidArgument("grid start must be positive");
    if (!(start <= stop)) throw InvalidArgument("grid start must not exceed stop");
    if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
  }

  double start() const noexcept { return start_; }
  double stop() const noexcept { return stop_; }
  double step() const noexcept { return step_; }

  // Points are computed by index, not accumulation; a relative slack of 1e-12
  // keeps `stop` itself on the grid despite rounding in (stop - start) / step.
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::floor((stop_ - start_) / step_ * (1.0 + 1e-12) + 1e-9)) + 1;
  }
  double at(std::size_t i) const noexcept { return start_ + static_cast<double>(i) * step_; }

  std::vector<double> points() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i);
    return out;
  }

 private:
  double start_;
  double stop_;
  double step_;
};

/// Upper end used by default_grid() for plans without a capacity limit.
inline constexpr double kUnboundedDefaultStopGb = 10000.0;

/// 1 GB steps from the first charged capacity (just above the free
/// allowance) to the plan's maximum.
inline SampleGrid default_grid(const PricingPlan& plan) {
  double start = 1.0;
  if (const auto* b = std::get_if<BundlePlan>(&plan.model)) start = b->free_gb.value() + 1.0;
  auto cap = max_capacity(plan);
  double stop = cap ? cap->value() : kUnboundedDefaultStopGb;
  if (stop < start) throw EmptySample("plan '" + plan.id + "' has no chargeable capacity");
  return SampleGrid(start, stop, 1.0);
}

/// Unit price at every grid point the plan covers, converted to `currency`.
inline std::vector<UnitPricePoint> sample_unit_curve(const PricingPlan& plan, const SampleGrid& grid,
                                                     Currency currency = Currency::EUR) {
  if (!is_priceable(plan)) throw UnpriceablePlan("plan '" + plan.id + "' has no published fees");
  if (!has_unit_price(plan)) throw UndefinedUnitPrice("plan '" + plan.id + "' has unlimited capacity");
  std::vector<UnitPricePoint> out;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    CapacityGB x(grid.at(i));
    if (!covers(plan, x)) break;
    out.push_back({x, unit_price(plan, x, currency)});
  }
  if (out.empty()) throw EmptySample("no grid point lies within the capacity of '" + plan.id + "'");
  return out;
}

struct TwoPartFit {
  double fixed_fee = 0.0;       // f-hat, per month
  double marginal_price = 0.0;  // v-hat, per GB per month
  double rss = 0.0;
  std::size_t n = 0;
  Currency currency = Currency::EUR;

  /// Negative estimates are reported unclamped; clamping would break the
  /// normal equations.
  bool has_negative_estimate() const noexcept { return fixed_fee < 0.0 || marginal_price < 0.0; }
};

namespace detail {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double value) noexcept {
    double t = sum_ + value;
    if (std::fabs(sum_) >= std::fabs(value))
      comp_ += (sum_ - t) + value;
    else
      comp_ += (value - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline Currency common_currency(std::span<const UnitPricePoint> points) {
  Currency c = points.front().p.currency();
  for (const auto& pt : points)
    if (pt.p.currency() != c) throw CurrencyMismatch("fit points must share one currency");
  return c;
}

}  // namespace detail

/// Q(f, v): squared distance between the samples and the hyperbola f/x + v.
inline double residual_q(std::span<const UnitPricePoint> points, double fixed_fee, double marginal_price) {
  if (points.empty()) throw InvalidArgument("residual_q needs at least one point");
  detail::CompensatedSum q;
  for (const auto& pt : points) {
    double r = fixed_fee / pt.x.value() + marginal_price - pt.p.amount();
    q.add(r * r);
  }
  return q.value();
}

/// The two partial derivatives of Q (halved): sum r_i and sum r_i / x_i.
struct NormalEquationResiduals {
  double sum = 0.0;
  double weighted_sum = 0.0;
};

inline NormalEquationResiduals normal_equation_residuals(std::span<const UnitPricePoint> points,
                                                         double fixed_fee, double marginal_price) {
  detail::CompensatedSum s, w;
  for (const auto& pt : points) {
    double r = fixed_fee / pt.x.value() + marginal_price - pt.p.amount();
    s.add(r);
    w.add(r / pt.x.value());
  }
  return {s.value(), w.value()};
}

/// Closed-form least-squares estimate of (f, v). Throws DegenerateDesign when
/// fewer than two distinct capacities are given.
inline TwoPartFit fit_two_part(std::span<const UnitPricePoint> points) {
  if (points.size() < 2) throw DegenerateDesign("two-part fit needs at least two points");
  const Currency currency = detail::common_currency(points);

  bool distinct = false;
  for (const auto& pt : points) {
    if (!(pt.x.value() > 0.0)) throw InvalidArgument("fit points need positive capacity");
    distinct = distinct || pt.x != points.front().x;
  }
  if (!distinct) throw DegenerateDesign("all sample capacities are equal");

  detail::CompensatedSum s_inv, s_inv2, s_p, s_p_inv;
  for (const auto& pt : points) {
    const double inv = 1.0 / pt.x.value();
    const double p = pt.p.amount();
    s_inv.add(inv);
    s_inv2.add(inv * inv);
    s_p.add(p);
    s_p_inv.add(p * inv);
  }
  const double n = static_cast<double>(points.size());
  const double denom = n * s_inv2.value() - s_inv.value() * s_inv.value();
  if (!(denom > 0.0)) throw DegenerateDesign("normal equations are singular");

  TwoPartFit fit;
  fit.fixed_fee = (n * s_p_inv.value() - s_p.value() * s_inv.value()) / denom;
  fit.marginal_price = (s_p.value() - fit.fixed_fee * s_inv.value()) / n;
  fit.rss = residual_q(points, fit.fixed_fee, fit.marginal_price);
  fit.n = points.size();
  fit.currency = currency;
  return fit;
}

/// Search box for brute_force_fit(). A zero-width range pins that parameter.
struct FitBox {
  double fixed_fee_lo = 0.0;
  double fixed_fee_hi = 0.0;
  double marginal_lo = 0.0;
  double marginal_hi = 0.0;
};

/// Exhaustive grid search for the minimizer of Q.
///
/// The first pass evaluates resolution x resolution candidates over `box`.
/// Each refinement pass searches a window of one previous cell either side of
/// the incumbent (clipped to `box`) at the same resolution. If the best point
/// of a window lies on an unclipped window edge, the window is re-centred on
/// it and searched again before moving on. Ties keep the smallest f, then the
/// smallest v.
inline TwoPartFit brute_force_fit(std::span<const UnitPricePoint> points, const FitBox& box,
                                  int resolution, int refinement_passes = 2) {
  if (points.empty()) throw InvalidArgument("brute_force_fit needs at least one point");
  if (resolution < 2) throw InvalidArgument("resolution must be at least 2");
  if (refinement_passes < 0) throw InvalidArgument("refinement passes must be non-negative");
  if (!(box.fixed_fee_lo <= box.fixed_fee_hi) || !(box.marginal_lo <= box.marginal_hi))
    throw InvalidArgument("search box ranges are empty");
  const Currency currency = detail::common_currency(points);
  constexpr int kMaxWindowShifts = 64;

  auto linspace = [resolution](double lo, double hi, int j) {
    if (j == resolution - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(resolution - 1);
  };

  double f_lo = box.fixed_fee_lo, f_hi = box.fixed_fee_hi;
  double v_lo = box.marginal_lo, v_hi = box.marginal_hi;
  double best_f = f_lo, best_v = v_lo;
  long double best_q = std::numeric_limits<long double>::infinity();

  // Returns the window indices of a new incumbent, or (-1, -1) if none.
  auto search = [&]() {
    int bi = -1, bj = -1;
    for (int i = 0; i < resolution; ++i) {
      const double f = linspace(f_lo, f_hi, i);
      for (int j = 0; j < resolution; ++j) {
        const double v = linspace(v_lo, v_hi, j);
        long double q = 0.0L;
        for (const auto& pt : points) {
          const long double r = static_cast<long double>(f) / pt.x.value() + v - pt.p.amount();
          q += r * r;
        }
        if (q < best_q || (q == best_q && (f < best_f || (f == best_f && v < best_v)))) {
          best_q = q;
          best_f = f;
          best_v = v;
          bi = i;
          bj = j;
        }
      }
    }
    return std::pair{bi, bj};
  };

  search();
  for (int pass = 0; pass < refinement_passes; ++pass) {
    const double f_cell = (f_hi - f_lo) / static_cast<double>(resolution - 1);
    const double v_cell = (v_hi - v_lo) / static_cast<double>(resolution - 1);
    for (int shift = 0; shift < kMaxWindowShifts; ++shift) {
      f_lo = std::max(box.fixed_fee_lo, best_f - f_cell);
      f_hi = std::min(box.fixed_fee_hi, best_f + f_cell);
      v_lo = std::max(box.marginal_lo, best_v - v_cell);
      v_hi = std::min(box.marginal_hi, best_v + v_cell);
      auto [i, j] = search();
      if (i < 0) break;
      const bool on_edge = (i == 0 && f_lo > box.fixed_fee_lo) || (i == resolution - 1 && f_hi < box.fixed_fee_hi) ||
                           (j == 0 && v_lo > box.marginal_lo) || (j == resolution - 1 && v_hi < box.marginal_hi);
      if (!on_edge) break;
    }
  }

  TwoPartFit fit;
  fit.fixed_fee = best_f;
  fit.marginal_price = best_v;
  fit.rss = residual_q(points, best_f, best_v);
  fit.n = points.size();
  fit.currency = currency;
  return fit;
}

}  // namespace tariff
