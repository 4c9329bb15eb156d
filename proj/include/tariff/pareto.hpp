#pragma once

/**
 * @file pareto.hpp
 * @brief Plan shortlisting: Pareto dominance on two-part parameters and
 *        pointwise cheapest-plan tables over a capacity grid.
 */

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tariff/errors.hpp"
#include "tariff/fitting.hpp"
#include "tariff/money.hpp"
#include "tariff/plans.hpp"
#include "tariff/pricing.hpp"

namespace tariff {

/// A plan reduced to its two-part parameters (f per month, v per GB per month).
struct PlanScore {
  std::string plan_id;
  double fixed_fee = 0.0;
  double marginal_price = 0.0;

  PlanScore() = default;
  PlanScore(std::string id, double f, double v) : plan_id(std::move(id)), fixed_fee(f), marginal_price(v) {
    if (!std::isfinite(f) || !std::isfinite(v) || f < 0.0 || v < 0.0)
      throw InvalidArgument("plan score for '" + plan_id + "' must be finite and non-negative");
  }
};

/// True when `a` is no worse than `b` on both parameters and strictly better
/// on at least one.
inline bool dominates(const PlanScore& a, const PlanScore& b) noexcept {
  return a.fixed_fee <= b.fixed_fee && a.marginal_price <= b.marginal_price &&
         (a.fixed_fee < b.fixed_fee || a.marginal_price < b.marginal_price);
}

struct DominatedPlan {
  std::string plan_id;
  std::vector<std::string> dominators;  // ordered by ascending (f, v, id)

  friend bool operator==(const DominatedPlan&, const DominatedPlan&) = default;
};

struct DominanceReport {
  std::vector<std::string> frontier;    // ordered by ascending (f, v, id)
  std::vector<DominatedPlan> dominated;  // ordered by ascending (f, v, id)

  bool on_frontier(const std::string& id) const {
    return std::find(frontier.begin(), frontier.end(), id) != frontier.end();
  }
  const DominatedPlan* find_dominated(const std::string& id) const {
    for (const auto& d : dominated)
      if (d.plan_id == id) return &d;
    return nullptr;
  }

  friend bool operator==(const DominanceReport&, const DominanceReport&) = default;
};

inline DominanceReport pareto_frontier(std::span<const PlanScore> scores) {
  std::vector<PlanScore> sorted(scores.begin(), scores.end());
  auto key = [](const PlanScore& s) { return std::tie(s.fixed_fee, s.marginal_price, s.plan_id); };
  std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::set<std::string> seen;
  for (const auto& s : sorted)
    if (!seen.insert(s.plan_id).second) throw DuplicateId("duplicate plan id '" + s.plan_id + "'");

  DominanceReport report;
  for (const auto& candidate : sorted) {
    std::vector<std::string> dominators;
    for (const auto& other : sorted)
      if (dominates(other, candidate)) dominators.push_back(other.plan_id);
    if (dominators.empty())
      report.frontier.push_back(candidate.plan_id);
    else
      report.dominated.push_back({candidate.plan_id, std::move(dominators)});
  }
  return report;
}

/// How the tie tolerance of the cheapest-plan search is interpreted.
enum class TieBasis {
  Total,  // tolerance on the total monthly price
  Unit,   // tolerance on the unit price, i.e. tolerance * x on the total
};

/// Tie tolerance on unit price used for cheapest tables (0.001 per GB).
inline constexpr double kDefaultUnitTieTolerance = 0.001;
/// Tie tolerance on total price when ties must be exact up to rounding.
inline constexpr double kDefaultTotalTieTolerance = 1e-9;

/// Plans whose monthly total at `x` lies within the tolerance of the cheapest.
/// Capacity-only plans and plans that do not reach `x` are skipped. The
/// comparison currency is the tolerance's currency. Result is sorted by id.
inline std::vector<std::string> cheapest_per_point(std::span<const PricingPlan> plans, const CapacityGB& x,
                                                   const Money& tie_tol, TieBasis basis = TieBasis::Total) {
  if (!(x.value() > 0.0)) throw InvalidArgument("capacity must be positive");
  const Currency currency = tie_tol.currency();
  std::vector<std::pair<std::string, double>> priced;
  for (const auto& plan : plans) {
    if (!is_priceable(plan) || !covers(plan, x)) continue;
    priced.emplace_back(plan.id, total_price(plan, x, currency).amount());
  }
  if (priced.empty())
    throw NoPlanCoversX("no plan offers " + std::to_string(x.value()) + " GB");

  double best = priced.front().second;
  for (const auto& [id, price] : priced) best = std::min(best, price);
  const double tol = basis == TieBasis::Unit ? tie_tol.amount() * x.value() : tie_tol.amount();

  std::vector<std::string> winners;
  for (const auto& [id, price] : priced)
    if (price - best <= tol) winners.push_back(id);
  std::sort(winners.begin(), winners.end());
  return winners;
}

struct CheapestBracket {
  double from_gb = 0.0;
  double to_gb = 0.0;
  std::vector<std::string> winners;  // empty only for uncovered rows built by merge_brackets

  friend bool operator==(const CheapestBracket&, const CheapestBracket&) = default;
};

using CheapestTable = std::vector<CheapestBracket>;

/// Merges consecutive grid points with identical winner sets into brackets.
/// Points must be in ascending capacity order.
inline CheapestTable merge_brackets(std::span<const std::pair<double, std::vector<std::string>>> points) {
  CheapestTable table;
  for (const auto& [x, winners] : points) {
    if (!table.empty() && table.back().winners == winners)
      table.back().to_gb = x;
    else
      table.push_back({x, x, winners});
  }
  return table;
}

inline CheapestTable cheapest_table(std::span<const PricingPlan> plans, const SampleGrid& grid,
                                    const Money& tie_tol, TieBasis basis = TieBasis::Total) {
  std::vector<std::pair<double, std::vector<std::string>>> points;
  const std::size_t n = grid.size();
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.at(i);
    points.emplace_back(x, cheapest_per_point(plans, CapacityGB(x), tie_tol, basis));
  }
  return merge_brackets(points);
}

}  // namespace tariff
