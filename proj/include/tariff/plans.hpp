#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tariff/money.hpp"

namespace tariff {

enum class Segment { Consumer, Business };

inline constexpr std::string_view to_string(Segment s) noexcept {
  return s == Segment::Consumer ? "consumer" : "business";
}

// One package of a bundled offer: everything up to `cap` for a flat fee.
template <class Real = double>
struct BasicBundleTier {
  BasicCapacityGB<Real> cap;
  BasicMoney<Real> fee;
  BillingPeriod period = BillingPeriod::Monthly;

  friend bool operator==(const BasicBundleTier&, const BasicBundleTier&) = default;
};

// Quantity-discount bundles. The customer buys the cheapest single package
// covering the requested capacity; packages are never stacked.
template <class Real = double>
struct BasicBundlePlan {
  BasicCapacityGB<Real> free_gb;
  std::vector<BasicBundleTier<Real>> tiers;

  friend bool operator==(const BasicBundlePlan&, const BasicBundlePlan&) = default;
};

// Marginal price per GB per month, held constant up to `upper`.
template <class Real = double>
struct BasicRateBracket {
  BasicCapacityGB<Real> upper;
  BasicMoney<Real> marginal;

  friend bool operator==(const BasicRateBracket&, const BasicRateBracket&) = default;
};

// Cumulative block-rate (taper) tariff. Capacity above the last bracket's
// upper bound is not offered.
template <class Real = double>
struct BasicBlockRateTariff {
  std::vector<BasicRateBracket<Real>> brackets;
  bool declining = false;

  friend bool operator==(const BasicBlockRateTariff&, const BasicBlockRateTariff&) = default;
};

// Monthly charge f + v * x.
template <class Real = double>
struct BasicTwoPartTariff {
  BasicMoney<Real> fixed_fee;
  BasicMoney<Real> marginal;  // per GB per month

  friend bool operator==(const BasicTwoPartTariff&, const BasicTwoPartTariff&) = default;
};

// Price driven by the number of users; capacity is pooled at gb_per_user * k.
template <class Real = double>
struct BasicPerSeatPlan {
  int base_users = 1;
  BasicMoney<Real> base_fee_yearly;
  BasicMoney<Real> per_user_fee_yearly;
  BasicCapacityGB<Real> gb_per_user;
  std::optional<BasicCapacityGB<Real>> base_capacity;

  friend bool operator==(const BasicPerSeatPlan&, const BasicPerSeatPlan&) = default;
};

template <class Real = double>
struct BasicUnlimitedFlat {
  BasicMoney<Real> fee;
  BillingPeriod period = BillingPeriod::Monthly;

  friend bool operator==(const BasicUnlimitedFlat&, const BasicUnlimitedFlat&) = default;
};

// Capacities are known but fees are not; kept for completeness, never priced.
template <class Real = double>
struct BasicCapacityOnlyPlan {
  BasicCapacityGB<Real> free_gb;
  std::vector<BasicCapacityGB<Real>> caps;

  friend bool operator==(const BasicCapacityOnlyPlan&, const BasicCapacityOnlyPlan&) = default;
};

template <class Real = double>
using BasicPricingModel =
    std::variant<BasicBundlePlan<Real>, BasicBlockRateTariff<Real>, BasicTwoPartTariff<Real>,
                 BasicPerSeatPlan<Real>, BasicUnlimitedFlat<Real>, BasicCapacityOnlyPlan<Real>>;

template <class Real = double>
struct BasicPricingPlan {
  std::string id;
  std::string provider;
  std::string plan_name;
  Segment segment = Segment::Consumer;
  Currency currency = Currency::EUR;
  BasicPricingModel<Real> model;

  friend bool operator==(const BasicPricingPlan&, const BasicPricingPlan&) = default;
};

// A sample on a plan's unit-price curve.
template <class Real = double>
struct BasicUnitPricePoint {
  BasicCapacityGB<Real> x;
  BasicMoney<Real> p;  // per GB per month

  friend bool operator==(const BasicUnitPricePoint&, const BasicUnitPricePoint&) = default;
};

using BundleTier = BasicBundleTier<double>;
using BundlePlan = BasicBundlePlan<double>;
using RateBracket = BasicRateBracket<double>;
using BlockRateTariff = BasicBlockRateTariff<double>;
using TwoPartTariff = BasicTwoPartTariff<double>;
using PerSeatPlan = BasicPerSeatPlan<double>;
using UnlimitedFlat = BasicUnlimitedFlat<double>;
using CapacityOnlyPlan = BasicCapacityOnlyPlan<double>;
using PricingModel = BasicPricingModel<double>;
using PricingPlan = BasicPricingPlan<double>;
using UnitPricePoint = BasicUnitPricePoint<double>;

inline std::string_view model_name(const PricingModel& m) noexcept {
  constexpr std::string_view names[] = {"bundle",   "block_rate",     "two_part",
                                        "per_seat", "unlimited_flat", "capacity_only"};
  return names[m.index()];
}

// ---------------------------------------------------------------------------
// Invariant checks. These never throw; they report what is wrong so the
// catalog can turn the findings into diagnostics.

struct Violation {
  bool is_error = true;
  std::string message;
};

namespace detail {

template <class Real>
void require_currency(std::vector<Violation>& out, const BasicMoney<Real>& m, Currency expected,
                      std::string_view what) {
  if (m.currency() != expected)
    out.push_back({true, std::string(what) + " currency " + std::string(to_string(m.currency())) +
                             " differs from plan currency " + std::string(to_string(expected))});
}

}  // namespace detail

template <class Real>
std::vector<Violation> check_invariants(const BasicBundlePlan<Real>& plan, Currency currency) {
  std::vector<Violation> out;
  const auto& tiers = plan.tiers;
  for (const auto& t : tiers) detail::require_currency(out, t.fee, currency, "tier fee");
  for (std::size_t i = 1; i < tiers.size(); ++i) {
    if (!(tiers[i - 1].cap < tiers[i].cap)) {
      out.push_back({true, "tiers not strictly increasing"});
      break;
    }
  }
  for (std::size_t i = 1; i < tiers.size(); ++i) {
    if (tiers[i - 1].fee.currency() != tiers[i].fee.currency()) break;
    if (!(normalize_monthly(tiers[i - 1].fee, tiers[i - 1].period) <
          normalize_monthly(tiers[i].fee, tiers[i].period))) {
      out.push_back({true, "tier monthly fees not strictly increasing"});
      break;
    }
  }
  if (!tiers.empty() && !(plan.free_gb < tiers.front().cap))
    out.push_back({true, "free capacity must be below the first tier cap"});
  if (tiers.empty()) out.push_back({false, "bundle has no paid tiers"});
  return out;
}

template <class Real>
std::vector<Violation> check_invariants(const BasicBlockRateTariff<Real>& tariff, Currency currency) {
  std::vector<Violation> out;
  const auto& b = tariff.brackets;
  if (b.empty()) out.push_back({true, "block-rate tariff has no brackets"});
  for (const auto& br : b) {
    detail::require_currency(out, br.marginal, currency, "bracket price");
    if (!(Real(0) < br.marginal.amount())) {
      out.push_back({true, "marginal prices must be strictly positive"});
      break;
    }
  }
  if (!b.empty() && !(Real(0) < b.front().upper.value()))
    out.push_back({true, "first breakpoint must be positive"});
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (!(b[i - 1].upper < b[i].upper)) {
      out.push_back({true, "breakpoints not strictly increasing"});
      break;
    }
  }
  if (tariff.declining) {
    for (std::size_t i = 1; i < b.size(); ++i) {
      if (b[i - 1].marginal.currency() == b[i].marginal.currency() &&
          b[i - 1].marginal < b[i].marginal) {
        out.push_back({true, "declining tariff has an increasing marginal price"});
        break;
      }
    }
  }
  return out;
}

template <class Real>
std::vector<Violation> check_invariants(const BasicTwoPartTariff<Real>& t, Currency currency) {
  std::vector<Violation> out;
  detail::require_currency(out, t.fixed_fee, currency, "fixed fee");
  detail::require_currency(out, t.marginal, currency, "marginal price");
  return out;
}

template <class Real>
std::vector<Violation> check_invariants(const BasicPerSeatPlan<Real>& p, Currency currency) {
  std::vector<Violation> out;
  detail::require_currency(out, p.base_fee_yearly, currency, "base fee");
  detail::require_currency(out, p.per_user_fee_yearly, currency, "per-user fee");
  if (p.base_users < 1) out.push_back({true, "base_users must be at least 1"});
  if (!(Real(0) < p.gb_per_user.value())) out.push_back({true, "gb_per_user must be positive"});
  if (p.base_capacity && !(p.gb_per_user.value() * Real(p.base_users) == p.base_capacity->value()))
    out.push_back({false, "gb_per_user * base_users does not match the base capacity"});
  return out;
}

template <class Real>
std::vector<Violation> check_invariants(const BasicUnlimitedFlat<Real>& u, Currency currency) {
  std::vector<Violation> out;
  detail::require_currency(out, u.fee, currency, "fee");
  return out;
}

template <class Real>
std::vector<Violation> check_invariants(const BasicCapacityOnlyPlan<Real>& c, Currency) {
  std::vector<Violation> out;
  for (std::size_t i = 1; i < c.caps.size(); ++i) {
    if (!(c.caps[i - 1] < c.caps[i])) {
      out.push_back({true, "tiers not strictly increasing"});
      break;
    }
  }
  if (!c.caps.empty() && !(c.free_gb < c.caps.front()))
    out.push_back({true, "free capacity must be below the first tier cap"});
  out.push_back({false, "fees unknown; plan is capacity-only and cannot be priced"});
  return out;
}

template <class Real>
std::vector<Violation> check_invariants(const BasicPricingPlan<Real>& plan) {
  return std::visit([&](const auto& m) { return check_invariants(m, plan.currency); }, plan.model);
}

}  // namespace tariff
