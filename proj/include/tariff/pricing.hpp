#pragma once

/**
 * @file pricing.hpp
 * @brief Total and unit monthly price for every tariff family.
 *
 * All functions are pure. Results are in the plan's own currency unless a
 * target currency is passed; monthly normalization of yearly fees happens
 * here, at evaluation time.
 */

#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "tariff/errors.hpp"
#include "tariff/money.hpp"
#include "tariff/plans.hpp"

namespace tariff {

namespace detail {

template <class Real>
std::string gb_text(const Real& x) {
  return std::to_string(static_cast<double>(x)) + " GB";
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace detail

/// Monthly fee of the smallest package that covers `x`; zero inside the free
/// allowance. Throws CapacityExceeded above the largest package.
template <class Real>
BasicMoney<Real> bundle_total_price(const BasicBundlePlan<Real>& plan, const BasicCapacityGB<Real>& x) {
  Currency currency = plan.tiers.empty() ? Currency::EUR : plan.tiers.front().fee.currency();
  if (x <= plan.free_gb) return BasicMoney<Real>(Real(0), currency);
  for (const auto& tier : plan.tiers)
    if (x <= tier.cap) return normalize_monthly(tier.fee, tier.period);
  throw CapacityExceeded("bundle plan does not offer " + detail::gb_text(x.value()));
}

/// Value of the i-th linear piece of a block-rate tariff at `x`: all earlier
/// brackets charged in full plus `x - q(i-1)` at the i-th marginal price.
template <class Real>
BasicMoney<Real> block_rate_piece(const BasicBlockRateTariff<Real>& t, std::size_t i,
                                  const BasicCapacityGB<Real>& x) {
  const auto& b = t.brackets;
  if (i >= b.size()) throw InvalidArgument("bracket index out of range");
  Real charged(0);
  Real lower(0);
  for (std::size_t j = 0; j < i; ++j) {
    charged = charged + b[j].marginal.amount() * (b[j].upper.value() - lower);
    lower = b[j].upper.value();
  }
  if (x.value() < lower) throw InvalidArgument("capacity below the bracket's lower bound");
  return BasicMoney<Real>(charged + b[i].marginal.amount() * (x.value() - lower),
                          b[i].marginal.currency());
}

template <class Real>
BasicMoney<Real> block_rate_total_price(const BasicBlockRateTariff<Real>& t,
                                        const BasicCapacityGB<Real>& x) {
  const auto& b = t.brackets;
  if (b.empty()) throw InvalidArgument("block-rate tariff has no brackets");
  Real charged(0);
  Real lower(0);
  for (const auto& bracket : b) {
    if (x <= bracket.upper)
      return BasicMoney<Real>(charged + bracket.marginal.amount() * (x.value() - lower),
                              bracket.marginal.currency());
    charged = charged + bracket.marginal.amount() * (bracket.upper.value() - lower);
    lower = bracket.upper.value();
  }
  throw CapacityExceeded("block-rate tariff does not offer " + detail::gb_text(x.value()));
}

template <class Real>
BasicMoney<Real> two_part_total_price(const BasicTwoPartTariff<Real>& t, const BasicCapacityGB<Real>& x) {
  return t.fixed_fee + t.marginal * x.value();
}

/// Monthly price for `users` seats: (base + per_user * (k - k0)) / 12.
template <class Real>
BasicMoney<Real> per_seat_price(const BasicPerSeatPlan<Real>& plan, long long users) {
  if (users < plan.base_users)
    throw TooFewUsers("plan requires at least " + std::to_string(plan.base_users) + " users, got " +
                      std::to_string(users));
  auto yearly = plan.base_fee_yearly + plan.per_user_fee_yearly * Real(users - plan.base_users);
  return normalize_monthly(yearly, BillingPeriod::Yearly);
}

/// Unit price when the pooled capacity of `users` seats is fully used.
template <class Real>
BasicMoney<Real> per_seat_unit_floor(const BasicPerSeatPlan<Real>& plan, long long users) {
  auto price = per_seat_price(plan, users);
  return price / (plan.gb_per_user.value() * Real(users));
}

/// Smallest seat count whose pooled capacity covers `x`.
template <class Real>
long long per_seat_users_for(const BasicPerSeatPlan<Real>& plan, const BasicCapacityGB<Real>& x) {
  const Real& per_user = plan.gb_per_user.value();
  if (!(Real(0) < per_user)) throw InvalidArgument("gb_per_user must be positive");
  double ratio = static_cast<double>(Real(x.value() / per_user));
  auto k = static_cast<long long>(std::ceil(ratio));
  // The double estimate can be off by one for exact scalars.
  while (per_user * Real(k) < x.value()) ++k;
  while (k > 0 && !(per_user * Real(k - 1) < x.value())) --k;
  return k < plan.base_users ? plan.base_users : k;
}

template <class Real>
BasicMoney<Real> per_seat_total_price(const BasicPerSeatPlan<Real>& plan, const BasicCapacityGB<Real>& x) {
  return per_seat_price(plan, per_seat_users_for(plan, x));
}

/// Largest capacity the plan offers; nullopt when unbounded.
template <class Real>
std::optional<BasicCapacityGB<Real>> max_capacity(const BasicPricingPlan<Real>& plan) {
  using Cap = std::optional<BasicCapacityGB<Real>>;
  return std::visit(
      detail::overloaded{
          [](const BasicBundlePlan<Real>& b) -> Cap {
            if (b.tiers.empty()) return b.free_gb;
            return b.tiers.back().cap;
          },
          [](const BasicBlockRateTariff<Real>& t) -> Cap {
            if (t.brackets.empty()) return BasicCapacityGB<Real>();
            return t.brackets.back().upper;
          },
          [](const BasicCapacityOnlyPlan<Real>& c) -> Cap {
            if (c.caps.empty()) return std::nullopt;
            return c.caps.back();
          },
          [](const auto&) -> Cap { return std::nullopt; },
      },
      plan.model);
}

template <class Real>
bool covers(const BasicPricingPlan<Real>& plan, const BasicCapacityGB<Real>& x) {
  auto cap = max_capacity(plan);
  return !cap || x <= *cap;
}

/// False for capacity-only plans, whose fees are unknown.
template <class Real>
bool is_priceable(const BasicPricingPlan<Real>& plan) {
  return !std::holds_alternative<BasicCapacityOnlyPlan<Real>>(plan.model);
}

/// Priceable and with a finite unit price (i.e. not an unlimited flat fee).
template <class Real>
bool has_unit_price(const BasicPricingPlan<Real>& plan) {
  return is_priceable(plan) && !std::holds_alternative<BasicUnlimitedFlat<Real>>(plan.model);
}

/// Monthly charge for leasing `x` GB, in the plan's currency.
template <class Real>
BasicMoney<Real> total_price(const BasicPricingPlan<Real>& plan, const BasicCapacityGB<Real>& x) {
  return std::visit(
      detail::overloaded{
          [&](const BasicBundlePlan<Real>& b) { return bundle_total_price(b, x); },
          [&](const BasicBlockRateTariff<Real>& t) { return block_rate_total_price(t, x); },
          [&](const BasicTwoPartTariff<Real>& t) { return two_part_total_price(t, x); },
          [&](const BasicPerSeatPlan<Real>& p) { return per_seat_total_price(p, x); },
          [&](const BasicUnlimitedFlat<Real>& u) { return normalize_monthly(u.fee, u.period); },
          [&](const BasicCapacityOnlyPlan<Real>&) -> BasicMoney<Real> {
            throw UnpriceablePlan("plan '" + plan.id + "' has no published fees");
          },
      },
      plan.model);
}

template <class Real>
BasicMoney<Real> total_price(const BasicPricingPlan<Real>& plan, const BasicCapacityGB<Real>& x,
                             Currency target) {
  return convert_currency(total_price(plan, x), target);
}

/// Monthly price per GB. Two-part tariffs evaluate f/x + v directly.
template <class Real>
BasicMoney<Real> unit_price(const BasicPricingPlan<Real>& plan, const BasicCapacityGB<Real>& x) {
  if (std::holds_alternative<BasicUnlimitedFlat<Real>>(plan.model))
    throw UndefinedUnitPrice("plan '" + plan.id + "' has unlimited capacity");
  if (std::holds_alternative<BasicCapacityOnlyPlan<Real>>(plan.model))
    throw UnpriceablePlan("plan '" + plan.id + "' has no published fees");
  if (!(Real(0) < x.value())) throw UndefinedUnitPrice("unit price is undefined at 0 GB");
  if (const auto* t = std::get_if<BasicTwoPartTariff<Real>>(&plan.model))
    return t->fixed_fee / x.value() + t->marginal;
  return total_price(plan, x) / x.value();
}

template <class Real>
BasicMoney<Real> unit_price(const BasicPricingPlan<Real>& plan, const BasicCapacityGB<Real>& x,
                            Currency target) {
  return convert_currency(unit_price(plan, x), target);
}

/// Unit prices at full use of each paid package, ascending by capacity. These
/// are the local minima of the sawtooth unit-price curve.
template <class Real>
std::vector<BasicUnitPricePoint<Real>> local_minima(const BasicBundlePlan<Real>& plan) {
  if (plan.tiers.empty()) throw NoPaidTiers("bundle has no paid tiers");
  std::vector<BasicUnitPricePoint<Real>> out;
  out.reserve(plan.tiers.size());
  for (const auto& tier : plan.tiers)
    out.push_back({tier.cap, normalize_monthly(tier.fee, tier.period) / tier.cap.value()});
  return out;
}

}  // namespace tariff
