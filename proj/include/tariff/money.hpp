#pragma once

/**
 * @file money.hpp
 * @brief Currency-tagged amounts, billing periods and capacities.
 *
 * Every type here is parameterized on the scalar so the same evaluation code
 * runs on `double` and on exact rationals (e.g. boost::multiprecision's
 * cpp_rational). The scalar must support + - * / and ordering, be
 * constructible from int, and be explicitly convertible to double.
 */

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <utility>

#include "tariff/errors.hpp"

namespace tariff {

enum class Currency { EUR, USD };
enum class BillingPeriod { Monthly, Yearly };

inline constexpr std::string_view to_string(Currency c) noexcept {
  return c == Currency::EUR ? "EUR" : "USD";
}

inline constexpr std::string_view to_string(BillingPeriod p) noexcept {
  return p == BillingPeriod::Monthly ? "monthly" : "yearly";
}

/// Parses a plain decimal ("12", "0.125", no sign, no exponent) into `Real`.
/// Floating-point scalars round once; other scalars are built exactly as
/// mantissa / 10^k. Throws InvalidArgument on malformed text.
template <class Real = double>
Real from_decimal(std::string_view text) {
  std::size_t dot = text.find('.');
  auto is_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  bool ok = dot == std::string_view::npos
                ? is_digits(text)
                : is_digits(text.substr(0, dot)) && is_digits(text.substr(dot + 1));
  if (!ok) throw InvalidArgument("malformed decimal '" + std::string(text) + "'");

  if constexpr (std::is_floating_point_v<Real>) {
    Real value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw InvalidArgument("malformed decimal '" + std::string(text) + "'");
    return value;
  } else {
    Real value(0);
    Real scale(1);
    bool fraction = false;
    for (char ch : text) {
      if (ch == '.') {
        fraction = true;
        continue;
      }
      value = value * Real(10) + Real(ch - '0');
      if (fraction) scale = scale * Real(10);
    }
    return value / scale;
  }
}

/// USD per EUR. Fixed rate, all conversions go through it.
template <class Real = double>
Real usd_per_eur() {
  return Real(13) / Real(10);
}

/// Gigabytes per terabyte (decimal units, 5000 TB = 5 million GB).
inline constexpr int kGbPerTb = 1000;

template <class Real = double>
class BasicMoney {
 public:
  using scalar_type = Real;

  BasicMoney() : amount_(0), currency_(Currency::EUR) {}
  BasicMoney(Real amount, Currency currency) : amount_(std::move(amount)), currency_(currency) {
    if (amount_ < Real(0)) throw NegativeAmount("money amount must be non-negative");
  }

  const Real& amount() const noexcept { return amount_; }
  Currency currency() const noexcept { return currency_; }

  friend BasicMoney operator+(const BasicMoney& a, const BasicMoney& b) {
    require_same(a, b);
    return BasicMoney(a.amount_ + b.amount_, a.currency_);
  }
  friend BasicMoney operator*(const BasicMoney& a, const Real& k) {
    return BasicMoney(a.amount_ * k, a.currency_);
  }
  friend BasicMoney operator*(const Real& k, const BasicMoney& a) { return a * k; }
  friend BasicMoney operator/(const BasicMoney& a, const Real& k) {
    return BasicMoney(a.amount_ / k, a.currency_);
  }

  friend bool operator==(const BasicMoney& a, const BasicMoney& b) {
    return a.currency_ == b.currency_ && a.amount_ == b.amount_;
  }
  friend bool operator<(const BasicMoney& a, const BasicMoney& b) {
    require_same(a, b);
    return a.amount_ < b.amount_;
  }
  friend bool operator<=(const BasicMoney& a, const BasicMoney& b) { return !(b < a); }
  friend bool operator>(const BasicMoney& a, const BasicMoney& b) { return b < a; }
  friend bool operator>=(const BasicMoney& a, const BasicMoney& b) { return !(a < b); }

 private:
  static void require_same(const BasicMoney& a, const BasicMoney& b) {
    if (a.currency_ != b.currency_)
      throw CurrencyMismatch("cannot combine " + std::string(to_string(a.currency_)) + " with " +
                             std::string(to_string(b.currency_)));
  }

  Real amount_;
  Currency currency_;
};

template <class Real>
BasicMoney<Real> convert_currency(const BasicMoney<Real>& m, Currency target) {
  if (m.currency() == target) return m;
  if (target == Currency::USD) return BasicMoney<Real>(m.amount() * usd_per_eur<Real>(), target);
  return BasicMoney<Real>(m.amount() / usd_per_eur<Real>(), target);
}

template <class Real>
BasicMoney<Real> normalize_monthly(const BasicMoney<Real>& fee, BillingPeriod period) {
  if (period == BillingPeriod::Monthly) return fee;
  return fee / Real(12);
}

template <class Real = double>
class BasicCapacityGB {
 public:
  BasicCapacityGB() : gb_(0) {}
  explicit BasicCapacityGB(Real gb) : gb_(std::move(gb)) {
    if (gb_ < Real(0)) throw InvalidArgument("capacity must be non-negative");
  }
  static BasicCapacityGB from_tb(const Real& tb) { return BasicCapacityGB(tb * Real(kGbPerTb)); }

  const Real& value() const noexcept { return gb_; }

  friend bool operator==(const BasicCapacityGB& a, const BasicCapacityGB& b) { return a.gb_ == b.gb_; }
  friend bool operator<(const BasicCapacityGB& a, const BasicCapacityGB& b) { return a.gb_ < b.gb_; }
  friend bool operator<=(const BasicCapacityGB& a, const BasicCapacityGB& b) { return !(b.gb_ < a.gb_); }
  friend bool operator>(const BasicCapacityGB& a, const BasicCapacityGB& b) { return b.gb_ < a.gb_; }
  friend bool operator>=(const BasicCapacityGB& a, const BasicCapacityGB& b) { return !(a.gb_ < b.gb_); }

 private:
  Real gb_;
};

using Money = BasicMoney<double>;
using CapacityGB = BasicCapacityGB<double>;

}  // namespace tariff
