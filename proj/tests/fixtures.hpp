#pragma once

// Plans built directly from published figures, independent of the catalog
// parser, so the pricing code can be tested without it.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

#include "tariff/tariff.hpp"

namespace tariff::testing {

using Rational = boost::multiprecision::cpp_rational;

template <class Real>
BasicMoney<Real> usd(const char* amount) {
  return BasicMoney<Real>(from_decimal<Real>(amount), Currency::USD);
}

template <class Real>
BasicMoney<Real> eur(const char* amount) {
  return BasicMoney<Real>(from_decimal<Real>(amount), Currency::EUR);
}

template <class Real = double>
BasicCapacityGB<Real> gb(const char* value) {
  return BasicCapacityGB<Real>(from_decimal<Real>(value));
}

// Pro50 / Pro100 with a 2 GB free allowance.
template <class Real = double>
BasicPricingPlan<Real> dropbox_consumer() {
  BasicBundlePlan<Real> b{gb<Real>("2"),
                          {{gb<Real>("50"), usd<Real>("9.99"), BillingPeriod::Monthly},
                           {gb<Real>("100"), usd<Real>("19.99"), BillingPeriod::Monthly}}};
  return {"dropbox-consumer", "Dropbox", "Pro50/Pro100", Segment::Consumer, Currency::USD, b};
}

// Teams: 5 users, 795 $/year, +125 $/year per user, 200 GB per user.
template <class Real = double>
BasicPerSeatPlan<Real> dropbox_teams_model() {
  BasicPerSeatPlan<Real> p;
  p.base_users = 5;
  p.base_fee_yearly = usd<Real>("795");
  p.per_user_fee_yearly = usd<Real>("125");
  p.gb_per_user = gb<Real>("200");
  p.base_capacity = gb<Real>("1000");
  return p;
}

template <class Real = double>
BasicPricingPlan<Real> dropbox_teams() {
  return {"dropbox-teams", "Dropbox", "Teams", Segment::Business, Currency::USD, dropbox_teams_model<Real>()};
}

// Standard storage with corrected breakpoints 1, 50, 500, 1000, 5000 TB.
template <class Real = double>
BasicBlockRateTariff<Real> amazon_standard_model() {
  BasicBlockRateTariff<Real> t;
  t.declining = true;
  const char* uppers_tb[] = {"1", "50", "500", "1000", "5000"};
  const char* prices[] = {"0.125", "0.110", "0.095", "0.090", "0.080"};
  for (int i = 0; i < 5; ++i)
    t.brackets.push_back({BasicCapacityGB<Real>::from_tb(from_decimal<Real>(uppers_tb[i])), usd<Real>(prices[i])});
  return t;
}

template <class Real = double>
BasicPricingPlan<Real> amazon_standard() {
  return {"amazon-s3-standard", "Amazon", "S3 Standard", Segment::Business, Currency::USD,
          amazon_standard_model<Real>()};
}

inline PricingPlan two_part(const std::string& id, double f, double v, Currency c = Currency::EUR) {
  return {id, id, id, Segment::Business, c, TwoPartTariff{Money(f, c), Money(v, c)}};
}

inline PricingPlan single_tier(const std::string& id, double cap, double fee, Currency c = Currency::USD) {
  return {id, id, id, Segment::Consumer, c, BundlePlan{CapacityGB(0), {{CapacityGB(cap), Money(fee, c)}}}};
}

struct PublishedFit {
  const char* id;
  Segment segment;
  double f;
  double v;
};

// Published two-part parameters.
inline const std::vector<PublishedFit>& published_fits() {
  static const std::vector<PublishedFit> rows = {
      {"google-drive", Segment::Consumer, 1.298, 0.0532}, {"idrive", Segment::Consumer, 3.42, 0.0217},
      {"dropbox", Segment::Consumer, 7.412, 0.0667},      {"sugarsync", Segment::Consumer, 3.231, 0.089},
      {"symform", Segment::Consumer, 8.58, 0.106},        {"mozy", Segment::Consumer, 4.91, 0.033},
      {"dropbox", Segment::Business, 47.449, 0.0193},     {"idrive", Segment::Business, 6.3, 0.077},
      {"crashplan", Segment::Business, 9.674, 0.267},     {"carbonite", Segment::Business, 15.23, 0.038},
      {"mozy", Segment::Business, 6.60, 0.401},
  };
  return rows;
}

inline std::vector<PlanScore> published_scores(Segment segment) {
  std::vector<PlanScore> out;
  for (const auto& r : published_fits())
    if (r.segment == segment) out.emplace_back(r.id, r.f, r.v);
  return out;
}

// Per-GB summation of a block-rate tariff: each whole gigabyte is charged at
// the marginal price of the bracket it falls in. Independent of the
// closed-form cumulative evaluation.
template <class Real>
Real block_rate_by_summation(const BasicBlockRateTariff<Real>& t, long long whole_gb) {
  Real total(0);
  std::size_t bracket = 0;
  for (long long g = 1; g <= whole_gb; ++g) {
    while (t.brackets[bracket].upper.value() < Real(g)) ++bracket;
    total += t.brackets[bracket].marginal.amount();
  }
  return total;
}

}  // namespace tariff::testing
