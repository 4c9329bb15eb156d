#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

namespace tariff {
namespace {

using namespace tariff::testing;

TEST(BundleTotalPrice, SmallestCoveringTier) {
  auto plan = dropbox_consumer();
  const auto& b = std::get<BundlePlan>(plan.model);
  EXPECT_EQ(bundle_total_price(b, CapacityGB(50)).amount(), 9.99);
  EXPECT_EQ(bundle_total_price(b, CapacityGB(51)).amount(), 19.99);
  EXPECT_EQ(bundle_total_price(b, CapacityGB(1)).amount(), 0.0);
  EXPECT_EQ(bundle_total_price(b, CapacityGB(2)).amount(), 0.0);
  EXPECT_THROW(bundle_total_price(b, CapacityGB(100.5)), CapacityExceeded);
}

TEST(BundleTotalPrice, YearlyTiersAreNormalized) {
  BundlePlan b{CapacityGB(0), {{CapacityGB(10), Money(120, Currency::USD), BillingPeriod::Yearly}}};
  EXPECT_EQ(bundle_total_price(b, CapacityGB(5)).amount(), 10.0);
}

TEST(BlockRateTotalPrice, AmazonSpotValues) {
  auto t = amazon_standard_model();
  EXPECT_DOUBLE_EQ(block_rate_total_price(t, CapacityGB(500)).amount(), 62.5);
  EXPECT_NEAR(block_rate_total_price(t, CapacityGB(2000)).amount(), 235.0, 1e-9);
  EXPECT_EQ(block_rate_total_price(t, CapacityGB(0)).amount(), 0.0);
  EXPECT_THROW(block_rate_total_price(t, CapacityGB(5'000'001)), CapacityExceeded);
}

TEST(BlockRateTotalPrice, ExactInRationals) {
  auto t = amazon_standard_model<Rational>();
  EXPECT_EQ(block_rate_total_price(t, gb<Rational>("2000")).amount(), Rational(235));
  EXPECT_EQ(block_rate_total_price(t, gb<Rational>("500")).amount(), from_decimal<Rational>("62.5"));
}

TEST(BlockRateTotalPrice, MatchesPerGigabyteSummation) {
  auto t = amazon_standard_model<Rational>();
  for (long long x : {1LL, 999LL, 1000LL, 1001LL, 2000LL, 7777LL, 50'000LL, 50'001LL})
    EXPECT_EQ(block_rate_total_price(t, BasicCapacityGB<Rational>(Rational(x))).amount(),
              block_rate_by_summation(t, x))
        << x;
}

TEST(BlockRateTotalPrice, ContinuousAtBreakpoints) {
  auto t = amazon_standard_model<Rational>();
  for (std::size_t i = 0; i + 1 < t.brackets.size(); ++i) {
    const auto& q = t.brackets[i].upper;
    EXPECT_EQ(block_rate_piece(t, i, q).amount(), block_rate_piece(t, i + 1, q).amount()) << i;
  }
  auto d = amazon_standard_model<double>();
  for (std::size_t i = 0; i + 1 < d.brackets.size(); ++i) {
    const auto& q = d.brackets[i].upper;
    EXPECT_EQ(block_rate_piece(d, i, q).amount(), block_rate_piece(d, i + 1, q).amount()) << i;
  }
}

TEST(TwoPartTotalPrice, Examples) {
  TwoPartTariff dropbox_biz{Money(47.449, Currency::EUR), Money(0.0193, Currency::EUR)};
  EXPECT_NEAR(two_part_total_price(dropbox_biz, CapacityGB(10000)).amount(), 240.449, 1e-9);
  TwoPartTariff no_fee{Money(0, Currency::EUR), Money(0.1, Currency::EUR)};
  EXPECT_NEAR(two_part_total_price(no_fee, CapacityGB(7)).amount(), 0.7, 1e-15);
  TwoPartTariff flat{Money(1, Currency::EUR), Money(0, Currency::EUR)};
  for (double x : {0.0, 1.0, 1e9}) EXPECT_EQ(two_part_total_price(flat, CapacityGB(x)).amount(), 1.0);
}

TEST(UnitPrice, DropboxConsumerInEuro) {
  auto plan = dropbox_consumer();
  EXPECT_NEAR(unit_price(plan, CapacityGB(50), Currency::EUR).amount(), 9.99 / 50 / 1.3, 1e-15);
  EXPECT_NEAR(unit_price(plan, CapacityGB(50), Currency::EUR).amount(), 0.15369, 5e-6);
  EXPECT_NEAR(unit_price(plan, CapacityGB(100), Currency::EUR).amount(), 0.15377, 5e-6);
}

TEST(UnitPrice, TwoPartApproachesMarginalPrice) {
  auto plan = two_part("gd", 1.298, 0.0532);
  EXPECT_NEAR(unit_price(plan, CapacityGB(1e9)).amount(), 0.0532, 1e-8);
}

TEST(UnitPrice, UndefinedCases) {
  auto plan = dropbox_consumer();
  EXPECT_THROW(unit_price(plan, CapacityGB(0)), UndefinedUnitPrice);
  PricingPlan flat{"c", "Carbonite", "Home", Segment::Consumer, Currency::USD,
                   UnlimitedFlat{Money(59, Currency::USD), BillingPeriod::Yearly}};
  EXPECT_THROW(unit_price(flat, CapacityGB(10)), UndefinedUnitPrice);
  EXPECT_NEAR(total_price(flat, CapacityGB(1e6)).amount(), 59.0 / 12.0, 1e-12);
  PricingPlan partial{"m", "Mozy", "", Segment::Consumer, Currency::USD, CapacityOnlyPlan{CapacityGB(0), {CapacityGB(125)}}};
  EXPECT_THROW(unit_price(partial, CapacityGB(10)), UnpriceablePlan);
  EXPECT_THROW(total_price(partial, CapacityGB(10)), UnpriceablePlan);
}

TEST(PerSeat, PriceFormula) {
  auto p = dropbox_teams_model<Rational>();
  EXPECT_EQ(per_seat_price(p, 5).amount(), from_decimal<Rational>("66.25"));
  EXPECT_EQ(per_seat_price(p, 6).amount(), Rational(920) / Rational(12));
  EXPECT_THROW(per_seat_price(p, 4), TooFewUsers);
  auto d = dropbox_teams_model();
  EXPECT_NEAR(per_seat_price(d, 6).amount(), 76.6667, 5e-5);
}

TEST(PerSeat, UnitFloor) {
  auto p = dropbox_teams_model<Rational>();
  EXPECT_EQ(per_seat_unit_floor(p, 5).amount(), from_decimal<Rational>("0.06625"));
  EXPECT_EQ(per_seat_unit_floor(p, 10).amount(), Rational(1420) / Rational(24000));
  auto d = dropbox_teams_model();
  EXPECT_NEAR(per_seat_unit_floor(d, 10).amount(), 0.059167, 5e-7);
  EXPECT_NEAR(per_seat_unit_floor(d, 100000).amount(), 125.0 / 2400.0, 1e-4);
  EXPECT_THROW(per_seat_unit_floor(d, 1), TooFewUsers);
}

TEST(PerSeat, FloorMatchesClosedFormForAllUserCounts) {
  auto p = dropbox_teams_model<Rational>();
  for (long long k = 5; k <= 400; ++k) {
    Rational expected = (Rational(170) + Rational(125) * k) / (Rational(2400) * k);
    EXPECT_EQ(per_seat_unit_floor(p, k).amount(), expected) << k;
    EXPECT_EQ(per_seat_price(p, k).amount() / (p.gb_per_user.value() * k), per_seat_unit_floor(p, k).amount());
  }
}

TEST(PerSeat, CapacityMapsToPooledSeats) {
  auto p = dropbox_teams_model();
  EXPECT_EQ(per_seat_users_for(p, CapacityGB(1)), 5);
  EXPECT_EQ(per_seat_users_for(p, CapacityGB(1000)), 5);
  EXPECT_EQ(per_seat_users_for(p, CapacityGB(1000.5)), 6);
  EXPECT_EQ(per_seat_users_for(p, CapacityGB(1200)), 6);
  auto r = dropbox_teams_model<Rational>();
  EXPECT_EQ(per_seat_users_for(r, gb<Rational>("1200")), 6);
  EXPECT_EQ(per_seat_users_for(r, gb<Rational>("1200.001")), 7);
}

TEST(LocalMinima, DropboxConsumer) {
  auto minima = local_minima(std::get<BundlePlan>(dropbox_consumer().model));
  ASSERT_EQ(minima.size(), 2u);
  EXPECT_EQ(minima[0].x.value(), 50.0);
  EXPECT_EQ(minima[1].x.value(), 100.0);
  EXPECT_NEAR(convert_currency(minima[0].p, Currency::EUR).amount(), 0.15369, 5e-6);
  EXPECT_NEAR(convert_currency(minima[1].p, Currency::EUR).amount(), 0.15377, 5e-6);
}

TEST(LocalMinima, SingleTierAndDegenerate) {
  auto minima = local_minima(std::get<BundlePlan>(single_tier("cp", 10, 2.08).model));
  ASSERT_EQ(minima.size(), 1u);
  EXPECT_NEAR(minima[0].p.amount(), 0.208, 1e-15);
  EXPECT_THROW(local_minima(BundlePlan{CapacityGB(5), {}}), NoPaidTiers);
}

// Property checks over every model family.

std::vector<PricingPlan> all_priceable() {
  PricingPlan teams = dropbox_teams();
  return {dropbox_consumer(), amazon_standard(), teams, two_part("t", 3.0, 0.05), single_tier("s", 10, 2.08)};
}

TEST(PricingProperties, TotalPriceNonDecreasing) {
  for (const auto& plan : all_priceable()) {
    auto cap = max_capacity(plan);
    double stop = cap ? cap->value() : 20000.0;
    double prev = 0.0;
    for (double x = 0.0; x <= std::min(stop, 20000.0); x += 0.5) {
      double now = total_price(plan, CapacityGB(x)).amount();
      EXPECT_GE(now, prev) << plan.id << " at " << x;
      prev = now;
    }
  }
}

TEST(PricingProperties, DecliningBlockRateHasNonIncreasingAveragePrice) {
  auto plan = amazon_standard<Rational>();
  Rational prev(1000);
  for (long long x : {1LL, 10LL, 999LL, 1000LL, 1001LL, 40'000LL, 50'000LL, 50'001LL, 499'999LL, 500'000LL,
                      900'000LL, 1'000'000LL, 1'000'001LL, 4'999'999LL, 5'000'000LL}) {
    Rational now = unit_price(plan, BasicCapacityGB<Rational>(Rational(x))).amount();
    EXPECT_LE(now, prev) << x;
    prev = now;
  }
}

TEST(PricingProperties, BundleSawtooth) {
  auto plan = dropbox_consumer();
  const auto& b = std::get<BundlePlan>(plan.model);
  auto minima = local_minima(b);
  double lower = b.free_gb.value();
  for (std::size_t i = 0; i < b.tiers.size(); ++i) {
    double cap = b.tiers[i].cap.value();
    double fee = b.tiers[i].fee.amount();
    double prev_unit = std::numeric_limits<double>::infinity();
    for (double x = lower + 0.25; x <= cap; x += 0.25) {
      EXPECT_EQ(total_price(plan, CapacityGB(x)).amount(), fee);
      double u = unit_price(plan, CapacityGB(x)).amount();
      EXPECT_LT(u, prev_unit);
      prev_unit = u;
    }
    EXPECT_EQ(minima[i].x.value(), cap);
    EXPECT_EQ(minima[i].p.amount(), unit_price(plan, CapacityGB(cap)).amount());
    lower = cap;
  }
}

TEST(PricingProperties, TwoPartUnitPriceGapIsFixedFeeOverX) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(0, 100000);
  for (int i = 0; i < 500; ++i) {
    Rational f = Rational(num(rng)) / 1000, v = Rational(num(rng)) / 100000, x = Rational(num(rng) + 1) / 10;
    BasicPricingPlan<Rational> plan{"t", "t", "t", Segment::Consumer, Currency::EUR,
                                    BasicTwoPartTariff<Rational>{{f, Currency::EUR}, {v, Currency::EUR}}};
    Rational u = unit_price(plan, BasicCapacityGB<Rational>(x)).amount();
    EXPECT_EQ(u - v, f / x);
  }
}

TEST(Invariants, BundleChecks) {
  BundlePlan bad{CapacityGB(0), {{CapacityGB(100), Money(5, Currency::USD)}, {CapacityGB(50), Money(9, Currency::USD)}}};
  auto v = check_invariants(bad, Currency::USD);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].message, "tiers not strictly increasing");
  BundlePlan fees{CapacityGB(0), {{CapacityGB(50), Money(9, Currency::USD)}, {CapacityGB(100), Money(9, Currency::USD)}}};
  EXPECT_EQ(check_invariants(fees, Currency::USD).at(0).message, "tier monthly fees not strictly increasing");
  BundlePlan free{CapacityGB(60), {{CapacityGB(50), Money(9, Currency::USD)}}};
  EXPECT_TRUE(check_invariants(free, Currency::USD).at(0).is_error);
  EXPECT_TRUE(check_invariants(std::get<BundlePlan>(dropbox_consumer().model), Currency::USD).empty());
}

TEST(Invariants, BlockRateChecks) {
  EXPECT_TRUE(check_invariants(amazon_standard_model(), Currency::USD).empty());
  auto rising = amazon_standard_model();
  rising.brackets[2].marginal = Money(0.2, Currency::USD);
  EXPECT_EQ(check_invariants(rising, Currency::USD).at(0).message, "declining tariff has an increasing marginal price");
  rising.declining = false;
  EXPECT_TRUE(check_invariants(rising, Currency::USD).empty());
}

TEST(Invariants, PerSeatCapacityIdentity) {
  auto p = dropbox_teams_model();
  EXPECT_TRUE(check_invariants(p, Currency::USD).empty());
  p.base_capacity = CapacityGB(1200);
  auto v = check_invariants(p, Currency::USD);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_FALSE(v[0].is_error);
}

}  // namespace
}  // namespace tariff
