#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "csrtone/comb_tuner.hpp"
#include "csrtone/error.hpp"
#include "csrtone/spectrum.hpp"

using namespace csrtone;

namespace {

const Pattern kPattern = Pattern::parse("10011001");

// Distance of x from the nearest half-odd integer, relative to x.
double half_odd_error(double x) { return std::fabs(x - (std::floor(x) + 0.5)) / x; }

std::vector<double> local_minima_delays(const SweepResult& r, std::size_t tone) {
  std::vector<double> out;
  const auto& p = r.tones[tone].power;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (p[i] <= p[i - 1] && p[i] <= p[i + 1]) out.push_back(r.delays_ns[i]);
  }
  return out;
}

bool near_any(const std::vector<double>& xs, double x, double tol) {
  return std::any_of(xs.begin(), xs.end(), [&](double v) { return std::fabs(v - x) <= tol; });
}

}  // namespace

TEST(Sweep, ShapeAndDefaults) {
  const auto r = sweep_delay(kPattern, 10.0, std::nullopt, kDefaultSweepSteps, {2.5, 7.5});
  ASSERT_EQ(r.tones.size(), 2u);
  EXPECT_EQ(r.delays_ns.size(), r.tones[0].power.size());
  EXPECT_EQ(r.delays_ns.size(), r.tones[1].power.size());
  EXPECT_EQ(r.delays_ns.size(), r.separation.size());
  EXPECT_EQ(r.delays_ns.size(), r.degenerate.size());
  EXPECT_DOUBLE_EQ(r.delays_ns.front(), 0.0);
  EXPECT_NEAR(r.delays_ns.back(), 0.8, 1e-12);
  for (const auto& t : r.tones) {
    for (double p : t.power) EXPECT_GE(p, 0.0);
  }
  EXPECT_TRUE(r.degenerate.front());
  EXPECT_TRUE(sweep_delay(kPattern, 10.0, 1.0, 10, {2.5}).separation.empty());
}

TEST(Sweep, SevenPointFiveNulls) {
  const auto r = sweep_delay(kPattern, 10.0, std::nullopt, kDefaultSweepSteps, {2.5, 7.5});
  const auto minima = local_minima_delays(r, 1);
  const double step = r.delays_ns[1] - r.delays_ns[0];
  EXPECT_TRUE(near_any(minima, 0.0667, step));
  EXPECT_TRUE(near_any(minima, 1.0 / 3.0, step));
}

TEST(Sweep, AmplifiedSevenPointFive) {
  for (double tau : {2.0 / 15.0, 4.0 / 15.0}) {
    const auto r = sweep_delay(kPattern, 10.0, tau, 2, {2.5, 7.5});
    const double p25 = r.tones[0].power.back();
    const double p75 = r.tones[1].power.back();
    EXPECT_GT(p75, 8.0);
    EXPECT_GT(p75, p25);
    EXPECT_GT(p25, 0.0);
    EXPECT_LT(p25, r.tones[0].power.front());
  }
}

TEST(Sweep, ZeroDelayQuadruples) {
  const auto r = sweep_delay(kPattern, 10.0, 0.8, 4, {0.0, 2.5, 7.5});
  const auto s = tone_spectrum(kPattern, 10.0);
  EXPECT_NEAR(r.tones[0].power[0], 4.0 * s.power(0), 1e-9);
  EXPECT_NEAR(r.tones[1].power[0], 4.0 * s.power(2), 1e-9);
  EXPECT_NEAR(r.tones[2].power[0], 4.0 * s.power(6), 1e-9);
}

TEST(Sweep, PeriodicInDelay) {
  // Shifting the sweep window by 1/f leaves the f curve unchanged.
  for (double f : {2.5, 7.5}) {
    const auto a = sweep_delay(kPattern, 10.0, 1.0, 100, {f});
    for (std::size_t i = 0; i < a.delays_ns.size(); ++i) {
      const double shifted = filtered_power(kPattern, 10.0, f, a.delays_ns[i] + 1.0 / f);
      EXPECT_NEAR(shifted, a.tones[0].power[i], 1e-9);
    }
  }
}

TEST(Sweep, DegenerateDelaysAreMultiplesOfThePeriod) {
  const auto r = sweep_delay(kPattern, 10.0, std::nullopt, 800, {2.5});
  const double step = r.delays_ns[1] - r.delays_ns[0];
  for (std::size_t i = 0; i < r.delays_ns.size(); ++i) {
    const double m = std::round(r.delays_ns[i] * 10.0);
    EXPECT_EQ(r.degenerate[i], std::fabs(r.delays_ns[i] - m / 10.0) <= 0.5 * step + 1e-12) << i;
  }
}

TEST(Sweep, Errors) {
  EXPECT_THROW(sweep_delay(kPattern, 10.0, std::nullopt, 100, {2.6}), std::invalid_argument);
  EXPECT_THROW(sweep_delay(kPattern, 10.0, std::nullopt, 1, {2.5}), std::invalid_argument);
  EXPECT_THROW(sweep_delay(kPattern, 10.0, 0.0, 100, {2.5}), std::invalid_argument);
  EXPECT_THROW(sweep_delay(kPattern, 10.0, -1.0, 100, {2.5}), std::invalid_argument);
  EXPECT_THROW(require_on_grid(kPattern, 10.0, 1.3), std::invalid_argument);
  EXPECT_NO_THROW(require_on_grid(kPattern, 10.0, 11.25));
}

TEST(Optimize, MaxSeparation) {
  const auto best = optimize_delay(kPattern, 10.0, Objective::max_separation(2.5, 7.5));
  EXPECT_NEAR(best.delay_ns, 1.0 / 15.0, 1e-6);
  EXPECT_LT(half_odd_error(7.5 * best.delay_ns), 1e-6);
  EXPECT_NEAR(filtered_power(kPattern, 10.0, 7.5, best.delay_ns), 0.0, 1e-10);
  EXPECT_NEAR(best.value, std::sqrt(24.0), 1e-9);
}

TEST(Optimize, Suppress) {
  const auto best = optimize_delay(kPattern, 10.0, Objective::suppress(7.5));
  EXPECT_LE(best.value, 1e-12);
  EXPECT_LT(half_odd_error(7.5 * best.delay_ns), 1e-6);
}

TEST(Optimize, MinSeparation) {
  // For this pattern |H(2.5)| = |H(7.5)| only at clock multiples, which are
  // excluded, so the optimum sits at the edge of a guard band.
  const int steps = kDefaultSweepSteps;
  const auto best = optimize_delay(kPattern, 10.0, Objective::min_separation(2.5, 7.5));
  const double step = 0.8 / (steps - 1);
  EXPECT_LT(best.value, 1e-3 * std::sqrt(24.0));
  const double m = std::round(best.delay_ns * 10.0);
  EXPECT_NEAR(best.delay_ns, m / 10.0, 0.5 * step + 1e-9);
  EXPECT_GE(std::fabs(best.delay_ns - m / 10.0), 0.5 * step - 1e-9);
  const double p25 = filtered_power(kPattern, 10.0, 2.5, best.delay_ns);
  const double p75 = filtered_power(kPattern, 10.0, 7.5, best.delay_ns);
  EXPECT_NEAR(p25 / p75, 1.0, 1e-3);
  EXPECT_GT(p25, 1.0);
}

TEST(Optimize, MinSeparationShrinksWithResolution) {
  const auto coarse = optimize_delay(kPattern, 10.0, Objective::min_separation(2.5, 7.5), std::nullopt, 200);
  const auto fine = optimize_delay(kPattern, 10.0, Objective::min_separation(2.5, 7.5), std::nullopt, 20000);
  EXPECT_LT(fine.value, 0.1 * coarse.value);
}

TEST(Optimize, Amplify) {
  const auto best = optimize_delay(kPattern, 10.0, Objective::amplify(7.5));
  EXPECT_NEAR(best.value, 4.0 * 8.0, 1e-9);
  EXPECT_NEAR(best.delay_ns, 2.0 / 15.0, 1e-6);
}

TEST(Optimize, NeverWorseThanGrid) {
  const std::vector<Objective> objs{Objective::suppress(2.5), Objective::amplify(7.5),
                                    Objective::max_separation(2.5, 7.5),
                                    Objective::min_separation(2.5, 7.5)};
  for (const auto& obj : objs) {
    for (int steps : {37, 200, 1000}) {
      const auto best = optimize_delay(kPattern, 10.0, obj, std::nullopt, steps);
      std::vector<double> targets{obj.f1_ghz};
      if (obj.two_tone()) targets.push_back(obj.f2_ghz);
      const auto r = sweep_delay(kPattern, 10.0, std::nullopt, steps, targets);
      for (std::size_t i = 0; i < r.delays_ns.size(); ++i) {
        if (r.degenerate[i]) continue;
        const double v = objective_value(kPattern, 10.0, obj, r.delays_ns[i]);
        if (obj.maximise()) {
          EXPECT_GE(best.value, v - 1e-12);
        } else {
          EXPECT_LE(best.value, v + 1e-12);
        }
      }
    }
  }
}

TEST(Optimize, UndefinedObjective) {
  const Pattern ones = Pattern::parse("11111111");
  EXPECT_THROW(optimize_delay(ones, 10.0, Objective::max_separation(2.5, 7.5)), DomainError);
  EXPECT_THROW(optimize_delay(kPattern, 10.0, Objective::suppress(7.3)), std::invalid_argument);
  EXPECT_THROW(optimize_delay(kPattern, 10.0, Objective::suppress(7.5), 0.0), std::invalid_argument);
}
