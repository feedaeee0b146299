#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "csrtone/periodogram.hpp"
#include "csrtone/pulse.hpp"
#include "oracles.hpp"

using namespace csrtone;

namespace {

Waveform sine(double f_ghz, double rate_ghz, std::size_t n, double phase = 0.3, double t0 = 0.0) {
  Waveform w;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) / rate_ghz;
    w.time_ns.push_back(t);
    w.voltage_mv.push_back(std::sin(2.0 * std::numbers::pi * f_ghz * t + phase));
  }
  return w;
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

Waveform train(const char* pattern, double duration, double vc = 1.0, double jitter = 0.0,
               std::uint64_t seed = 0) {
  return render(event_times(Pattern::parse(pattern), 10.0, duration, {jitter, seed}), pulse_shape(vc));
}

double power_at(const Periodogram& pg, double f) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < pg.frequency_ghz.size(); ++i) {
    if (std::fabs(pg.frequency_ghz[i] - f) < std::fabs(pg.frequency_ghz[best] - f)) best = i;
  }
  return pg.power[best];
}

}  // namespace

TEST(FrequencyGrid, SpacingAndEdges) {
  const auto g = frequency_grid(0.0, 10.0, 5.0);
  ASSERT_FALSE(g.empty());
  EXPECT_GT(g.front(), 0.0);
  EXPECT_NEAR(g[1] - g[0], 1.0 / 40.0, 1e-12);
  EXPECT_LE(g.back(), 10.0 + 1e-9);
  EXPECT_NEAR(g.back(), 10.0, 1.0 / 40.0);
  EXPECT_THROW(frequency_grid(5.0, 1.0, 5.0), std::invalid_argument);
  EXPECT_THROW(frequency_grid(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST(LombScargle, PureSinePeak) {
  const auto w = sine(2.5, 100.0, 1000);
  const auto grid = frequency_grid(0.0, 50.0, 10.0);
  const auto pg = lomb_scargle(w, grid);
  const auto peak = std::max_element(pg.power.begin(), pg.power.end()) - pg.power.begin();
  EXPECT_LT(std::fabs(pg.frequency_ghz[peak] - 2.5), grid[1] - grid[0]);
  EXPECT_GT(10.0 * std::log10(pg.power[peak] / median(pg.power)), 20.0);
  for (double p : pg.power) EXPECT_GE(p, 0.0);
  EXPECT_EQ(pg.kind, SpectrumKind::power_spectrum);
  EXPECT_EQ(pg.n_samples, 1000u);
  EXPECT_NEAR(pg.f_res_hz, 1e9 / (999.0 / 100.0), 1e-3);
}

TEST(LombScargle, EvenSamplingIsClassicalPeriodogram) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise;
  const std::size_t n = 64;
  const double rate = 8.0;
  Waveform w;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w.time_ns.push_back(i / rate);
    w.voltage_mv.push_back(noise(rng));
    mean += w.voltage_mv.back() / n;
  }
  std::vector<double> grid;
  for (std::size_t m = 1; m < n / 2; ++m) grid.push_back(m * rate / n);
  const auto pg = lomb_scargle(w, grid);
  for (std::size_t m = 1; m < n / 2; ++m) {
    std::complex<long double> acc{0.0L, 0.0L};
    for (std::size_t k = 0; k < n; ++k) {
      const long double ph = -2.0L * std::numbers::pi_v<long double> * (m * k % n) / n;
      acc += static_cast<long double>(w.voltage_mv[k] - mean) * std::complex<long double>(std::cos(ph), std::sin(ph));
    }
    EXPECT_NEAR(pg.power[m - 1], static_cast<double>(std::norm(acc) / n), 1e-9) << m;
  }
}

TEST(LombScargle, TimeShiftInvariance) {
  const auto a = train("10011001", 3.0);
  Waveform b = a;
  for (auto& t : b.time_ns) t += 17.25;
  const auto grid = frequency_grid(0.0, 20.0, 3.0);
  const auto pa = lomb_scargle(a, grid);
  const auto pb = lomb_scargle(b, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(pa.power[i], pb.power[i], 1e-8 * (1.0 + pa.power[i]));
}

TEST(LombScargle, DegenerateInput) {
  Waveform one;
  one.time_ns = {0.0};
  one.voltage_mv = {1.0};
  const std::vector<double> grid{1.0};
  EXPECT_THROW(lomb_scargle(one, grid), std::invalid_argument);
  Waveform flat;
  flat.time_ns = {0.0, 0.1, 0.2};
  flat.voltage_mv = {2.0, 2.0, 2.0};
  try {
    lomb_scargle(flat, grid);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "degenerate input");
  }
  const std::vector<double> bad{0.0, 1.0};
  EXPECT_THROW(lomb_scargle(sine(1.0, 10.0, 20), bad), std::invalid_argument);
}

TEST(LombScargle, UniformTrainHarmonics) {
  const auto w = train("11111111", 5.0);
  const auto grid = frequency_grid(0.0, 45.0, 5.0);
  const auto pg = lomb_scargle(w, grid);
  const double h1 = power_at(pg, 10.0);
  for (double f : {20.0, 30.0, 40.0}) EXPECT_GT(power_at(pg, f), 0.1 * h1) << f;
  for (double f : {5.0, 15.0, 25.0, 35.0}) EXPECT_LT(power_at(pg, f), 1e-3 * h1) << f;
}

TEST(LombScargle, RelativeTonePowersMatchAnalytic) {
  const auto w = train("10011001", 5.0, 4.0);
  const auto grid = frequency_grid(0.0, 12.0, 5.0);
  const auto pg = lomb_scargle(w, grid);
  const auto analytic = tone_spectrum(Pattern::parse("10011001"), 10.0);
  const double ref = power_at(pg, 10.0);
  // 10 GHz aliases to k = 0 in the one-period analytic spectrum.
  EXPECT_NEAR(power_at(pg, 2.5) / ref, analytic.power(2) / analytic.power(0), 0.1 * analytic.power(2) / analytic.power(0));
  EXPECT_NEAR(power_at(pg, 7.5) / ref, analytic.power(6) / analytic.power(0), 0.1 * analytic.power(6) / analytic.power(0));
}

TEST(LombScargle, EvenAndUnevenTimebasesAgree) {
  const auto ev = event_times(Pattern::parse("10011001"), 10.0, 5.0);
  const auto even = render(ev, pulse_shape(1.0), 1000.0);
  const auto uneven = render(ev, pulse_shape(1.0), 1000.0, UnevenTimebase{4, 0.5});
  const auto grid = frequency_grid(0.0, 12.0, 5.0);
  const auto pe = lomb_scargle(even, grid);
  const auto pu = lomb_scargle(uneven, grid);
  for (double f : {2.5, 7.5, 10.0}) {
    const auto me = tone_metrics(pe, f, 0.5);
    const auto mu = tone_metrics(pu, f, 0.5);
    EXPECT_NEAR(mu.center_ghz, me.center_ghz, 1e-9) << f;
    EXPECT_NEAR(mu.peak_power / me.peak_power, 1.0, 0.05) << f;
  }
}

TEST(LombScargle, WiderPulsesAttenuateHighTones) {
  const auto grid = frequency_grid(0.0, 100.0, 5.0, 2.0);
  auto ratio = [&](double vc) {
    const auto pg = lomb_scargle(train("11111111", 5.0, vc), grid);
    return power_at(pg, 90.0) / power_at(pg, 10.0);
  };
  const double narrow = ratio(4.0), mid = ratio(1.0), wide = ratio(0.25);
  EXPECT_GT(narrow, mid);
  EXPECT_GT(mid, wide);
  EXPECT_NEAR(narrow, 1.0, 0.1);
}

TEST(LombScargle, JitterRaisesNoiseFloor) {
  std::vector<double> grid;
  for (double f = 50.05; f < 100.0; f += 0.2) grid.push_back(f);
  double prev = -1.0;
  for (double sigma : {0.0, 0.5, 2.0}) {
    const auto pg = lomb_scargle(train("10011001", 5.0, 1.0, sigma, 8), grid);
    std::vector<double> off;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = std::fmod(grid[i], 1.25);
      if (r > 0.2 && r < 1.05) off.push_back(pg.power[i]);
    }
    const double floor = median(off);
    EXPECT_GT(floor, prev) << sigma;
    prev = floor;
  }
}

TEST(ToPsd, Definition) {
  const auto pg = lomb_scargle(sine(2.5, 100.0, 500), frequency_grid(0.0, 10.0, 5.0));
  const auto psd = to_psd(pg);
  EXPECT_EQ(psd.kind, SpectrumKind::psd);
  for (std::size_t i = 0; i < pg.power.size(); ++i) {
    EXPECT_DOUBLE_EQ(psd.power[i], pg.power[i] / (pg.f_res_hz * pg.n_samples));
  }
  EXPECT_THROW(to_psd(psd), std::invalid_argument);
}

TEST(ToPsd, ToneAreaConservedAcrossLengths) {
  auto area = [](double duration) {
    const auto grid = frequency_grid(2.0, 3.0, duration, 16.0);
    const auto psd = to_psd(lomb_scargle(train("10011001", duration), grid));
    std::vector<double> hz;
    for (double f : psd.frequency_ghz) hz.push_back(f * 1e9);
    return oracle::trapezoid(hz, psd.power);
  };
  EXPECT_NEAR(area(50.0) / area(5.0), 1.0, 0.15);
}

TEST(ToPsd, WhiteNoiseIsFlatAcrossLengths) {
  auto level = [](std::size_t n) {
    std::mt19937_64 rng(n);
    std::normal_distribution<double> noise;
    Waveform w;
    for (std::size_t i = 0; i < n; ++i) {
      w.time_ns.push_back(i / 100.0);
      w.voltage_mv.push_back(noise(rng));
    }
    std::vector<double> grid;
    for (double f = 1.0; f < 49.0; f += 0.37) grid.push_back(f);
    const auto psd = to_psd(lomb_scargle(w, grid));
    double mean = 0.0;
    for (double p : psd.power) mean += p / psd.power.size();
    return mean;
  };
  const double a = level(2000), b = level(20000);
  EXPECT_NEAR(b / a, 1.0, 0.2);
  // Unit-variance noise sampled at 100 GHz has a one-sided level near 1 / 100 GHz.
  EXPECT_NEAR(b * 1e11, 1.0, 0.2);
}

TEST(ToneMetrics, SineWidth) {
  const auto w = sine(2.5, 100.0, 1001);
  const auto pg = lomb_scargle(w, frequency_grid(1.5, 3.5, 10.0, 32.0));
  const auto m = tone_metrics(pg, 2.5, 0.5);
  EXPECT_NEAR(m.center_ghz, 2.5, 1.0 / 320.0);
  // Rectangular window: half-power width 0.886 / L.
  EXPECT_NEAR(m.fwhm_ghz, 0.886 / 10.0, 0.01);
  EXPECT_GT(m.peak_power, 0.0);
}

TEST(ToneMetrics, Errors) {
  Periodogram pg;
  pg.frequency_ghz = {1.0, 2.0, 3.0, 4.0};
  pg.power = {1.0, 2.0, 3.0, 4.0};
  EXPECT_THROW(tone_metrics(pg, 2.0, 0.6), std::invalid_argument);
}

TEST(ToneMetrics, ShorterTrainIsWider) {
  auto width = [](double duration) {
    const auto grid = frequency_grid(2.0, 3.0, duration);
    return tone_metrics(lomb_scargle(train("10011001", duration), grid), 2.5, 0.5).fwhm_ghz;
  };
  const double r = width(5.0) / width(50.0);
  EXPECT_GE(r, 4.0);
  EXPECT_LE(r, 12.0);
}
