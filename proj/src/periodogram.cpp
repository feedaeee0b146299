#include "csrtone/periodogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace csrtone {

std::vector<double> frequency_grid(double f_min_ghz, double f_max_ghz, double duration_ns,
                                   double oversample) {
  if (!(duration_ns > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!(oversample > 0.0)) throw std::invalid_argument("oversample must be positive");
  if (!(f_min_ghz >= 0.0) || !(f_max_ghz > f_min_ghz)) {
    throw std::invalid_argument("need 0 <= f_min < f_max");
  }
  const double df = 1.0 / (oversample * duration_ns);
  const auto n = static_cast<std::size_t>(std::floor((f_max_ghz - f_min_ghz) / df + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = f_min_ghz + static_cast<double>(i) * df;
    if (f > 0.0) grid.push_back(f);
  }
  return grid;
}

Periodogram lomb_scargle(const Waveform& w, std::span<const double> frequencies_ghz) {
  const std::size_t n = w.time_ns.size();
  if (n < 2 || w.voltage_mv.size() != n) throw std::invalid_argument("degenerate input");
  const double mean = std::accumulate(w.voltage_mv.begin(), w.voltage_mv.end(), 0.0) / n;
  std::vector<double> y(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = w.voltage_mv[i] - mean;
    var += y[i] * y[i];
  }
  if (!(var > 0.0)) throw std::invalid_argument("degenerate input");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(w.time_ns[i] > w.time_ns[i - 1])) {
      throw std::invalid_argument("sample times must be strictly increasing");
    }
  }

  Periodogram pg;
  pg.kind = SpectrumKind::power_spectrum;
  pg.n_samples = n;
  pg.f_res_hz = 1e9 / (w.time_ns.back() - w.time_ns.front());
  pg.frequency_ghz.assign(frequencies_ghz.begin(), frequencies_ghz.end());
  pg.power.resize(frequencies_ghz.size());

  // Tiny trig denominators only occur at the even-sampling Nyquist frequency;
  // the corresponding term carries no power there.
  const double tiny = 1e-12 * static_cast<double>(n);
  for (std::size_t j = 0; j < frequencies_ghz.size(); ++j) {
    const double f = frequencies_ghz[j];
    if (!(f > 0.0)) throw std::invalid_argument("grid frequencies must be positive");
    if (j > 0 && !(f > frequencies_ghz[j - 1])) {
      throw std::invalid_argument("grid frequencies must be strictly increasing");
    }
    const double omega = 2.0 * std::numbers::pi * f;
    double yc = 0.0, ys = 0.0, cc = 0.0, ss = 0.0, cs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = omega * w.time_ns[i];
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      yc += y[i] * c;
      ys += y[i] * s;
      cc += c * c;
      ss += s * s;
      cs += c * s;
    }
    // Rotate by omega*tau, tan(2 omega tau) = sum sin 2wt / sum cos 2wt.
    const double phi = 0.5 * std::atan2(2.0 * cs, cc - ss);
    const double cp = std::cos(phi);
    const double sp = std::sin(phi);
    const double yc_t = yc * cp + ys * sp;
    const double ys_t = ys * cp - yc * sp;
    const double cc_t = cc * cp * cp + 2.0 * cs * cp * sp + ss * sp * sp;
    const double ss_t = cc * sp * sp - 2.0 * cs * cp * sp + ss * cp * cp;
    double p = 0.0;
    if (cc_t > tiny) p += yc_t * yc_t / cc_t;
    if (ss_t > tiny) p += ys_t * ys_t / ss_t;
    pg.power[j] = 0.5 * p;
  }
  return pg;
}

Periodogram to_psd(Periodogram pg) {
  if (pg.kind == SpectrumKind::psd) throw std::invalid_argument("periodogram is already a PSD");
  if (!(pg.f_res_hz > 0.0) || pg.n_samples == 0) {
    throw std::invalid_argument("periodogram lacks resolution metadata");
  }
  const double denom = pg.f_res_hz * static_cast<double>(pg.n_samples);
  for (auto& p : pg.power) p /= denom;
  pg.kind = SpectrumKind::psd;
  return pg;
}

ToneMetrics tone_metrics(const Periodogram& pg, double f0_ghz, double window_ghz) {
  const auto& f = pg.frequency_ghz;
  const auto& p = pg.power;
  if (f.size() < 3 || p.size() != f.size()) throw std::invalid_argument("periodogram too short");
  if (!(window_ghz > 0.0)) throw std::invalid_argument("window must be positive");

  const auto lo = static_cast<std::size_t>(
      std::lower_bound(f.begin(), f.end(), f0_ghz - window_ghz) - f.begin());
  const auto hi = static_cast<std::size_t>(
      std::upper_bound(f.begin(), f.end(), f0_ghz + window_ghz) - f.begin());
  std::size_t peak = f.size();
  for (std::size_t i = std::max<std::size_t>(lo, 1); i < std::min(hi, f.size() - 1); ++i) {
    if (p[i] >= p[i - 1] && p[i] >= p[i + 1] && p[i] > 0.0 &&
        (peak == f.size() || p[i] > p[peak])) {
      peak = i;
    }
  }
  if (peak == f.size()) throw std::invalid_argument("no local maximum in window");

  const double half = 0.5 * p[peak];
  std::size_t l = peak;
  while (l > 0 && p[l] > half) --l;
  std::size_t r = peak;
  while (r + 1 < f.size() && p[r] > half) ++r;
  if (p[l] > half || p[r] > half) throw std::invalid_argument("half-power crossing outside grid");

  const double f_left = f[l] + (half - p[l]) * (f[l + 1] - f[l]) / (p[l + 1] - p[l]);
  const double f_right = f[r - 1] + (half - p[r - 1]) * (f[r] - f[r - 1]) / (p[r] - p[r - 1]);
  return {f[peak], p[peak], f_right - f_left};
}

}  // namespace csrtone
