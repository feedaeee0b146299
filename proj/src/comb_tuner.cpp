#include "csrtone/comb_tuner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "csrtone/error.hpp"
#include "csrtone/spectrum.hpp"

namespace csrtone {

namespace {

double resolve_tau_max(const Pattern& p, double f_clk_ghz, std::optional<double> tau_max_ns) {
  if (!tau_max_ns) return p.size() / f_clk_ghz;
  if (!(*tau_max_ns > 0.0)) throw std::invalid_argument("delay range must be positive");
  return *tau_max_ns;
}

void check_common(double f_clk_ghz, int steps) {
  if (!(f_clk_ghz > 0.0)) throw std::invalid_argument("clock frequency must be positive");
  if (steps < 2) throw std::invalid_argument("sweep needs at least two steps");
}

double tone_amplitude(const Pattern& p, double f_clk_ghz, double f_ghz, double delay_ns) {
  return std::abs(modulation(p, f_ghz, 1.0 / f_clk_ghz)) *
         std::abs(comb_response(CombStage::feedforward(delay_ns), f_ghz));
}

bool near_clock_multiple(double delay_ns, double f_clk_ghz, double guard_ns) {
  const double period = 1.0 / f_clk_ghz;
  const double m = std::round(delay_ns / period);
  return std::abs(delay_ns - m * period) <= guard_ns + 1e-15;
}

template <typename F>
double golden_max(F&& score, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = score(c);
  double fd = score(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = score(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = score(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace

void require_on_grid(const Pattern& p, double f_clk_ghz, double f_ghz) {
  const double x = f_ghz * p.size() / f_clk_ghz;
  if (!(f_ghz >= 0.0) || std::abs(x - std::round(x)) > 1e-9 * std::max(1.0, std::abs(x))) {
    throw std::invalid_argument("target frequency is not on the tone grid");
  }
}

double filtered_power(const Pattern& p, double f_clk_ghz, double f_ghz, double delay_ns) {
  const double a = tone_amplitude(p, f_clk_ghz, f_ghz, delay_ns);
  return a * a;
}

double objective_value(const Pattern& p, double f_clk_ghz, const Objective& obj, double delay_ns) {
  if (obj.two_tone()) {
    return std::abs(tone_amplitude(p, f_clk_ghz, obj.f1_ghz, delay_ns) -
                    tone_amplitude(p, f_clk_ghz, obj.f2_ghz, delay_ns));
  }
  return filtered_power(p, f_clk_ghz, obj.f1_ghz, delay_ns);
}

SweepResult sweep_delay(const Pattern& p, double f_clk_ghz, std::optional<double> tau_max_ns,
                        int steps, const std::vector<double>& targets_ghz) {
  check_common(f_clk_ghz, steps);
  const double tau_max = resolve_tau_max(p, f_clk_ghz, tau_max_ns);
  for (double f : targets_ghz) require_on_grid(p, f_clk_ghz, f);

  const double step = tau_max / (steps - 1);
  SweepResult r;
  r.delays_ns.resize(static_cast<std::size_t>(steps));
  r.degenerate.resize(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double tau = i * step;
    r.delays_ns[static_cast<std::size_t>(i)] = tau;
    r.degenerate[static_cast<std::size_t>(i)] = near_clock_multiple(tau, f_clk_ghz, 0.5 * step);
  }
  for (double f : targets_ghz) {
    ToneTrace trace{f, {}};
    trace.power.reserve(r.delays_ns.size());
    for (double tau : r.delays_ns) trace.power.push_back(filtered_power(p, f_clk_ghz, f, tau));
    r.tones.push_back(std::move(trace));
  }
  if (targets_ghz.size() == 2) {
    const auto obj = Objective::max_separation(targets_ghz[0], targets_ghz[1]);
    for (double tau : r.delays_ns) r.separation.push_back(objective_value(p, f_clk_ghz, obj, tau));
  }
  return r;
}

DelayOptimum optimize_delay(const Pattern& p, double f_clk_ghz, const Objective& obj,
                            std::optional<double> tau_max_ns, int steps) {
  check_common(f_clk_ghz, steps);
  const double tau_max = resolve_tau_max(p, f_clk_ghz, tau_max_ns);
  require_on_grid(p, f_clk_ghz, obj.f1_ghz);
  if (obj.two_tone()) require_on_grid(p, f_clk_ghz, obj.f2_ghz);

  const double period = 1.0 / f_clk_ghz;
  const double floor_amp = 1e-9 * std::max(1, p.set_bits());
  const bool tone1 = std::abs(modulation(p, obj.f1_ghz, period)) > floor_amp;
  const bool tone2 = obj.two_tone() && std::abs(modulation(p, obj.f2_ghz, period)) > floor_amp;
  if (!tone1 && !tone2) throw DomainError("objective undefined: target tones are absent");

  const double sign = obj.maximise() ? 1.0 : -1.0;
  auto score = [&](double tau) { return sign * objective_value(p, f_clk_ghz, obj, tau); };

  const double step = tau_max / (steps - 1);
  const double guard = 0.5 * step;
  const auto n = static_cast<std::size_t>(steps);
  std::vector<double> taus(n), grid(n);
  std::vector<bool> degenerate(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    taus[i] = static_cast<double>(i) * step;
    grid[i] = score(taus[i]);
    degenerate[i] = near_clock_multiple(taus[i], f_clk_ghz, guard);
    scale = std::max(scale, std::abs(grid[i]));
  }

  struct Candidate {
    double tau;
    double score;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (degenerate[i]) continue;
    const bool left_ok = i == 0 || degenerate[i - 1] || grid[i] >= grid[i - 1];
    const bool right_ok = i + 1 == n || degenerate[i + 1] || grid[i] >= grid[i + 1];
    if (!left_ok || !right_ok) continue;

    double lo = i == 0 ? taus[i] : taus[i - 1];
    double hi = i + 1 == n ? taus[i] : taus[i + 1];
    // Keep the refinement bracket out of the guard band around clock multiples.
    for (double m = std::floor(lo / period); m * period <= hi + guard; m += 1.0) {
      const double centre = m * period;
      if (centre + guard < lo || centre - guard > hi) continue;
      if (centre < taus[i]) {
        lo = std::max(lo, centre + guard);
      } else {
        hi = std::min(hi, centre - guard);
      }
    }
    Candidate best{taus[i], grid[i]};
    if (hi > lo) {
      const double tau = golden_max(score, lo, hi);
      const double s = score(tau);
      if (s > best.score) best = {tau, s};
    }
    candidates.push_back(best);
  }
  if (candidates.empty()) throw DomainError("no admissible delay in range");

  double top = candidates.front().score;
  for (const auto& c : candidates) top = std::max(top, c.score);
  const double tol = 1e-9 * std::max(scale, 1e-300);
  const Candidate* chosen = nullptr;
  for (const auto& c : candidates) {
    if (c.score >= top - tol && (chosen == nullptr || c.tau < chosen->tau)) chosen = &c;
  }
  return {chosen->tau, sign * chosen->score};
}

}  // namespace csrtone
