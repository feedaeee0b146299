#include "csrtone/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace csrtone {

namespace {

const double kFwhmPerSigma = 2.0 * std::sqrt(2.0 * std::numbers::ln2);

// Pulses are evaluated out to this many standard deviations.
constexpr double kSupportSigmas = 10.0;

std::size_t tick_count(double duration_ns, double f_clk_ghz) {
  return static_cast<std::size_t>(std::max(0.0, std::ceil(duration_ns * f_clk_ghz - 1e-9)));
}

}  // namespace

double PulseShape::sigma_ps() const { return width_ps / kFwhmPerSigma; }

double PulseShape::power_width_ps() const { return sigma_ps() * std::sqrt(std::numbers::pi); }

double PulseShape::voltage(double dt_ps) const {
  const double z = dt_ps / sigma_ps();
  return amplitude_mv * std::exp(-0.5 * z * z);
}

PulseShape pulse_shape(double v_c) {
  if (!(v_c > 0.0) || !std::isfinite(v_c)) {
    throw std::invalid_argument("characteristic voltage must be positive");
  }
  PulseShape s;
  s.v_c = v_c;
  s.width_ps = kFluxQuantum / (2.0 * v_c * kVcUnit);
  s.area = kFluxQuantum;
  s.amplitude_mv = kFluxQuantum / (s.sigma_ps() * std::sqrt(2.0 * std::numbers::pi));
  return s;
}

EventSequence event_times(const Pattern& p, double f_clk_ghz, double duration_ns,
                          const JitterModel& jitter) {
  if (!(f_clk_ghz > 0.0)) throw std::invalid_argument("clock frequency must be positive");
  if (!(duration_ns > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!(jitter.sigma_ps >= 0.0)) throw std::invalid_argument("jitter sigma must be non-negative");

  EventSequence ev;
  ev.duration_ns = duration_ns;
  ev.f_clk_ghz = f_clk_ghz;
  ev.meta = "pattern " + p.str();

  std::mt19937_64 rng(jitter.seed);
  std::normal_distribution<double> draw(0.0, jitter.sigma_ps * 1e-3);
  const bool jittered = jitter.sigma_ps > 0.0;

  const std::size_t ticks = tick_count(duration_ns, f_clk_ghz);
  for (std::size_t j = 0; j < ticks; ++j) {
    if (!p.at(static_cast<std::ptrdiff_t>(j % static_cast<std::size_t>(p.size())))) continue;
    double t = static_cast<double>(j) / f_clk_ghz;
    if (jittered) t += draw(rng);
    if (t < 0.0 || t > duration_ns) continue;
    ev.times_ns.push_back(t);
  }
  if (jittered) {
    std::sort(ev.times_ns.begin(), ev.times_ns.end());
    ev.times_ns.erase(std::unique(ev.times_ns.begin(), ev.times_ns.end()), ev.times_ns.end());
    ev.meta += ", jitter " + std::to_string(jitter.sigma_ps) + " ps";
  }
  return ev;
}

Waveform render(const EventSequence& events, const PulseShape& shape, double sample_rate_ghz,
                const Timebase& timebase) {
  if (!(sample_rate_ghz > 0.0)) throw std::invalid_argument("sample rate must be positive");
  if (!(events.duration_ns > 0.0)) throw std::invalid_argument("duration must be positive");

  const auto n = static_cast<std::size_t>(std::floor(events.duration_ns * sample_rate_ghz + 1e-9)) + 1;
  Waveform w;
  w.time_ns.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.time_ns[i] = static_cast<double>(i) / sample_rate_ghz;

  if (const auto* uneven = std::get_if<UnevenTimebase>(&timebase)) {
    if (!(uneven->spread >= 0.0 && uneven->spread < 1.0)) {
      throw std::invalid_argument("uneven spread must lie in [0, 1)");
    }
    std::mt19937_64 rng(uneven->seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      w.time_ns[i] += u(rng) * uneven->spread / sample_rate_ghz;
    }
    w.evenly_sampled = false;
  }

  std::vector<double> times = events.times_ns;
  std::sort(times.begin(), times.end());
  const double sigma_ns = shape.sigma_ps() * 1e-3;
  const double reach = kSupportSigmas * sigma_ns;
  w.voltage_mv.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = w.time_ns[i];
    double v = 0.0;
    for (auto it = std::lower_bound(times.begin(), times.end(), t - reach);
         it != times.end() && *it <= t + reach; ++it) {
      v += shape.voltage((t - *it) * 1e3);
    }
    w.voltage_mv[i] = v;
  }
  return w;
}

EventSequence comb_apply_events(const EventSequence& events, const CombStage& stage,
                                double dead_time_ns) {
  if (stage.kind != CombKind::feedforward) {
    throw std::invalid_argument("not representable in event domain");
  }
  validate(stage);
  if (!(dead_time_ns >= 0.0)) throw std::invalid_argument("dead time must be non-negative");

  std::vector<double> all = events.times_ns;
  for (double t : events.times_ns) {
    const double delayed = t + stage.delay_ns;
    if (delayed < events.duration_ns - 1e-12) all.push_back(delayed);
  }
  std::sort(all.begin(), all.end());

  EventSequence out;
  out.duration_ns = events.duration_ns;
  out.f_clk_ghz = events.f_clk_ghz;
  out.meta = events.meta + ", comb " + std::to_string(stage.delay_ns) + " ns";
  for (double t : all) {
    if (!out.times_ns.empty()) {
      const double gap = t - out.times_ns.back();
      if (gap <= 0.0 || gap < dead_time_ns) continue;
    }
    out.times_ns.push_back(t);
  }
  return out;
}

double avg_power(const Pattern& p, double width_ps, double f_clk_ghz, double p_peak) {
  if (!(f_clk_ghz > 0.0)) throw std::invalid_argument("clock frequency must be positive");
  if (!(width_ps >= 0.0)) throw std::invalid_argument("pulse width must be non-negative");
  const double period_ps = 1e3 / f_clk_ghz;
  return p_peak * (width_ps / period_ps) * (static_cast<double>(p.set_bits()) / p.size());
}

double avg_power(const Pattern& p, const PulseShape& shape, double f_clk_ghz, double p_peak) {
  return avg_power(p, shape.power_width_ps(), f_clk_ghz, p_peak);
}

}  // namespace csrtone
