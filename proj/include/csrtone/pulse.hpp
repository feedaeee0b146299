#ifndef CSRTONE_PULSE_HPP
#define CSRTONE_PULSE_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "csrtone/pattern.hpp"
#include "csrtone/spectrum.hpp"

namespace csrtone {

/// Magnetic flux quantum h/2e in mV*ps.
inline constexpr double kFluxQuantum = 2.067833848;
/// One dimensionless characteristic-voltage unit in mV.
inline constexpr double kVcUnit = 0.287;

/// Gaussian SFQ pulse whose time integral is exactly one flux quantum.
///
/// width is the FWHM, Phi0 / (2 v_c * 0.287 mV); amplitude follows from the
/// fixed area, so doubling v_c halves the width and doubles the peak.
struct PulseShape {
  double v_c = 1.0;
  double amplitude_mv = 0.0;
  double width_ps = 0.0;
  double area = kFluxQuantum;

  double sigma_ps() const;
  /// Equivalent rectangular width of V^2: integral(V^2 dt) / amplitude^2.
  double power_width_ps() const;
  double voltage(double dt_ps) const;
};

PulseShape pulse_shape(double v_c);

struct JitterModel {
  double sigma_ps = 0.0;
  std::uint64_t seed = 0;
};

struct EventSequence {
  std::vector<double> times_ns;
  double duration_ns = 0.0;
  double f_clk_ghz = 0.0;
  std::string meta;

  std::size_t size() const { return times_ns.size(); }
};

struct Waveform {
  std::vector<double> time_ns;
  std::vector<double> voltage_mv;
  bool evenly_sampled = true;

  std::size_t size() const { return time_ns.size(); }
};

struct EvenTimebase {};

/// Interior sample instants are displaced by a uniform draw in
/// [-spread/2, spread/2) sample periods; spread must lie in [0, 1).
struct UnevenTimebase {
  std::uint64_t seed = 0;
  double spread = 0.5;
};

using Timebase = std::variant<EvenTimebase, UnevenTimebase>;

/// Default sampling for 10 GHz studies: 1 THz.
inline constexpr double kDefaultSampleRateGHz = 1000.0;

/// One event at (k + m N) / f_clk for every set bit k and cycle m with the
/// ideal time below duration. Jitter is an independent Gaussian draw per
/// event; draws that leave [0, duration] are dropped.
EventSequence event_times(const Pattern& p, double f_clk_ghz, double duration_ns,
                          const JitterModel& jitter = {});

/// Sum of shifted pulses sampled on [0, duration] at sample_rate (GHz).
/// The rate should exceed twice the highest frequency of interest.
Waveform render(const EventSequence& events, const PulseShape& shape,
                double sample_rate_ghz = kDefaultSampleRateGHz, const Timebase& timebase = {});

/// Merges the events with copies delayed by the stage delay. SFQ pulses
/// cannot add, so events closer than dead_time collapse into the earliest.
/// Delayed copies at or past the train duration are dropped. Only
/// feedforward stages are representable.
EventSequence comb_apply_events(const EventSequence& events, const CombStage& stage,
                                double dead_time_ns);

/// P_peak * (width / T_clk) * (n / N), with width in ps.
double avg_power(const Pattern& p, double width_ps, double f_clk_ghz, double p_peak);

/// Same, using the pulse's equivalent power width so that P_peak = amplitude^2
/// reproduces the time-averaged V^2 of a rendered train.
double avg_power(const Pattern& p, const PulseShape& shape, double f_clk_ghz, double p_peak);

}  // namespace csrtone

#endif
