#ifndef CSRTONE_COMB_TUNER_HPP
#define CSRTONE_COMB_TUNER_HPP

#include <optional>
#include <vector>

#include "csrtone/pattern.hpp"

namespace csrtone {

struct ToneTrace {
  double frequency_ghz = 0.0;
  std::vector<double> power;
};

/// Analytic tone powers behind a unity feedforward stage across a delay sweep.
///
/// separation holds |a(f1) - a(f2)| with a = |c(f) H(f)| the tone amplitude;
/// it is filled only for two targets. degenerate marks delays within half a
/// step of a multiple of the clock period, where coincident SFQ pulses merge
/// and the linear model does not describe the hardware.
struct SweepResult {
  std::vector<double> delays_ns;
  std::vector<ToneTrace> tones;
  std::vector<double> separation;
  std::vector<bool> degenerate;
};

struct Objective {
  enum class Kind { suppress, amplify, max_separation, min_separation };
  Kind kind = Kind::suppress;
  double f1_ghz = 0.0;
  double f2_ghz = 0.0;

  static Objective suppress(double f) { return {Kind::suppress, f, 0.0}; }
  static Objective amplify(double f) { return {Kind::amplify, f, 0.0}; }
  static Objective max_separation(double f1, double f2) { return {Kind::max_separation, f1, f2}; }
  static Objective min_separation(double f1, double f2) { return {Kind::min_separation, f1, f2}; }

  bool two_tone() const { return kind == Kind::max_separation || kind == Kind::min_separation; }
  bool maximise() const { return kind == Kind::amplify || kind == Kind::max_separation; }
};

inline constexpr int kDefaultSweepSteps = 1000;

/// Throws std::invalid_argument if f is not on the tone grid k * f_clk / N.
void require_on_grid(const Pattern& p, double f_clk_ghz, double f_ghz);

/// Power of tone f behind a unity feedforward stage with delay tau.
double filtered_power(const Pattern& p, double f_clk_ghz, double f_ghz, double delay_ns);

/// Objective value at one delay: tone power for suppress/amplify, amplitude
/// separation for the two-tone objectives.
double objective_value(const Pattern& p, double f_clk_ghz, const Objective& obj, double delay_ns);

/// Delays run over [0, tau_max]; an empty tau_max selects N / f_clk.
SweepResult sweep_delay(const Pattern& p, double f_clk_ghz, std::optional<double> tau_max_ns,
                        int steps, const std::vector<double>& targets_ghz);

struct DelayOptimum {
  double delay_ns = 0.0;
  double value = 0.0;
};

/// Grid sweep, then golden-section refinement around every non-degenerate
/// local optimum. Optima tied within 1e-9 of the objective scale resolve to
/// the smallest delay. Throws DomainError when the objective is identically
/// zero (e.g. both tones absent from the pattern).
DelayOptimum optimize_delay(const Pattern& p, double f_clk_ghz, const Objective& obj,
                            std::optional<double> tau_max_ns = std::nullopt,
                            int steps = kDefaultSweepSteps);

}  // namespace csrtone

#endif
