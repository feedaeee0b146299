#ifndef CSRTONE_SPECTRUM_HPP
#define CSRTONE_SPECTRUM_HPP

#include <complex>
#include <span>
#include <vector>

#include "csrtone/pattern.hpp"

namespace csrtone {

// Units throughout: frequencies in GHz, times in ns.

/// Complex tone amplitudes of an ideal delta-train on the grid k * f_clk / N.
///
/// One period (k = 0..N-1) is stored; the spectrum repeats every f_clk. The
/// physical line weights carry the prefactor scale() = 1/(N T) = f_clk / N.
struct ToneSpectrum {
  double f_clk_ghz = 0.0;
  int n_bits = 0;
  std::vector<std::complex<double>> amplitudes;

  double spacing_ghz() const { return f_clk_ghz / n_bits; }
  double scale() const { return spacing_ghz(); }
  double frequency(int k) const { return k * spacing_ghz(); }
  double power(int k) const { return std::norm(amplitudes[static_cast<std::size_t>(k)]); }
  double max_power() const;
};

enum class CombKind { feedforward, feedback };

/// y(t) = x(t) + alpha x(t - tau) (feedforward) or x(t) + alpha y(t - tau).
/// alpha > 1 models an amplifying delay branch.
struct CombStage {
  double delay_ns = 0.0;
  double alpha = 1.0;
  CombKind kind = CombKind::feedforward;

  static CombStage feedforward(double delay_ns, double alpha = 1.0) {
    return {delay_ns, alpha, CombKind::feedforward};
  }
  static CombStage feedback(double delay_ns, double alpha) {
    return {delay_ns, alpha, CombKind::feedback};
  }
};

/// c(f) = sum_k S_k exp(-2 pi j f k T).
std::complex<double> modulation(const Pattern& p, double f_ghz, double period_ns);

/// c_k = c(k f_clk / N) with T = 1 / f_clk, i.e. the DFT of the bit sequence.
ToneSpectrum tone_spectrum(const Pattern& p, double f_clk_ghz);

/// Throws std::invalid_argument on negative delay, UnstableStage on a
/// feedback stage with |alpha| >= 1.
void validate(const CombStage& stage);

std::complex<double> comb_response(const CombStage& stage, double f_ghz);

/// Multiplies every tone by the product of the stage responses at its frequency.
ToneSpectrum apply_comb(ToneSpectrum s, std::span<const CombStage> stages);

}  // namespace csrtone

#endif
