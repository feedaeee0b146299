#ifndef CSRTONE_PERIODOGRAM_HPP
#define CSRTONE_PERIODOGRAM_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "csrtone/pulse.hpp"

namespace csrtone {

enum class SpectrumKind { power_spectrum, psd };

struct Periodogram {
  std::vector<double> frequency_ghz;
  /// mV^2 for a power spectrum, mV^2/Hz for a PSD.
  std::vector<double> power;
  SpectrumKind kind = SpectrumKind::power_spectrum;
  std::size_t n_samples = 0;
  /// Rayleigh resolution 1 / (t_last - t_first), in Hz.
  double f_res_hz = 0.0;
};

struct ToneMetrics {
  double center_ghz = 0.0;
  double peak_power = 0.0;
  double fwhm_ghz = 0.0;
};

inline constexpr double kDefaultOversample = 8.0;

/// Evenly spaced grid on [f_min, f_max] with spacing 1 / (oversample * duration).
/// A zero f_min is skipped: the mean-subtracted periodogram is undefined there.
std::vector<double> frequency_grid(double f_min_ghz, double f_max_ghz, double duration_ns,
                                   double oversample = kDefaultOversample);

/// Classical (unnormalised) Lomb-Scargle periodogram with the per-frequency
/// time offset tau. The mean is removed first. For even sampling at the
/// Fourier frequencies it equals |DFT|^2 / N.
///
/// Uneven sampling has no hard Nyquist limit; grids should stay below half
/// the mean sample rate. Throws std::invalid_argument on fewer than two
/// samples, a constant waveform, or a non-positive grid frequency.
Periodogram lomb_scargle(const Waveform& w, std::span<const double> frequencies_ghz);

/// PSD = PS / (f_res * n_samples). Throws if pg is already a PSD.
Periodogram to_psd(Periodogram pg);

/// Peak inside [f0 - window, f0 + window] and its full width at half maximum,
/// linearly interpolated between grid points. Throws std::invalid_argument
/// when the window holds no local maximum or a half-power crossing is missing.
ToneMetrics tone_metrics(const Periodogram& pg, double f0_ghz, double window_ghz);

}  // namespace csrtone

#endif
