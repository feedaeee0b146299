#include "csrtone/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "csrtone/error.hpp"

namespace csrtone {

namespace {

// exp(-2 pi j x), reducing x to [0, 1) first so large arguments keep precision.
std::complex<double> unit_phasor(double x) {
  const double frac = x - std::floor(x);
  return std::polar(1.0, -2.0 * std::numbers::pi * frac);
}

}  // namespace

double ToneSpectrum::max_power() const {
  double best = 0.0;
  for (const auto& c : amplitudes) best = std::max(best, std::norm(c));
  return best;
}

std::complex<double> modulation(const Pattern& p, double f_ghz, double period_ns) {
  if (!(period_ns > 0.0)) throw std::invalid_argument("clock period must be positive");
  std::complex<double> c{0.0, 0.0};
  for (int k = 0; k < p.size(); ++k) {
    if (p[static_cast<std::size_t>(k)]) c += unit_phasor(f_ghz * k * period_ns);
  }
  return c;
}

ToneSpectrum tone_spectrum(const Pattern& p, double f_clk_ghz) {
  if (!(f_clk_ghz > 0.0)) throw std::invalid_argument("clock frequency must be positive");
  const int n = p.size();
  // On the grid the phase f k T = (tone * k) / N is rational, so reduce it
  // exactly with integers and read the twiddle from a table.
  std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    twiddle[static_cast<std::size_t>(m)] = unit_phasor(static_cast<double>(m) / n);
  }
  ToneSpectrum s;
  s.f_clk_ghz = f_clk_ghz;
  s.n_bits = n;
  s.amplitudes.assign(static_cast<std::size_t>(n), {0.0, 0.0});
  for (int tone = 0; tone < n; ++tone) {
    std::complex<double> c{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
      if (p[static_cast<std::size_t>(k)]) {
        c += twiddle[static_cast<std::size_t>((static_cast<long long>(tone) * k) % n)];
      }
    }
    s.amplitudes[static_cast<std::size_t>(tone)] = c;
  }
  return s;
}

void validate(const CombStage& stage) {
  if (!(stage.delay_ns >= 0.0)) throw std::invalid_argument("comb delay must be non-negative");
  if (!std::isfinite(stage.alpha)) throw std::invalid_argument("comb scaling must be finite");
  if (stage.kind == CombKind::feedback && std::abs(stage.alpha) >= 1.0) throw UnstableStage();
}

std::complex<double> comb_response(const CombStage& stage, double f_ghz) {
  validate(stage);
  const std::complex<double> delayed = stage.alpha * unit_phasor(f_ghz * stage.delay_ns);
  if (stage.kind == CombKind::feedforward) return 1.0 + delayed;
  return 1.0 / (1.0 - delayed);
}

ToneSpectrum apply_comb(ToneSpectrum s, std::span<const CombStage> stages) {
  for (const auto& stage : stages) {
    for (int k = 0; k < s.n_bits; ++k) {
      s.amplitudes[static_cast<std::size_t>(k)] *= comb_response(stage, s.frequency(k));
    }
  }
  return s;
}

}  // namespace csrtone
