#ifndef CSRTONE_IO_HPP
#define CSRTONE_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "csrtone/comb_tuner.hpp"
#include "csrtone/pattern.hpp"
#include "csrtone/periodogram.hpp"
#include "csrtone/pulse.hpp"
#include "csrtone/spectrum.hpp"
#include "csrtone/timing.hpp"

namespace csrtone {

/// Numeric table behind every CSV/JSON output, so both formats carry the
/// same numbers.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Shortest representation that round-trips to the same double.
std::string format_number(double v);

void write_csv(std::ostream& os, const Table& t);
Table read_csv(std::istream& is);
/// Array of objects keyed by column name.
nlohmann::json to_json(const Table& t);

// frequency_GHz, re, im, power
Table spectrum_table(const ToneSpectrum& s);
// time_ns
Table events_table(const EventSequence& ev);
// time_ns, voltage_mV
Table waveform_table(const Waveform& w);
// frequency_GHz, power
Table periodogram_table(const Periodogram& pg);
// delay_ns, power_<f>GHz per target, separation (two targets only)
Table sweep_table(const SweepResult& r);

/// Sidecar: {kind, n_samples, f_res}.
nlohmann::json periodogram_metadata(const Periodogram& pg);

/// Array of {canonical, set_bits, distance_set, signature}.
nlohmann::json catalog_json(const std::vector<EquivalenceClass>& classes);
void write_catalog_csv(std::ostream& os, const std::vector<EquivalenceClass>& classes);

nlohmann::json to_json(const ToneMetrics& m);
nlohmann::json to_json(const DelayOptimum& o);

/// {n_bits, style, f_clk_GHz, cell:{setup_ps, hold_ps, clk_to_q_ps, data_delay_ps}}
/// plus optional stage_delay_ps or clock_arrivals_ps. Unknown keys are rejected
/// with std::invalid_argument.
TimingNetConfig timing_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TimingNetConfig& cfg);
nlohmann::json to_json(const TimingReport& r);

ClockStyle parse_clock_style(const std::string& s);
std::string to_string(ClockStyle s);

}  // namespace csrtone

#endif
