#include "csrtone/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace csrtone {

using nlohmann::json;

std::string format_number(double v) { return fmt::format("{}", v); }

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) os << ',';
    os << t.columns[c];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << format_number(row[c]);
    }
    os << '\n';
  }
}

Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty CSV");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      row.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument("bad CSV number: " + cell);
    }
    if (row.size() != t.columns.size()) throw std::invalid_argument("ragged CSV row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

json to_json(const Table& t) {
  json out = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = row[c];
    out.push_back(std::move(obj));
  }
  return out;
}

Table spectrum_table(const ToneSpectrum& s) {
  Table t{{"frequency_GHz", "re", "im", "power"}, {}};
  for (int k = 0; k < s.n_bits; ++k) {
    const auto c = s.amplitudes[static_cast<std::size_t>(k)];
    t.rows.push_back({s.frequency(k), c.real(), c.imag(), s.power(k)});
  }
  return t;
}

Table events_table(const EventSequence& ev) {
  Table t{{"time_ns"}, {}};
  for (double x : ev.times_ns) t.rows.push_back({x});
  return t;
}

Table waveform_table(const Waveform& w) {
  Table t{{"time_ns", "voltage_mV"}, {}};
  for (std::size_t i = 0; i < w.size(); ++i) t.rows.push_back({w.time_ns[i], w.voltage_mv[i]});
  return t;
}

Table periodogram_table(const Periodogram& pg) {
  Table t{{"frequency_GHz", "power"}, {}};
  for (std::size_t i = 0; i < pg.frequency_ghz.size(); ++i) {
    t.rows.push_back({pg.frequency_ghz[i], pg.power[i]});
  }
  return t;
}

Table sweep_table(const SweepResult& r) {
  Table t;
  t.columns.push_back("delay_ns");
  for (const auto& tone : r.tones) t.columns.push_back("power_" + format_number(tone.frequency_ghz) + "GHz");
  const bool sep = !r.separation.empty();
  if (sep) t.columns.push_back("separation");
  for (std::size_t i = 0; i < r.delays_ns.size(); ++i) {
    std::vector<double> row{r.delays_ns[i]};
    for (const auto& tone : r.tones) row.push_back(tone.power[i]);
    if (sep) row.push_back(r.separation[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

json periodogram_metadata(const Periodogram& pg) {
  return {{"kind", pg.kind == SpectrumKind::psd ? "psd" : "power_spectrum"},
          {"n_samples", pg.n_samples},
          {"f_res", pg.f_res_hz}};
}

json catalog_json(const std::vector<EquivalenceClass>& classes) {
  json out = json::array();
  for (const auto& c : classes) {
    json entry{{"canonical", c.canonical.str()},
               {"set_bits", c.set_bits()},
               {"distance_set", c.canonical.silent() ? std::vector<int>{} : distance_set(c.canonical).gaps},
               {"signature", c.signature}};
    if (c.dual_canonical) entry["dual"] = c.dual_canonical->str();
    if (!c.members.empty()) {
      json members = json::array();
      for (const auto& m : c.members) members.push_back(m.str());
      entry["members"] = std::move(members);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

void write_catalog_csv(std::ostream& os, const std::vector<EquivalenceClass>& classes) {
  os << "canonical,set_bits,distance_set,signature\n";
  for (const auto& c : classes) {
    os << c.canonical.str() << ',' << c.set_bits() << ',';
    if (!c.canonical.silent()) {
      const auto gaps = distance_set(c.canonical).gaps;
      for (std::size_t i = 0; i < gaps.size(); ++i) os << (i ? " " : "") << gaps[i];
    }
    os << ',';
    for (std::size_t i = 0; i < c.signature.size(); ++i) {
      os << (i ? " " : "") << format_number(c.signature[i]);
    }
    os << '\n';
  }
}

json to_json(const ToneMetrics& m) {
  return {{"center_GHz", m.center_ghz}, {"peak_power", m.peak_power}, {"fwhm_GHz", m.fwhm_ghz}};
}

json to_json(const DelayOptimum& o) { return {{"delay_ns", o.delay_ns}, {"value", o.value}}; }

ClockStyle parse_clock_style(const std::string& s) {
  if (s == "symmetric") return ClockStyle::symmetric;
  if (s == "binary_tree") return ClockStyle::binary_tree;
  throw std::invalid_argument("unknown clock style: " + s);
}

std::string to_string(ClockStyle s) {
  return s == ClockStyle::symmetric ? "symmetric" : "binary_tree";
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw std::invalid_argument("unknown field in " + std::string(where) + ": " + key);
  }
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("bad value for field: ") + key);
  }
}

double number(const json& v, const char* key) {
  if (!v.is_number()) throw std::invalid_argument(std::string("bad value for field: ") + key);
  return v.get<double>();
}

}  // namespace

TimingNetConfig timing_config_from_json(const json& j) {
  reject_unknown(j, {"n_bits", "style", "f_clk_GHz", "cell", "stage_delay_ps", "clock_arrivals_ps"},
                 "timing config");
  const int n = required<int>(j, "n_bits");
  const ClockStyle style = parse_clock_style(required<std::string>(j, "style"));
  const double f = required<double>(j, "f_clk_GHz");

  CellTiming cell;
  if (j.contains("cell")) {
    const json& c = j.at("cell");
    reject_unknown(c, {"setup_ps", "hold_ps", "clk_to_q_ps", "data_delay_ps"}, "cell");
    if (c.contains("setup_ps")) cell.setup = from_ps(number(c.at("setup_ps"), "setup_ps"));
    if (c.contains("hold_ps")) cell.hold = from_ps(number(c.at("hold_ps"), "hold_ps"));
    if (c.contains("clk_to_q_ps")) cell.clk_to_q = from_ps(number(c.at("clk_to_q_ps"), "clk_to_q_ps"));
    if (c.contains("data_delay_ps")) {
      cell.data_delay = from_ps(number(c.at("data_delay_ps"), "data_delay_ps"));
    }
  }

  if (j.contains("clock_arrivals_ps")) {
    if (j.contains("stage_delay_ps")) {
      throw std::invalid_argument("stage_delay_ps and clock_arrivals_ps are exclusive");
    }
    const json& a = j.at("clock_arrivals_ps");
    if (!a.is_array() || a.size() != static_cast<std::size_t>(std::max(n, 0))) {
      throw std::invalid_argument("clock_arrivals_ps must list one time per cell");
    }
    if (n < 1) throw std::invalid_argument("register needs at least one cell");
    if (!(f > 0.0)) throw std::invalid_argument("clock frequency must be positive");
    TimingNetConfig cfg;
    cfg.n_bits = n;
    cfg.style = style;
    cfg.f_clk_ghz = f;
    cfg.cell = cell;
    for (const auto& v : a) cfg.clock_arrivals.push_back(from_ps(number(v, "clock_arrivals_ps")));
    return cfg;
  }

  std::optional<femtoseconds> stage;
  if (j.contains("stage_delay_ps")) stage = from_ps(number(j.at("stage_delay_ps"), "stage_delay_ps"));
  return build_network(n, style, f, cell, stage);
}

json to_json(const TimingNetConfig& cfg) {
  json arrivals = json::array();
  for (auto t : cfg.clock_arrivals) arrivals.push_back(to_ps(t));
  return {{"n_bits", cfg.n_bits},
          {"style", to_string(cfg.style)},
          {"f_clk_GHz", cfg.f_clk_ghz},
          {"cell",
           {{"setup_ps", to_ps(cfg.cell.setup)},
            {"hold_ps", to_ps(cfg.cell.hold)},
            {"clk_to_q_ps", to_ps(cfg.cell.clk_to_q)},
            {"data_delay_ps", to_ps(cfg.cell.data_delay)}}},
          {"clock_arrivals_ps", arrivals}};
}

json to_json(const TimingReport& r) {
  json skews = json::array();
  for (auto s : r.per_cell_skew) skews.push_back(to_ps(s));
  auto list = [](const std::vector<Violation>& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back({{"cell", v.cell}, {"slack_ps", to_ps(v.slack)}});
    return out;
  };
  return {{"per_cell_skew_ps", skews},
          {"total_skew_ps", to_ps(r.total_skew)},
          {"race_violations", list(r.race_violations)},
          {"setup_violations", list(r.setup_violations)},
          {"ok", r.ok}};
}

}  // namespace csrtone
