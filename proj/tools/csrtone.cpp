#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "csrtone/comb_tuner.hpp"
#include "csrtone/error.hpp"
#include "csrtone/io.hpp"
#include "csrtone/pattern.hpp"
#include "csrtone/periodogram.hpp"
#include "csrtone/pulse.hpp"
#include "csrtone/spectrum.hpp"
#include "csrtone/timing.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace csrtone;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct Globals {
  std::string out = ".";
  std::string format = "csv";
  std::uint64_t seed = 0;
};

bool as_json(const Globals& g) { return g.format == "json"; }

fs::path prepare(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return fs::path(g.out) / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void emit_table(const Globals& g, const std::string& stem, const Table& t) {
  if (as_json(g)) {
    write_text(prepare(g, stem + ".json"), to_json(t).dump(2) + "\n");
    return;
  }
  std::ofstream f(prepare(g, stem + ".csv"), std::ios::binary);
  write_csv(f, t);
}

void emit_json(const Globals& g, const std::string& name, const json& j) {
  write_text(prepare(g, name), j.dump(2) + "\n");
}

// "tau" or "tau,alpha"
CombStage parse_comb(const std::string& spec, CombKind kind) {
  const auto comma = spec.find(',');
  std::size_t used = 0;
  const std::string tau_text = spec.substr(0, comma);
  const double tau = std::stod(tau_text, &used);
  if (used != tau_text.size()) throw std::invalid_argument("bad comb delay: " + spec);
  double alpha = 1.0;
  if (comma != std::string::npos) {
    const std::string a = spec.substr(comma + 1);
    alpha = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument("bad comb scaling: " + spec);
  } else if (kind == CombKind::feedback) {
    throw std::invalid_argument("feedback stage needs tau,alpha");
  }
  CombStage s{tau, alpha, kind};
  validate(s);
  return s;
}

std::vector<CombStage> parse_stages(const std::vector<std::string>& ff,
                                    const std::vector<std::string>& fb) {
  std::vector<CombStage> stages;
  for (const auto& s : ff) stages.push_back(parse_comb(s, CombKind::feedforward));
  for (const auto& s : fb) stages.push_back(parse_comb(s, CombKind::feedback));
  return stages;
}

struct PatternsArgs {
  int n = 0;
  bool bounds = false;
  bool json = false;
  bool all = false;
  bool members = false;
};

int run_patterns(Globals g, const PatternsArgs& a) {
  if (a.json) g.format = "json";
  EnumerateOptions opts;
  opts.collect_members = a.members;
  auto classes = enumerate_unique(a.n, opts);
  if (a.all) classes = expand_duals(classes);
  const std::string stem = fmt::format("patterns_{}", a.n);
  if (as_json(g)) {
    emit_json(g, stem + ".json", catalog_json(classes));
  } else {
    std::ofstream f(prepare(g, stem + ".csv"), std::ios::binary);
    write_catalog_csv(f, classes);
  }
  std::cout << "classes=" << classes.size() << '\n';
  if (a.bounds) {
    const auto b = count_bounds(a.n);
    std::cout << "lower=" << b.lower << " upper=" << b.upper << '\n';
  }
  return 0;
}

struct SpectrumArgs {
  std::string pattern;
  double f_clk = 0.0;
  std::vector<std::string> comb;
  std::vector<std::string> feedback;
};

int run_spectrum(const Globals& g, const SpectrumArgs& a) {
  const Pattern p = Pattern::parse(a.pattern);
  const auto stages = parse_stages(a.comb, a.feedback);
  const ToneSpectrum s = apply_comb(tone_spectrum(p, a.f_clk), stages);
  emit_table(g, "spectrum", spectrum_table(s));
  return 0;
}

struct SynthArgs {
  std::string pattern;
  double f_clk = 0.0;
  double duration = 0.0;
  double vc = 1.0;
  double jitter = 0.0;
  bool estimate = false;
  double sample_rate = kDefaultSampleRateGHz;
  std::optional<double> uneven;
  std::vector<std::string> comb;
  std::optional<double> dead_time;
  std::vector<double> tones;
  std::optional<double> fmax;
  double oversample = kDefaultOversample;
};

void emit_periodogram(const Globals& g, const std::string& stem, const Periodogram& pg) {
  if (as_json(g)) {
    json j = periodogram_metadata(pg);
    j["data"] = to_json(periodogram_table(pg));
    emit_json(g, stem + ".json", j);
    return;
  }
  emit_table(g, stem, periodogram_table(pg));
  emit_json(g, stem + ".meta.json", periodogram_metadata(pg));
}

int run_synth(const Globals& g, const SynthArgs& a) {
  const Pattern p = Pattern::parse(a.pattern);
  if (!(a.duration > 0.0)) throw std::invalid_argument("duration must be positive");
  const PulseShape shape = pulse_shape(a.vc);
  EventSequence ev = event_times(p, a.f_clk, a.duration, {a.jitter, g.seed});
  // Coincident SFQ pulses merge; by default anything within one pulse width.
  const double dead_time = a.dead_time.value_or(shape.width_ps * 1e-3);
  for (const auto& c : a.comb) {
    ev = comb_apply_events(ev, parse_comb(c, CombKind::feedforward), dead_time);
  }
  Timebase tb = EvenTimebase{};
  if (a.uneven) tb = UnevenTimebase{g.seed + 1, *a.uneven};
  const Waveform w = render(ev, shape, a.sample_rate, tb);
  emit_table(g, "events", events_table(ev));
  emit_table(g, "waveform", waveform_table(w));
  if (!a.estimate) return 0;

  const double fmax = a.fmax.value_or(std::min(a.f_clk, 0.5 * a.sample_rate));
  const auto grid = frequency_grid(0.0, fmax, a.duration, a.oversample);
  const Periodogram ps = lomb_scargle(w, grid);
  const Periodogram psd = to_psd(ps);
  emit_periodogram(g, "periodogram", ps);
  emit_periodogram(g, "psd", psd);

  std::vector<double> targets = a.tones;
  const ToneSpectrum analytic = tone_spectrum(p, a.f_clk);
  if (targets.empty()) {
    for (int k = 1; k < p.size(); ++k) {
      if (analytic.power(k) > 1e-9 * analytic.max_power() && analytic.frequency(k) <= fmax) {
        targets.push_back(analytic.frequency(k));
      }
    }
  }
  json metrics = json::array();
  for (double f : targets) {
    json entry{{"tone_GHz", f}};
    try {
      entry["metrics"] = to_json(tone_metrics(ps, f, 0.5 * analytic.spacing_ghz()));
    } catch (const std::invalid_argument& e) {
      entry["metrics"] = nullptr;
      entry["error"] = e.what();
    }
    metrics.push_back(std::move(entry));
  }
  emit_json(g, "tones.json", metrics);
  return 0;
}

struct TuneArgs {
  std::string pattern;
  double f_clk = 0.0;
  std::string kind;
  double f1 = 0.0;
  std::optional<double> f2;
  std::optional<double> tau_max;
  int steps = kDefaultSweepSteps;
};

Objective parse_objective(const TuneArgs& a) {
  const bool two = a.kind == "max-separation" || a.kind == "min-separation";
  if (two != a.f2.has_value()) {
    throw std::invalid_argument(two ? "objective needs two tones" : "objective takes one tone");
  }
  if (a.kind == "suppress") return Objective::suppress(a.f1);
  if (a.kind == "amplify") return Objective::amplify(a.f1);
  if (a.kind == "max-separation") return Objective::max_separation(a.f1, *a.f2);
  if (a.kind == "min-separation") return Objective::min_separation(a.f1, *a.f2);
  throw std::invalid_argument("unknown objective: " + a.kind);
}

int run_tune(const Globals& g, const TuneArgs& a) {
  const Pattern p = Pattern::parse(a.pattern);
  const Objective obj = parse_objective(a);
  std::vector<double> targets{a.f1};
  if (a.f2) targets.push_back(*a.f2);
  const SweepResult sweep = sweep_delay(p, a.f_clk, a.tau_max, a.steps, targets);
  const DelayOptimum best = optimize_delay(p, a.f_clk, obj, a.tau_max, a.steps);

  emit_table(g, "sweep", sweep_table(sweep));
  json opt = to_json(best);
  opt["objective"] = a.kind;
  opt["targets_GHz"] = targets;
  json degenerate = json::array();
  for (std::size_t i = 0; i < sweep.delays_ns.size(); ++i) {
    if (sweep.degenerate[i]) degenerate.push_back(sweep.delays_ns[i]);
  }
  opt["degenerate_delays_ns"] = degenerate;
  emit_json(g, "optimum.json", opt);
  std::cout << "tau=" << format_number(best.delay_ns) << " value=" << format_number(best.value)
            << '\n';
  return 0;
}

struct TimingArgs {
  std::string config;
  std::vector<std::string> simulate;
  double jitter = 0.0;
};

int run_timing(const Globals& g, const TimingArgs& a) {
  std::ifstream f(a.config);
  if (!f) throw std::invalid_argument("cannot read config " + a.config);
  json raw;
  try {
    raw = json::parse(f);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("bad JSON config: ") + e.what());
  }
  const TimingNetConfig cfg = timing_config_from_json(raw);
  const TimingReport report = check_timing(cfg);
  json out{{"config", to_json(cfg)}, {"report", to_json(report)}};
  out["splitters"] = cfg.n_bits >= 2 && !(cfg.style == ClockStyle::symmetric && cfg.n_bits % 2)
                         ? json(splitter_count(cfg.style, cfg.n_bits))
                         : json(nullptr);
  emit_json(g, "timing_report.json", out);
  std::cout << "total_skew_ps=" << format_number(to_ps(report.total_skew))
            << " race_violations=" << report.race_violations.size()
            << " setup_violations=" << report.setup_violations.size()
            << " ok=" << (report.ok ? "true" : "false") << '\n';

  if (!a.simulate.empty()) {
    const Pattern p = Pattern::parse(a.simulate.at(0));
    std::size_t used = 0;
    const double duration = std::stod(a.simulate.at(1), &used);
    if (used != a.simulate.at(1).size()) throw std::invalid_argument("bad duration");
    const std::vector<CsrOp> ops{CsrOp::close_loop(), CsrOp::run(duration)};
    const EventSequence ev = simulate_csr(cfg, p, ops, {a.jitter, g.seed});
    emit_table(g, "events", events_table(ev));
  }
  if (!report.ok) {
    for (const auto& v : report.race_violations) {
      std::cerr << "race violation at cell " << v.cell << ", slack "
                << format_number(to_ps(v.slack)) << " ps\n";
    }
    for (const auto& v : report.setup_violations) {
      std::cerr << "setup violation at cell " << v.cell << ", slack "
                << format_number(to_ps(v.slack)) << " ps\n";
    }
    return kExitDomain;
  }
  return 0;
}

void add_globals(CLI::App& app, Globals& g) {
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "Seed for every random draw");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral pattern design for SFQ circular shift registers"};
  app.require_subcommand(1);
  Globals g;
  add_globals(app, g);
  app.fallthrough();

  PatternsArgs pa;
  auto* patterns = app.add_subcommand("patterns", "Enumerate spectrally unique patterns");
  patterns->add_option("N", pa.n, "Register length")->required();
  patterns->add_flag("--bounds", pa.bounds, "Print count bounds");
  patterns->add_flag("--json", pa.json, "Same as --format json");
  patterns->add_flag("--all", pa.all, "List every class, including the duals");
  patterns->add_flag("--members", pa.members, "Include every member of each class");

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Analytic tone spectrum");
  spectrum->add_option("PATTERN", sa.pattern)->required();
  spectrum->add_option("F_CLK", sa.f_clk, "Clock frequency, GHz")->required();
  spectrum->add_option("--comb", sa.comb, "Feedforward stage tau[,alpha] (ns)");
  spectrum->add_option("--feedback", sa.feedback, "Feedback stage tau,alpha (ns)");

  SynthArgs ya;
  auto* synth = app.add_subcommand("synth", "Synthesize a pulse train and estimate its spectrum");
  synth->add_option("PATTERN", ya.pattern)->required();
  synth->add_option("F_CLK", ya.f_clk, "Clock frequency, GHz")->required();
  synth->add_option("DURATION", ya.duration, "Train length, ns")->required();
  synth->add_option("--vc", ya.vc, "Characteristic voltage");
  synth->add_option("--jitter", ya.jitter, "Timing jitter sigma, ps");
  synth->add_flag("--estimate", ya.estimate, "Lomb-Scargle estimate");
  synth->add_option("--sample-rate", ya.sample_rate, "GHz");
  synth->add_option("--uneven", ya.uneven, "Uneven sampling spread in sample periods");
  synth->add_option("--comb", ya.comb, "Feedforward stage tau[,alpha] in the event domain");
  synth->add_option("--dead-time", ya.dead_time, "Merge window for combined events, ns (default: pulse FWHM)");
  synth->add_option("--tone", ya.tones, "Tone to measure, GHz");
  synth->add_option("--fmax", ya.fmax, "Upper edge of the estimate, GHz");
  synth->add_option("--oversample", ya.oversample);

  TuneArgs ta;
  auto* tune = app.add_subcommand("tune", "Sweep and optimize a comb delay");
  tune->add_option("PATTERN", ta.pattern)->required();
  tune->add_option("F_CLK", ta.f_clk, "Clock frequency, GHz")->required();
  tune->add_option("KIND", ta.kind, "suppress|amplify|max-separation|min-separation")->required();
  tune->add_option("F1", ta.f1, "Target tone, GHz")->required();
  tune->add_option("F2", ta.f2, "Second tone, GHz");
  tune->add_option("--tau-max", ta.tau_max, "Sweep range, ns");
  tune->add_option("--steps", ta.steps, "Sweep points");

  TimingArgs ma;
  auto* timing = app.add_subcommand("timing", "Check a clock network and simulate the register");
  timing->add_option("CONFIG", ma.config, "JSON network description")->required();
  timing->add_option("--simulate", ma.simulate, "PATTERN DURATION")->expected(2);
  timing->add_option("--jitter", ma.jitter, "Clock jitter sigma, ps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*patterns) return run_patterns(g, pa);
    if (*spectrum) return run_spectrum(g, sa);
    if (*synth) return run_synth(g, ya);
    if (*tune) return run_tune(g, ta);
    if (*timing) return run_timing(g, ma);
  } catch (const TimingViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& v : e.report().race_violations) {
      std::cerr << "race violation at cell " << v.cell << ", slack "
                << format_number(to_ps(v.slack)) << " ps\n";
    }
    return kExitDomain;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
