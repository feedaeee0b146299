#include "csrtone/timing.hpp"

#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

namespace csrtone {

femtoseconds from_ps(double ps) {
  if (!std::isfinite(ps)) throw std::invalid_argument("time must be finite");
  return femtoseconds{std::llround(ps * 1e3)};
}

double to_ps(femtoseconds t) { return static_cast<double>(t.count()) / 1e3; }

double to_ns(femtoseconds t) { return static_cast<double>(t.count()) / 1e6; }

femtoseconds clock_period(double f_clk_ghz) {
  if (!(f_clk_ghz > 0.0)) throw std::invalid_argument("clock frequency must be positive");
  return femtoseconds{std::llround(1e6 / f_clk_ghz)};
}

TimingNetConfig build_network(int n, ClockStyle style, double f_clk_ghz, const CellTiming& cell,
                              std::optional<femtoseconds> stage_delay) {
  if (n < 1) throw std::invalid_argument("register needs at least one cell");
  if (!(f_clk_ghz > 0.0)) throw std::invalid_argument("clock frequency must be positive");
  if (style == ClockStyle::symmetric && n % 2 != 0) {
    throw std::invalid_argument("symmetric clocking requires an even number of cells");
  }
  const femtoseconds d = stage_delay.value_or(cell.data_delay);
  if (d < femtoseconds{0}) throw std::invalid_argument("stage delay must be non-negative");

  TimingNetConfig cfg;
  cfg.n_bits = n;
  cfg.style = style;
  cfg.f_clk_ghz = f_clk_ghz;
  cfg.cell = cell;
  cfg.clock_arrivals.resize(static_cast<std::size_t>(n));
  if (style == ClockStyle::binary_tree) {
    int depth = 0;
    while ((1 << depth) < n) ++depth;
    for (auto& t : cfg.clock_arrivals) t = depth * d;
  } else {
    const int half = n / 2;
    for (int i = 0; i < half; ++i) {
      cfg.clock_arrivals[static_cast<std::size_t>(i)] = i * d;
      cfg.clock_arrivals[static_cast<std::size_t>(half + i)] = (half - 1 - i) * d;
    }
  }
  return cfg;
}

int splitter_count(ClockStyle style, int n) {
  if (n < 2) throw std::invalid_argument("clock network needs at least two cells");
  if (style == ClockStyle::binary_tree) return n - 1;
  if (n % 2 != 0) throw std::invalid_argument("symmetric clocking requires an even number of cells");
  return n / 2;
}

TimingReport check_timing(const TimingNetConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.n_bits);
  if (n == 0 || cfg.clock_arrivals.size() != n) {
    throw std::invalid_argument("clock arrivals must list one time per cell");
  }
  const femtoseconds period = clock_period(cfg.f_clk_ghz);
  const CellTiming& c = cfg.cell;

  TimingReport r;
  r.per_cell_skew.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const femtoseconds skew = cfg.clock_arrivals[i] - cfg.clock_arrivals[(i + 1) % n];
    r.per_cell_skew[i] = skew;
    r.total_skew += skew;

    const femtoseconds hold_slack = skew + c.clk_to_q + c.data_delay - c.hold;
    if (hold_slack <= femtoseconds{0}) r.race_violations.push_back({static_cast<int>(i), hold_slack});
    const femtoseconds setup_slack = period - c.setup - c.clk_to_q - c.data_delay - skew;
    if (setup_slack < femtoseconds{0}) {
      r.setup_violations.push_back({static_cast<int>(i), setup_slack});
    }
  }
  r.ok = r.total_skew == femtoseconds{0} && r.race_violations.empty() &&
         r.setup_violations.empty();
  return r;
}

femtoseconds output_latency(const TimingNetConfig& cfg) {
  if (cfg.clock_arrivals.empty()) throw std::invalid_argument("empty clock network");
  return cfg.clock_arrivals.back() + cfg.cell.clk_to_q;
}

namespace {

struct SimEvent {
  femtoseconds time;
  int kind;  // 0 = clock, 1 = data; clocks first on ties
  std::uint64_t seq;
  int cell;
  bool record;

  bool operator>(const SimEvent& o) const {
    if (time != o.time) return time > o.time;
    if (kind != o.kind) return kind > o.kind;
    return seq > o.seq;
  }
};

class RingSimulator {
public:
  RingSimulator(const TimingNetConfig& cfg, const JitterModel& jitter)
      : cfg_(cfg),
        period_(clock_period(cfg.f_clk_ghz)),
        stored_(static_cast<std::size_t>(cfg.n_bits), false),
        rng_(jitter.seed),
        jitter_(0.0, jitter.sigma_ps > 0.0 ? jitter.sigma_ps * 1e3 : 1.0),
        jittered_(jitter.sigma_ps > 0.0) {}

  void set_loop(bool closed) { loop_closed_ = closed; }
  bool loop_closed() const { return loop_closed_; }

  void write(bool bit) {
    const femtoseconds base = schedule_tick(false);
    if (bit) {
      push(base + cfg_.clock_arrivals.front() + cfg_.cell.clk_to_q + cfg_.cell.data_delay, 1, 0,
           false);
    }
    drain();
  }

  void run(std::size_t ticks) {
    if (!origin_) origin_ = nominal(tick_);
    for (std::size_t i = 0; i < ticks; ++i) schedule_tick(true);
    run_end_ = nominal(tick_);
    drain();
  }

  EventSequence result(const Pattern& preload) const {
    EventSequence ev;
    ev.f_clk_ghz = cfg_.f_clk_ghz;
    ev.meta = "csr " + preload.str();
    if (!origin_) {
      ev.duration_ns = 0.0;
      return ev;
    }
    ev.duration_ns = to_ns(run_end_ - *origin_ + output_latency(cfg_));
    for (femtoseconds t : outputs_) {
      const double ns = to_ns(t - *origin_);
      if (ns >= 0.0 && ns <= ev.duration_ns) ev.times_ns.push_back(ns);
    }
    return ev;
  }

private:
  femtoseconds nominal(std::uint64_t tick) const {
    return static_cast<std::int64_t>(tick) * period_;
  }

  femtoseconds schedule_tick(bool record) {
    femtoseconds base = nominal(tick_++);
    if (jittered_) base += femtoseconds{std::llround(jitter_(rng_))};
    for (int i = 0; i < cfg_.n_bits; ++i) {
      push(base + cfg_.clock_arrivals[static_cast<std::size_t>(i)], 0, i, record);
    }
    return base;
  }

  void push(femtoseconds t, int kind, int cell, bool record) {
    queue_.push({t, kind, seq_++, cell, record});
  }

  void drain() {
    const int last = cfg_.n_bits - 1;
    const femtoseconds launch = cfg_.cell.clk_to_q;
    const femtoseconds hop = cfg_.cell.clk_to_q + cfg_.cell.data_delay;
    while (!queue_.empty()) {
      const SimEvent e = queue_.top();
      queue_.pop();
      auto cell = static_cast<std::size_t>(e.cell);
      if (e.kind == 1) {
        stored_[cell] = true;
        continue;
      }
      if (!stored_[cell]) continue;
      stored_[cell] = false;
      if (e.cell < last) {
        push(e.time + hop, 1, e.cell + 1, false);
        continue;
      }
      if (e.record) outputs_.push_back(e.time + launch);
      if (loop_closed_) push(e.time + hop, 1, 0, false);
    }
  }

  const TimingNetConfig& cfg_;
  femtoseconds period_;
  std::vector<bool> stored_;
  bool loop_closed_ = false;
  std::uint64_t tick_ = 0;
  std::uint64_t seq_ = 0;
  std::optional<femtoseconds> origin_;
  femtoseconds run_end_{0};
  std::vector<femtoseconds> outputs_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, std::greater<>> queue_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> jitter_;
  bool jittered_;
};

}  // namespace

EventSequence simulate_csr(const TimingNetConfig& cfg, const Pattern& preload,
                           std::span<const CsrOp> ops, const JitterModel& jitter) {
  if (cfg.n_bits < 1 || cfg.clock_arrivals.size() != static_cast<std::size_t>(cfg.n_bits)) {
    throw std::invalid_argument("clock arrivals must list one time per cell");
  }
  if (preload.size() != cfg.n_bits) {
    throw std::invalid_argument("preload length must equal the register size");
  }
  if (!(jitter.sigma_ps >= 0.0)) throw std::invalid_argument("jitter sigma must be non-negative");

  RingSimulator sim(cfg, jitter);
  for (int k = 0; k < preload.size(); ++k) sim.write(preload[static_cast<std::size_t>(k)]);

  bool checked = false;
  for (const auto& op : ops) {
    switch (op.kind) {
      case CsrOp::Kind::write:
        if (sim.loop_closed()) throw std::invalid_argument("write in read mode");
        sim.write(op.bit);
        break;
      case CsrOp::Kind::set_loop:
        sim.set_loop(op.loop_closed);
        break;
      case CsrOp::Kind::run: {
        if (!(op.duration_ns > 0.0)) throw std::invalid_argument("run duration must be positive");
        if (!checked) {
          TimingReport report = check_timing(cfg);
          if (!report.ok) throw TimingViolation(std::move(report));
          checked = true;
        }
        const double ticks = std::ceil(op.duration_ns * cfg.f_clk_ghz - 1e-9);
        sim.run(static_cast<std::size_t>(std::max(0.0, ticks)));
        break;
      }
    }
  }
  return sim.result(preload);
}

}  // namespace csrtone
