#ifndef CSRTONE_TIMING_HPP
#define CSRTONE_TIMING_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "csrtone/error.hpp"
#include "csrtone/pattern.hpp"
#include "csrtone/pulse.hpp"

namespace csrtone {

/// Timing quantities use integer femtoseconds so that loop sums of clock
/// skew are exact.
using femtoseconds = std::chrono::duration<std::int64_t, std::femto>;

femtoseconds from_ps(double ps);
double to_ps(femtoseconds t);
double to_ns(femtoseconds t);

/// Clock period 1 / f_clk rounded to the nearest femtosecond.
femtoseconds clock_period(double f_clk_ghz);

/// Delay-element view of a clocked storage cell.
struct CellTiming {
  femtoseconds setup = from_ps(2.0);
  femtoseconds hold = from_ps(2.0);
  femtoseconds clk_to_q = from_ps(5.0);
  /// Inter-cell data propagation.
  femtoseconds data_delay = from_ps(8.0);
};

enum class ClockStyle { symmetric, binary_tree };

struct TimingNetConfig {
  int n_bits = 0;
  ClockStyle style = ClockStyle::binary_tree;
  /// Arrival time of the common clock pulse at cell i.
  std::vector<femtoseconds> clock_arrivals;
  double f_clk_ghz = 10.0;
  CellTiming cell;
};

struct Violation {
  int cell = 0;
  femtoseconds slack{0};
};

struct TimingReport {
  /// t_i - t_{i+1}, cyclic.
  std::vector<femtoseconds> per_cell_skew;
  femtoseconds total_skew{0};
  /// Hold: t_cs + clk_to_q + data_delay - hold <= 0.
  std::vector<Violation> race_violations;
  /// Setup: T - setup - clk_to_q - data_delay - t_cs <= 0.
  std::vector<Violation> setup_violations;
  bool ok = false;
};

/// Clock arrivals for an N-cell ring.
///
/// binary_tree: every cell sees the clock after ceil(log2 N) stage delays.
/// symmetric: the first N/2 cells are clocked concurrently with the data flow
/// (arrivals rising by one stage delay per cell), the remaining N/2 in
/// counter flow (the mirrored sequence), so the loop returns to its start.
/// The stage delay defaults to the cell data delay. Symmetric clocking
/// requires even N.
TimingNetConfig build_network(int n, ClockStyle style, double f_clk_ghz,
                              const CellTiming& cell = {},
                              std::optional<femtoseconds> stage_delay = std::nullopt);

/// Splitters in the clock tree: N - 1 for a binary tree, N / 2 for symmetric.
int splitter_count(ClockStyle style, int n);

TimingReport check_timing(const TimingNetConfig& cfg);

class TimingViolation : public DomainError {
public:
  explicit TimingViolation(TimingReport report)
      : DomainError("race violation in clock network"), report_(std::move(report)) {}
  const TimingReport& report() const { return report_; }

private:
  TimingReport report_;
};

/// One step of the register's operating program.
struct CsrOp {
  enum class Kind { write, set_loop, run };
  Kind kind = Kind::run;
  bool bit = false;
  bool loop_closed = false;
  double duration_ns = 0.0;

  static CsrOp write(bool bit) { return {Kind::write, bit, false, 0.0}; }
  static CsrOp open_loop() { return {Kind::set_loop, false, false, 0.0}; }
  static CsrOp close_loop() { return {Kind::set_loop, false, true, 0.0}; }
  static CsrOp run(double duration_ns) { return {Kind::run, false, false, duration_ns}; }
};

/// Discrete-event simulation of the register and its clock network.
///
/// Cells behave as SFQ flip-flops: a data pulse sets the cell, the next clock
/// pulse reads it out (destructively) after clk_to_q, and the pulse reaches
/// the following cell data_delay later. The last cell drives the output and,
/// while the NDRO loop switch is closed, feeds cell 0.
///
/// The register starts empty in write mode (loop open) and `preload` is
/// shifted in serially, one clock tick per bit, so that its cell 0 is the
/// first bit to reach the output. `ops` then run in order. Each write or run
/// tick consumes one clock period; jitter shifts the whole clock pulse of a
/// tick. Output events are recorded during run ops only, timed from the first
/// run tick.
///
/// Throws std::invalid_argument for a write with the loop closed ("write in
/// read mode") and TimingViolation when a run starts on a network that fails
/// check_timing.
EventSequence simulate_csr(const TimingNetConfig& cfg, const Pattern& preload,
                           std::span<const CsrOp> ops, const JitterModel& jitter = {});

/// Output latency of the ring: clock arrival at the last cell plus clk_to_q.
femtoseconds output_latency(const TimingNetConfig& cfg);

}  // namespace csrtone

#endif
