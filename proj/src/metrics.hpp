#ifndef AMRBENCH_METRICS_HPP_
#define AMRBENCH_METRICS_HPP_
//! \file metrics.hpp
//! \brief Run instrumentation: the fixed phase taxonomy, wall-clock timers,
//!  communication/computation counters, zone-cycles, and the FOM.

#include <array>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "logical_location.hpp"

namespace amrbench {

//! Phase names mirror the timestep-loop functions they instrument; the set is
//! fixed so breakdown CSVs keep a stable schema.
enum class Phase : int {
  CalculateFluxes = 0,
  FluxCorrection,
  FluxDivergence,
  WeightedSumData,
  SendBoundBufs,
  ReceiveBoundBufs,
  SetBounds,
  RedistributeAndRefineMeshBlocks,
  UpdateMeshBlockTree,
  RefinementTag,
  EstimateTimestep,
  FillDerived,
  ProlongRestrLoop,
};

inline constexpr int kNumPhases = 13;

const char *phase_name(Phase phase);
//! Phases dispatched over blocks on the worker pool, as opposed to the
//! serial tree/partition work on the driver thread.
bool phase_is_block_parallel(Phase phase);

struct CommCounters {
  std::uint64_t cells_sent_local = 0;
  std::uint64_t cells_sent_remote = 0;
  std::uint64_t cell_updates = 0;

  std::uint64_t cells_sent_total() const { return cells_sent_local + cells_sent_remote; }
  double comm_to_comp_ratio() const {
    return cell_updates == 0 ? 0.0
                             : static_cast<double>(cells_sent_total()) /
                                   static_cast<double>(cell_updates);
  }

  struct Snapshot {
    std::uint64_t cells_sent_local = 0;
    std::uint64_t cells_sent_remote = 0;
    std::uint64_t cell_updates = 0;
  };
  std::vector<Snapshot> per_cycle; // cumulative totals at the end of each cycle
};

//! One derefinement applied by the tree update: the parent leaf created at
//! `cycle` and the most recent creation-by-derefinement among its children.
struct CoarsenEvent {
  std::int64_t cycle = 0;
  LogicalLocation parent;
  std::int64_t newest_child_derefine_cycle = 0;
};

struct RunMetrics {
  std::array<double, kNumPhases> phase_seconds{};
  std::uint64_t zone_cycles = 0;
  double wall_seconds = 0.0;
  std::uint64_t cycles = 0;
  CommCounters counters;
  std::vector<std::uint64_t> blocks_processed_per_cycle;

  // Regrid trace.
  std::uint64_t refined_blocks = 0;
  std::uint64_t coarsened_blocks = 0;
  std::vector<CoarsenEvent> coarsen_events;

  std::uint64_t final_state_checksum = 0;

  double &seconds(Phase phase) { return phase_seconds[static_cast<int>(phase)]; }
  double seconds(Phase phase) const { return phase_seconds[static_cast<int>(phase)]; }
  double parallel_seconds() const;
  double serial_seconds() const { return wall_seconds - parallel_seconds(); }
};

//! zone-cycles / wall seconds; zero when no cycles ran.
double fom(const RunMetrics &metrics);

//! RAII accumulator adding elapsed wall time to one phase bucket.
class PhaseTimer {
 public:
  PhaseTimer(RunMetrics &metrics, Phase phase)
      : metrics_(metrics), phase_(phase), start_(std::chrono::steady_clock::now()) {}
  ~PhaseTimer() {
    const auto end = std::chrono::steady_clock::now();
    metrics_.seconds(phase_) += std::chrono::duration<double>(end - start_).count();
  }
  PhaseTimer(const PhaseTimer &) = delete;
  PhaseTimer &operator=(const PhaseTimer &) = delete;

 private:
  RunMetrics &metrics_;
  Phase phase_;
  std::chrono::steady_clock::time_point start_;
};

//! FNV-1a over raw 64-bit patterns; used for reproducibility checksums.
class Checksum {
 public:
  void add_u64(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      hash_ ^= (v >> (8 * b)) & 0xffu;
      hash_ *= 1099511628211ull;
    }
  }
  void add_i64(std::int64_t v) { add_u64(static_cast<std::uint64_t>(v)); }
  void add_double(double v);
  std::uint64_t digest() const { return hash_; }

 private:
  std::uint64_t hash_ = 14695981039346656037ull;
};

} // namespace amrbench

#endif // AMRBENCH_METRICS_HPP_
