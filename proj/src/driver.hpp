#ifndef AMRBENCH_DRIVER_HPP_
#define AMRBENCH_DRIVER_HPP_
//! \file driver.hpp
//! \brief Timestep-loop orchestration: Step, LoadBalancingAndAMR, and
//!  EstimateTimeStep, with per-phase timers, traffic counters, zone-cycle
//!  accounting, and deterministic results for any worker/partition count.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "exchange.hpp"
#include "mesh_block.hpp"
#include "mesh_tree.hpp"
#include "metrics.hpp"
#include "problem_config.hpp"
#include "worker_pool.hpp"

namespace amrbench {

class Driver;

struct RunControls {
  std::int64_t nlim = 100;
  double tlim = 1e30;
  int workers = 1;
  int num_partitions = 1;
  bool flux_correction_enabled = true;
  //! Rounds of refine-and-reinitialize before cycle 0; -1 means max_levels - 1.
  int init_refine_passes = -1;
#ifdef NDEBUG
  int check_finite_every = 10;
#else
  int check_finite_every = 1;
#endif
  //! Instrumentation hook invoked at the end of every cycle; must not mutate.
  std::function<void(const Driver &, std::int64_t)> cycle_callback;
};

class Driver {
 public:
  Driver(ProblemConfig config, RunControls controls);

  //! Two RK stages, each: ghost exchange, fluxes, flux correction, divergence,
  //! weighted sums, derived fill. Ghosts may be stale on entry.
  void step(double dt, RunMetrics &metrics);

  //! Tag, enforce 2:1, update the tree, fill new blocks by prolongation or
  //! restriction, then repartition and rebuild buffers. Runs every cycle.
  void load_balancing_and_amr(std::int64_t cycle, RunMetrics &metrics);

  double estimate_timestep_phase(RunMetrics &metrics);

  //! Full loop until nlim cycles or tlim time. Throws NumericalFailure when a
  //! state value becomes non-finite.
  RunMetrics run();

  const MeshTree &tree() const { return tree_; }
  const BlockList &blocks() const { return blocks_; }
  BlockList &blocks() { return blocks_; }
  const ProblemConfig &config() const { return config_; }
  const RunControls &controls() const { return controls_; }

  //! FNV digest of (loc, interior values) over all blocks in Morton order.
  std::uint64_t state_checksum() const;
  //! Compensated sum of q_index * cell volume over the mesh.
  double total_scalar(int scalar_index) const;
  double current_time() const { return time_; }

 private:
  void initial_conditions_and_refinement();
  void exchange_ghosts(RunMetrics &metrics);
  void ensure_schedule();
  void repartition(RunMetrics &metrics, bool lineage_changed);
  void check_finite(std::int64_t cycle) const;
  std::uint64_t interior_cells_per_block() const;

  ProblemConfig config_;
  RunControls controls_;
  MeshTree tree_;
  BlockList blocks_;
  WorkerPool pool_;
  BufferSchedule schedule_;
  std::vector<BoundaryBuffer> buffers_;
  bool schedule_valid_ = false;
  double time_ = 0.0;
};

} // namespace amrbench

#endif // AMRBENCH_DRIVER_HPP_
