#ifndef AMRBENCH_SWEEP_HPP_
#define AMRBENCH_SWEEP_HPP_
//! \file sweep.hpp
//! \brief Parameter sweeps over one axis and CSV emission.
//!
//! fom.csv columns: config_id, axis_value, zone_cycles, wall_seconds, fom,
//!   cells_sent_local, cells_sent_remote, cell_updates, comm_to_comp_ratio,
//!   errors. phases.csv columns: config_id, phase, seconds. UTF-8, comma
//!   separated, '.' decimal point, header always present, rows sorted by
//!   config_id. Configurations that fail validation or execution land in the
//!   errors column and the sweep continues.

#include <cstdint>
#include <string>
#include <vector>

#include "deck.hpp"
#include "metrics.hpp"

namespace amrbench {

inline constexpr const char *kSweepAxes[] = {"mesh_size", "block_size", "amr_levels",
                                             "num_partitions", "workers"};

struct SweepRow {
  int config_id = 0;
  std::int64_t axis_value = 0;
  bool ok = false;
  std::string error;
  RunMetrics metrics;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;
  bool all_ok = true;
};

//! Clone the base deck with `axis` set to `value`. Throws ValidationError for
//! an unknown axis; value validation surfaces per-row instead.
InputDeck apply_axis(const InputDeck &base, const std::string &axis, std::int64_t value);

//! Run one configuration per value, sequentially (wall-time fairness).
SweepResult run_sweep(const InputDeck &base, const std::string &axis,
                      const std::vector<std::int64_t> &values);

//! Write fom.csv and phases.csv under `dir`. Throws IoError.
void write_sweep_csv(const SweepResult &result, const std::string &dir);
//! Single-run variant: one row, empty axis_value column.
void write_run_csv(const RunMetrics &metrics, const std::string &dir);

//! Human-readable per-row lines plus trend directions over the axis.
std::string sweep_summary(const SweepResult &result);

} // namespace amrbench

#endif // AMRBENCH_SWEEP_HPP_
