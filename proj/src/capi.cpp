//! \file capi.cpp
//! \brief extern "C" shared-library surface over the C++ core.

#include "amrbench.h"

#include <cstring>
#include <string>

#include "deck.hpp"
#include "driver.hpp"
#include "error.hpp"
#include "memory_model.hpp"
#include "metrics.hpp"
#include "sweep.hpp"

using namespace amrbench;

struct amrb_deck {
  InputDeck deck;
};

struct amrb_run {
  RunMetrics metrics;
};

struct amrb_sweep {
  SweepResult result;
};

namespace {

thread_local std::string g_last_error;

int code_of(const Error &e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
      return AMRB_ERR_PARSE;
    case ErrorCode::ValidationError:
    case ErrorCode::UnknownProfile:
    case ErrorCode::NonMultipleMesh:
    case ErrorCode::BadDimension:
      return AMRB_ERR_VALIDATION;
    case ErrorCode::NumericalFailure:
      return AMRB_ERR_NUMERICAL;
    case ErrorCode::IoError:
      return AMRB_ERR_IO;
    case ErrorCode::InvalidArgument:
      return AMRB_ERR_INVALID_ARG;
    default:
      return AMRB_ERR_INTERNAL;
  }
}

template <typename Fn>
int guarded(Fn &&fn) {
  try {
    fn();
    g_last_error.clear();
    return AMRB_OK;
  } catch (const Error &e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return AMRB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return AMRB_ERR_INTERNAL;
  }
}

int require(bool ok, const char *what) {
  if (ok) return AMRB_OK;
  g_last_error = what;
  return AMRB_ERR_INVALID_ARG;
}

int copy_out(const std::string &text, char *buf, size_t cap, size_t *out_len) {
  if (out_len != nullptr) *out_len = text.size();
  if (buf != nullptr && cap > 0) {
    const size_t n = text.size() < cap - 1 ? text.size() : cap - 1;
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
  return AMRB_OK;
}

} // namespace

extern "C" {

const char *amrb_last_error(void) { return g_last_error.c_str(); }

int amrb_deck_parse_text(const char *text, amrb_deck **out_deck) {
  if (int rc = require(text != nullptr && out_deck != nullptr, "null argument")) return rc;
  return guarded([&] { *out_deck = new amrb_deck{InputDeck::parse(text)}; });
}

int amrb_deck_parse_file(const char *path, amrb_deck **out_deck) {
  if (int rc = require(path != nullptr && out_deck != nullptr, "null argument")) return rc;
  return guarded([&] { *out_deck = new amrb_deck{InputDeck::parse_file(path)}; });
}

int amrb_deck_set(amrb_deck *deck, const char *section, const char *key, const char *value) {
  if (int rc = require(deck != nullptr && section != nullptr && key != nullptr &&
                           value != nullptr,
                       "null argument")) {
    return rc;
  }
  return guarded([&] { deck->deck.set(section, key, value); });
}

int amrb_deck_get(const amrb_deck *deck, const char *section, const char *key, char *buf,
                  size_t cap) {
  if (int rc = require(deck != nullptr && section != nullptr && key != nullptr &&
                           buf != nullptr && cap > 0,
                       "null argument")) {
    return rc;
  }
  return guarded([&] { copy_out(deck->deck.get(section, key), buf, cap, nullptr); });
}

int amrb_deck_render(const amrb_deck *deck, char *buf, size_t cap, size_t *out_len) {
  if (int rc = require(deck != nullptr, "null deck")) return rc;
  return guarded([&] { copy_out(deck->deck.render(), buf, cap, out_len); });
}

void amrb_deck_free(amrb_deck *deck) { delete deck; }

int amrb_run_execute(const amrb_deck *deck, amrb_run **out_run) {
  if (int rc = require(deck != nullptr && out_run != nullptr, "null argument")) return rc;
  return guarded([&] {
    Driver driver(deck->deck.config, deck->deck.controls);
    *out_run = new amrb_run{driver.run()};
  });
}

double amrb_run_fom(const amrb_run *run) { return run == nullptr ? 0.0 : fom(run->metrics); }
uint64_t amrb_run_zone_cycles(const amrb_run *run) {
  return run == nullptr ? 0 : run->metrics.zone_cycles;
}
uint64_t amrb_run_cycles(const amrb_run *run) { return run == nullptr ? 0 : run->metrics.cycles; }
double amrb_run_wall_seconds(const amrb_run *run) {
  return run == nullptr ? 0.0 : run->metrics.wall_seconds;
}
uint64_t amrb_run_cells_sent_local(const amrb_run *run) {
  return run == nullptr ? 0 : run->metrics.counters.cells_sent_local;
}
uint64_t amrb_run_cells_sent_remote(const amrb_run *run) {
  return run == nullptr ? 0 : run->metrics.counters.cells_sent_remote;
}
uint64_t amrb_run_cell_updates(const amrb_run *run) {
  return run == nullptr ? 0 : run->metrics.counters.cell_updates;
}
double amrb_run_comm_to_comp_ratio(const amrb_run *run) {
  return run == nullptr ? 0.0 : run->metrics.counters.comm_to_comp_ratio();
}
uint64_t amrb_run_state_checksum(const amrb_run *run) {
  return run == nullptr ? 0 : run->metrics.final_state_checksum;
}
size_t amrb_run_phase_count(const amrb_run *run) {
  return run == nullptr ? 0 : static_cast<size_t>(kNumPhases);
}
const char *amrb_run_phase_name(const amrb_run *run, size_t index) {
  if (run == nullptr || index >= static_cast<size_t>(kNumPhases)) return "";
  return phase_name(static_cast<Phase>(index));
}
double amrb_run_phase_seconds(const amrb_run *run, size_t index) {
  if (run == nullptr || index >= static_cast<size_t>(kNumPhases)) return 0.0;
  return run->metrics.phase_seconds[index];
}
double amrb_run_parallel_seconds(const amrb_run *run) {
  return run == nullptr ? 0.0 : run->metrics.parallel_seconds();
}

int amrb_run_write_csv(const amrb_run *run, const char *dir) {
  if (int rc = require(run != nullptr && dir != nullptr, "null argument")) return rc;
  return guarded([&] { write_run_csv(run->metrics, dir); });
}

void amrb_run_free(amrb_run *run) { delete run; }

int amrb_memory_model(const amrb_mem_params *params, int optimized, uint64_t *out_bytes) {
  if (int rc = require(params != nullptr && out_bytes != nullptr, "null argument")) return rc;
  return guarded([&] {
    MemoryModelParams p;
    p.n_meshblocks = params->n_meshblocks;
    p.n_threadblocks = params->n_threadblocks;
    p.bytes_per_value = params->bytes_per_value;
    p.nx1 = params->nx1;
    p.ng = params->ng;
    p.dimension = params->dimension;
    p.reduced_dim = params->reduced_dim;
    p.num_scalar = params->num_scalar;
    *out_bytes = memory_model(p, optimized != 0);
  });
}

int amrb_sweep_execute(const amrb_deck *deck, const char *axis, const int64_t *values,
                       size_t num_values, const char *csv_dir, amrb_sweep **out_sweep) {
  if (int rc = require(deck != nullptr && axis != nullptr && out_sweep != nullptr &&
                           (values != nullptr || num_values == 0),
                       "null argument")) {
    return rc;
  }
  return guarded([&] {
    // Fail fast on a bad axis name before running anything.
    if (num_values > 0) apply_axis(deck->deck, axis, values[0]);
    auto result = run_sweep(deck->deck, axis,
                            std::vector<std::int64_t>(values, values + num_values));
    if (csv_dir != nullptr) write_sweep_csv(result, csv_dir);
    *out_sweep = new amrb_sweep{std::move(result)};
  });
}

size_t amrb_sweep_row_count(const amrb_sweep *sweep) {
  return sweep == nullptr ? 0 : sweep->result.rows.size();
}
int amrb_sweep_row_ok(const amrb_sweep *sweep, size_t row) {
  if (sweep == nullptr || row >= sweep->result.rows.size()) return 0;
  return sweep->result.rows[row].ok ? 1 : 0;
}
int64_t amrb_sweep_row_value(const amrb_sweep *sweep, size_t row) {
  if (sweep == nullptr || row >= sweep->result.rows.size()) return 0;
  return sweep->result.rows[row].axis_value;
}
const char *amrb_sweep_row_error(const amrb_sweep *sweep, size_t row) {
  if (sweep == nullptr || row >= sweep->result.rows.size()) return "";
  return sweep->result.rows[row].error.c_str();
}
double amrb_sweep_row_fom(const amrb_sweep *sweep, size_t row) {
  if (sweep == nullptr || row >= sweep->result.rows.size()) return 0.0;
  return fom(sweep->result.rows[row].metrics);
}
uint64_t amrb_sweep_row_zone_cycles(const amrb_sweep *sweep, size_t row) {
  if (sweep == nullptr || row >= sweep->result.rows.size()) return 0;
  return sweep->result.rows[row].metrics.zone_cycles;
}
uint64_t amrb_sweep_row_cells_sent(const amrb_sweep *sweep, size_t row) {
  if (sweep == nullptr || row >= sweep->result.rows.size()) return 0;
  return sweep->result.rows[row].metrics.counters.cells_sent_total();
}
uint64_t amrb_sweep_row_cell_updates(const amrb_sweep *sweep, size_t row) {
  if (sweep == nullptr || row >= sweep->result.rows.size()) return 0;
  return sweep->result.rows[row].metrics.counters.cell_updates;
}
double amrb_sweep_row_ratio(const amrb_sweep *sweep, size_t row) {
  if (sweep == nullptr || row >= sweep->result.rows.size()) return 0.0;
  return sweep->result.rows[row].metrics.counters.comm_to_comp_ratio();
}
int amrb_sweep_all_ok(const amrb_sweep *sweep) {
  return (sweep != nullptr && sweep->result.all_ok) ? 1 : 0;
}
int amrb_sweep_summary(const amrb_sweep *sweep, char *buf, size_t cap, size_t *out_len) {
  if (int rc = require(sweep != nullptr, "null sweep")) return rc;
  return guarded([&] { copy_out(sweep_summary(sweep->result), buf, cap, out_len); });
}

void amrb_sweep_free(amrb_sweep *sweep) { delete sweep; }

} // extern "C"
