/* amrbench.h - C API for the block-structured AMR Burgers benchmark core.
 *
 * All functions return AMRB_OK (0) on success or a nonzero error code;
 * amrb_last_error() describes the most recent failure on the calling thread.
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function.
 */
#ifndef AMRBENCH_H_
#define AMRBENCH_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  AMRB_OK = 0,
  AMRB_ERR_INVALID_ARG = 1,
  AMRB_ERR_PARSE = 2,
  AMRB_ERR_VALIDATION = 3,
  AMRB_ERR_NUMERICAL = 4,
  AMRB_ERR_IO = 5,
  AMRB_ERR_INTERNAL = 6
};

typedef struct amrb_deck amrb_deck;
typedef struct amrb_run amrb_run;
typedef struct amrb_sweep amrb_sweep;

/* Message for the last failure on this thread; empty string if none. */
const char *amrb_last_error(void);

/* ---- input decks ---- */
int amrb_deck_parse_text(const char *text, amrb_deck **out_deck);
int amrb_deck_parse_file(const char *path, amrb_deck **out_deck);
/* Override one key, e.g. ("run", "workers", "4"); revalidates the deck. */
int amrb_deck_set(amrb_deck *deck, const char *section, const char *key, const char *value);
/* Normalized value of one key into buf (NUL-terminated, truncated to cap). */
int amrb_deck_get(const amrb_deck *deck, const char *section, const char *key, char *buf,
                  size_t cap);
/* Canonical deck text; *out_len receives the full length. */
int amrb_deck_render(const amrb_deck *deck, char *buf, size_t cap, size_t *out_len);
void amrb_deck_free(amrb_deck *deck);

/* ---- single runs ---- */
int amrb_run_execute(const amrb_deck *deck, amrb_run **out_run);
double amrb_run_fom(const amrb_run *run);
uint64_t amrb_run_zone_cycles(const amrb_run *run);
uint64_t amrb_run_cycles(const amrb_run *run);
double amrb_run_wall_seconds(const amrb_run *run);
uint64_t amrb_run_cells_sent_local(const amrb_run *run);
uint64_t amrb_run_cells_sent_remote(const amrb_run *run);
uint64_t amrb_run_cell_updates(const amrb_run *run);
double amrb_run_comm_to_comp_ratio(const amrb_run *run);
uint64_t amrb_run_state_checksum(const amrb_run *run);
size_t amrb_run_phase_count(const amrb_run *run);
const char *amrb_run_phase_name(const amrb_run *run, size_t index);
double amrb_run_phase_seconds(const amrb_run *run, size_t index);
/* Wall seconds spent in block-parallel phases (the rest is serial/untimed). */
double amrb_run_parallel_seconds(const amrb_run *run);
/* Write fom.csv and phases.csv for this run under dir. */
int amrb_run_write_csv(const amrb_run *run, const char *dir);
void amrb_run_free(amrb_run *run);

/* ---- auxiliary-memory model ---- */
typedef struct amrb_mem_params {
  uint64_t n_meshblocks;
  uint64_t n_threadblocks;
  uint64_t bytes_per_value; /* B */
  uint64_t nx1;
  uint64_t ng;
  uint64_t dimension;
  uint64_t reduced_dim; /* d, used by the optimized form */
  uint64_t num_scalar;
} amrb_mem_params;

int amrb_memory_model(const amrb_mem_params *params, int optimized, uint64_t *out_bytes);

/* ---- parameter sweeps ---- */
/* axis: mesh_size | block_size | amr_levels | num_partitions | workers.
 * csv_dir may be NULL to skip CSV emission. Per-configuration failures are
 * recorded in the rows; the call itself fails only on setup/IO problems. */
int amrb_sweep_execute(const amrb_deck *deck, const char *axis, const int64_t *values,
                       size_t num_values, const char *csv_dir, amrb_sweep **out_sweep);
size_t amrb_sweep_row_count(const amrb_sweep *sweep);
int amrb_sweep_row_ok(const amrb_sweep *sweep, size_t row);
int64_t amrb_sweep_row_value(const amrb_sweep *sweep, size_t row);
const char *amrb_sweep_row_error(const amrb_sweep *sweep, size_t row);
double amrb_sweep_row_fom(const amrb_sweep *sweep, size_t row);
uint64_t amrb_sweep_row_zone_cycles(const amrb_sweep *sweep, size_t row);
uint64_t amrb_sweep_row_cells_sent(const amrb_sweep *sweep, size_t row);
uint64_t amrb_sweep_row_cell_updates(const amrb_sweep *sweep, size_t row);
double amrb_sweep_row_ratio(const amrb_sweep *sweep, size_t row);
int amrb_sweep_all_ok(const amrb_sweep *sweep);
/* Human-readable per-row summary with trend directions. */
int amrb_sweep_summary(const amrb_sweep *sweep, char *buf, size_t cap, size_t *out_len);
void amrb_sweep_free(amrb_sweep *sweep);

#ifdef __cplusplus
}
#endif

#endif /* AMRBENCH_H_ */
