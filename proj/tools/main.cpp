// amrbench command-line driver: single runs, parameter sweeps, and the
// auxiliary-memory calculator, all through the shared-library C API.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "amrbench.h"

namespace {

struct DeckHandle {
  amrb_deck *deck = nullptr;
  ~DeckHandle() { amrb_deck_free(deck); }
};

[[noreturn]] void die(const char *context, int code) {
  std::fprintf(stderr, "error (%s): %s\n", context, amrb_last_error());
  std::exit(code == AMRB_OK ? 1 : 2);
}

std::string deck_value(const amrb_deck *deck, const char *section, const char *key) {
  char buf[256] = {0};
  if (amrb_deck_get(deck, section, key, buf, sizeof(buf)) != AMRB_OK) return "";
  return buf;
}

void print_run_summary(const amrb_run *run, int verbosity) {
  const double wall = amrb_run_wall_seconds(run);
  const double parallel = amrb_run_parallel_seconds(run);
  std::printf("FOM: %.6g zone-cycles/s\n", amrb_run_fom(run));
  if (verbosity == 0) return;
  std::printf("cycles: %" PRIu64 "   zone-cycles: %" PRIu64 "   wall: %.3f s\n",
              amrb_run_cycles(run), amrb_run_zone_cycles(run), wall);
  std::printf("block-parallel: %.3f s   serial+untimed: %.3f s\n", parallel, wall - parallel);
  std::printf("cells sent: %" PRIu64 " local + %" PRIu64 " remote   cell updates: %" PRIu64
              "   comm/comp: %.4g\n",
              amrb_run_cells_sent_local(run), amrb_run_cells_sent_remote(run),
              amrb_run_cell_updates(run), amrb_run_comm_to_comp_ratio(run));
  std::printf("state checksum: %016" PRIx64 "\n", amrb_run_state_checksum(run));
  if (verbosity < 2) return;
  std::printf("phase breakdown:\n");
  for (size_t p = 0; p < amrb_run_phase_count(run); ++p) {
    std::printf("  %-32s %10.4f s\n", amrb_run_phase_name(run, p),
                amrb_run_phase_seconds(run, p));
  }
}

int cmd_run(const std::string &deck_path, int workers, const std::string &csv_dir_flag) {
  DeckHandle handle;
  if (int rc = amrb_deck_parse_file(deck_path.c_str(), &handle.deck)) die("parsing deck", rc);
  if (workers > 0) {
    if (int rc = amrb_deck_set(handle.deck, "run", "workers", std::to_string(workers).c_str())) {
      die("applying --workers", rc);
    }
  }

  amrb_run *run = nullptr;
  if (int rc = amrb_run_execute(handle.deck, &run)) die("running", rc);

  const std::string verbosity = deck_value(handle.deck, "output", "summary");
  print_run_summary(run, verbosity.empty() ? 1 : std::atoi(verbosity.c_str()));

  std::string csv_dir = csv_dir_flag.empty() ? deck_value(handle.deck, "output", "csv_dir")
                                             : csv_dir_flag;
  if (!csv_dir.empty()) {
    if (int rc = amrb_run_write_csv(run, csv_dir.c_str())) {
      amrb_run_free(run);
      die("writing CSV", rc);
    }
    std::printf("wrote %s/fom.csv and %s/phases.csv\n", csv_dir.c_str(), csv_dir.c_str());
  }
  amrb_run_free(run);
  return 0;
}

int cmd_sweep(const std::string &deck_path, const std::string &axis,
              const std::vector<int64_t> &values, const std::string &csv_dir_flag) {
  DeckHandle handle;
  if (int rc = amrb_deck_parse_file(deck_path.c_str(), &handle.deck)) die("parsing deck", rc);

  std::string csv_dir = csv_dir_flag.empty() ? deck_value(handle.deck, "output", "csv_dir")
                                             : csv_dir_flag;
  if (csv_dir.empty()) csv_dir = ".";

  amrb_sweep *sweep = nullptr;
  if (int rc = amrb_sweep_execute(handle.deck, axis.c_str(), values.data(), values.size(),
                                  csv_dir.c_str(), &sweep)) {
    die("sweeping", rc);
  }
  size_t len = 0;
  amrb_sweep_summary(sweep, nullptr, 0, &len);
  std::string text(len + 1, '\0');
  amrb_sweep_summary(sweep, text.data(), text.size(), &len);
  std::fputs(text.c_str(), stdout);
  std::printf("wrote %s/fom.csv and %s/phases.csv\n", csv_dir.c_str(), csv_dir.c_str());

  const bool ok = amrb_sweep_all_ok(sweep) != 0;
  amrb_sweep_free(sweep);
  return ok ? 0 : 1;
}

int cmd_mem_model(const std::string &params_list) {
  // Comma-separated key=value pairs; keys mirror the model's symbols.
  amrb_mem_params params = {};
  params.bytes_per_value = 8;
  params.nx1 = 8;
  params.ng = 4;
  params.dimension = 3;
  params.reduced_dim = 2;

  std::map<std::string, uint64_t *> fields = {
      {"n_meshblocks", &params.n_meshblocks}, {"n_threadblocks", &params.n_threadblocks},
      {"B", &params.bytes_per_value},         {"bytes_per_value", &params.bytes_per_value},
      {"nx1", &params.nx1},                   {"ng", &params.ng},
      {"dimension", &params.dimension},       {"d", &params.reduced_dim},
      {"reduced_dim", &params.reduced_dim},   {"num_scalar", &params.num_scalar},
  };

  std::string list = params_list;
  while (!list.empty()) {
    const size_t comma = list.find(',');
    const std::string item = list.substr(0, comma);
    list = comma == std::string::npos ? "" : list.substr(comma + 1);
    const size_t eq = item.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: expected key=value in --params, got '%s'\n", item.c_str());
      return 2;
    }
    const std::string key = item.substr(0, eq);
    auto it = fields.find(key);
    if (it == fields.end()) {
      std::fprintf(stderr, "error: unknown mem-model parameter '%s'\n", key.c_str());
      return 2;
    }
    *it->second = std::strtoull(item.c_str() + eq + 1, nullptr, 10);
  }

  uint64_t pre = 0, post = 0;
  if (int rc = amrb_memory_model(&params, 0, &pre)) die("memory model", rc);
  std::printf("auxiliary memory, pre-optimization:  %" PRIu64 " bytes (%.3f GB)\n", pre,
              pre / 1e9);
  if (params.n_threadblocks > 0) {
    if (int rc = amrb_memory_model(&params, 1, &post)) die("memory model", rc);
    std::printf("auxiliary memory, post-optimization: %" PRIu64 " bytes (%.3f GB)\n", post,
                post / 1e9);
    std::printf("reduction: %.2fx\n", post > 0 ? static_cast<double>(pre) / post : 0.0);
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"block-structured AMR Burgers benchmark"};
  app.require_subcommand(1);

  std::string deck_path, csv_dir, axis, params_list;
  std::vector<int64_t> values;
  int workers = 0;

  auto *run = app.add_subcommand("run", "execute one input deck and report metrics");
  run->add_option("--deck", deck_path, "input deck file")->required();
  run->add_option("--workers", workers, "override [run] workers");
  run->add_option("--csv-dir", csv_dir, "write fom.csv/phases.csv under this directory");

  auto *sweep = app.add_subcommand("sweep", "run one configuration per axis value");
  sweep->add_option("--deck", deck_path, "base input deck file")->required();
  sweep->add_option("--axis", axis,
                    "mesh_size | block_size | amr_levels | num_partitions | workers")
      ->required();
  sweep->add_option("--values", values, "comma-separated axis values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--csv-dir", csv_dir, "CSV output directory (default: deck or '.')");

  auto *mem = app.add_subcommand("mem-model", "auxiliary-memory calculator");
  mem->add_option("--params", params_list,
                  "key=value list: n_meshblocks, n_threadblocks, B, nx1, ng, dimension, d, "
                  "num_scalar")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(deck_path, workers, csv_dir);
  if (sweep->parsed()) return cmd_sweep(deck_path, axis, values, csv_dir);
  return cmd_mem_model(params_list);
}
