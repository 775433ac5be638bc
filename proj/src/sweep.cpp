//! \file sweep.cpp

#include "sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "driver.hpp"
#include "error.hpp"

namespace amrbench {

namespace {

std::string f64_csv(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_csv(const std::string &dir, const char *name) {
  if (!dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
  }
  const std::string path = dir.empty() ? name : dir + "/" + name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  return out;
}

void fom_row(std::ofstream &out, int config_id, const std::string &axis_value,
             const SweepRow *row) {
  out << config_id << "," << axis_value << ",";
  if (row != nullptr && !row->ok) {
    std::string msg = row->error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out << ",,,,,,," << msg << "\n";
    return;
  }
  const RunMetrics &m = row->metrics;
  out << m.zone_cycles << "," << f64_csv(m.wall_seconds) << "," << f64_csv(fom(m)) << ","
      << m.counters.cells_sent_local << "," << m.counters.cells_sent_remote << ","
      << m.counters.cell_updates << "," << f64_csv(m.counters.comm_to_comp_ratio()) << ",\n";
}

void phases_rows(std::ofstream &out, int config_id, const RunMetrics &metrics) {
  for (int p = 0; p < kNumPhases; ++p) {
    out << config_id << "," << phase_name(static_cast<Phase>(p)) << ","
        << f64_csv(metrics.phase_seconds[p]) << "\n";
  }
}

constexpr const char *kFomHeader =
    "config_id,axis_value,zone_cycles,wall_seconds,fom,cells_sent_local,cells_sent_remote,"
    "cell_updates,comm_to_comp_ratio,errors\n";
constexpr const char *kPhasesHeader = "config_id,phase,seconds\n";

//! Direction of a metric across ok rows: "increasing", "decreasing",
//! "non-decreasing", "non-increasing", "flat", or "mixed".
template <typename Get>
std::string trend_direction(const SweepResult &result, Get get) {
  bool any_up = false, any_down = false, any_flat = false;
  const SweepRow *prev = nullptr;
  for (const auto &row : result.rows) {
    if (!row.ok) continue;
    if (prev != nullptr) {
      const double a = get(*prev), b = get(row);
      if (b > a) any_up = true;
      else if (b < a) any_down = true;
      else any_flat = true;
    }
    prev = &row;
  }
  if (!any_up && !any_down) return "flat";
  if (any_up && any_down) return "mixed";
  if (any_up) return any_flat ? "non-decreasing" : "increasing";
  return any_flat ? "non-increasing" : "decreasing";
}

} // namespace

InputDeck apply_axis(const InputDeck &base, const std::string &axis, std::int64_t value) {
  InputDeck deck = base;
  const std::string v = std::to_string(value);
  if (axis == "mesh_size") {
    deck.set("mesh", "nx", v);
  } else if (axis == "block_size") {
    deck.set("block", "nx1", v);
  } else if (axis == "amr_levels") {
    deck.set("amr", "max_levels", v);
  } else if (axis == "num_partitions") {
    deck.set("run", "num_partitions", v);
  } else if (axis == "workers") {
    deck.set("run", "workers", v);
  } else {
    fail(ErrorCode::ValidationError,
         "unknown sweep axis '" + axis +
             "' (expected mesh_size, block_size, amr_levels, num_partitions, or workers)");
  }
  return deck;
}

SweepResult run_sweep(const InputDeck &base, const std::string &axis,
                      const std::vector<std::int64_t> &values) {
  SweepResult result;
  result.axis = axis;
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepRow row;
    row.config_id = static_cast<int>(i);
    row.axis_value = values[i];
    try {
      InputDeck deck = apply_axis(base, axis, values[i]);
      Driver driver(deck.config, deck.controls);
      row.metrics = driver.run();
      row.ok = true;
    } catch (const Error &e) {
      row.ok = false;
      row.error = e.what();
      result.all_ok = false;
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_sweep_csv(const SweepResult &result, const std::string &dir) {
  auto fom_csv = open_csv(dir, "fom.csv");
  fom_csv << kFomHeader;
  for (const auto &row : result.rows) {
    fom_row(fom_csv, row.config_id, std::to_string(row.axis_value), &row);
  }
  auto phases_csv = open_csv(dir, "phases.csv");
  phases_csv << kPhasesHeader;
  for (const auto &row : result.rows) {
    if (row.ok) phases_rows(phases_csv, row.config_id, row.metrics);
  }
}

void write_run_csv(const RunMetrics &metrics, const std::string &dir) {
  SweepRow row;
  row.config_id = 0;
  row.ok = true;
  row.metrics = metrics;

  auto fom_csv = open_csv(dir, "fom.csv");
  fom_csv << kFomHeader;
  fom_row(fom_csv, 0, "", &row);
  auto phases_csv = open_csv(dir, "phases.csv");
  phases_csv << kPhasesHeader;
  phases_rows(phases_csv, 0, metrics);
}

std::string sweep_summary(const SweepResult &result) {
  std::ostringstream out;
  out << "sweep over " << result.axis << " (" << result.rows.size() << " configurations)\n";
  for (const auto &row : result.rows) {
    out << "  [" << row.config_id << "] " << result.axis << "=" << row.axis_value << ": ";
    if (!row.ok) {
      out << "ERROR: " << row.error << "\n";
      continue;
    }
    const RunMetrics &m = row.metrics;
    char line[256];
    std::snprintf(line, sizeof(line),
                  "fom=%.4g zone-cycles=%llu cells_sent=%llu cell_updates=%llu ratio=%.4g",
                  fom(m), static_cast<unsigned long long>(m.zone_cycles),
                  static_cast<unsigned long long>(m.counters.cells_sent_total()),
                  static_cast<unsigned long long>(m.counters.cell_updates),
                  m.counters.comm_to_comp_ratio());
    out << line << "\n";
  }

  std::size_t ok_rows = 0;
  for (const auto &row : result.rows) ok_rows += row.ok ? 1 : 0;
  if (ok_rows >= 2) {
    out << "trends along increasing " << result.axis << ":\n";
    out << "  fom: " << trend_direction(result, [](const SweepRow &r) { return fom(r.metrics); })
        << "\n";
    out << "  cells_sent_total: "
        << trend_direction(result,
                           [](const SweepRow &r) {
                             return static_cast<double>(r.metrics.counters.cells_sent_total());
                           })
        << "\n";
    out << "  cell_updates: "
        << trend_direction(result,
                           [](const SweepRow &r) {
                             return static_cast<double>(r.metrics.counters.cell_updates);
                           })
        << "\n";
    out << "  comm_to_comp_ratio: "
        << trend_direction(
               result, [](const SweepRow &r) { return r.metrics.counters.comm_to_comp_ratio(); })
        << "\n";
  }
  return out.str();
}

} // namespace amrbench
