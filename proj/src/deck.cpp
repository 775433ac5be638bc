//! \file deck.cpp

#include "deck.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace amrbench {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void parse_fail(int line, const std::string &reason) {
  fail(ErrorCode::ParseError, "deck line " + std::to_string(line) + ": " + reason);
}

[[noreturn]] void value_fail(const std::string &key, const std::string &reason, int line) {
  std::string at = line > 0 ? "deck line " + std::to_string(line) + ": " : "";
  fail(ErrorCode::ValidationError, at + key + ": " + reason);
}

std::int64_t to_i64(const std::string &key, const std::string &value, int line) {
  std::int64_t out = 0;
  const char *b = value.data(), *e = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || ptr != e) value_fail(key, "expected an integer, got '" + value + "'", line);
  return out;
}

double to_f64(const std::string &key, const std::string &value, int line) {
  double out = 0;
  const char *b = value.data(), *e = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || ptr != e) value_fail(key, "expected a number, got '" + value + "'", line);
  return out;
}

bool to_bool(const std::string &key, const std::string &value, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  value_fail(key, "expected true/false, got '" + value + "'", line);
}

std::vector<std::string> split_tuple(const std::string &value) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = value.find(',', start);
    parts.push_back(trim(value.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

//! Scalar values broadcast over the active dimensions; tuples must have one
//! entry per dimension.
template <typename T, typename Parse>
std::array<T, 3> to_per_dim(const std::string &key, const std::string &value, int dim, int line,
                            Parse parse, T inactive) {
  const auto parts = split_tuple(value);
  std::array<T, 3> out = {inactive, inactive, inactive};
  if (parts.size() == 1) {
    for (int d = 0; d < dim; ++d) out[d] = parse(key, parts[0], line);
  } else if (static_cast<int>(parts.size()) == dim) {
    for (int d = 0; d < dim; ++d) out[d] = parse(key, parts[d], line);
  } else {
    value_fail(key, "expected 1 or " + std::to_string(dim) + " comma-separated values", line);
  }
  return out;
}

std::string f64_str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct RawEntry {
  std::string section, key, value;
  int line;
};

} // namespace

void InputDeck::apply(const std::string &section, const std::string &key,
                      const std::string &value, int line) {
  const std::string qual = section + "." + key;
  auto unknown = [&] { value_fail(qual, "unknown key", line); };

  if (section == "mesh") {
    if (key == "dim") {
      config.dim = static_cast<int>(to_i64(qual, value, line));
      if (config.dim != 2 && config.dim != 3) value_fail(qual, "dim must be 2 or 3", line);
    } else if (key == "nx") {
      config.mesh_cells = to_per_dim<std::int64_t>(
          qual, value, config.dim, line,
          [](const std::string &k, const std::string &v, int ln) { return to_i64(k, v, ln); },
          std::int64_t{1});
    } else if (key == "extent") {
      config.extent = to_per_dim<double>(
          qual, value, config.dim, line,
          [](const std::string &k, const std::string &v, int ln) { return to_f64(k, v, ln); },
          1.0);
    } else if (key == "periodic") {
      config.periodic = to_per_dim<bool>(
          qual, value, config.dim, line,
          [](const std::string &k, const std::string &v, int ln) { return to_bool(k, v, ln); },
          true);
    } else {
      unknown();
    }
  } else if (section == "block") {
    if (key == "nx1") {
      config.nx1 = static_cast<int>(to_i64(qual, value, line));
    } else if (key == "ng") {
      config.ng = static_cast<int>(to_i64(qual, value, line));
    } else {
      unknown();
    }
  } else if (section == "amr") {
    if (key == "max_levels") {
      config.max_levels = static_cast<int>(to_i64(qual, value, line));
    } else if (key == "refine_tol") {
      config.refine_tol = to_f64(qual, value, line);
    } else if (key == "derefine_tol") {
      config.derefine_tol = to_f64(qual, value, line);
    } else if (key == "derefine_gap") {
      config.derefine_gap = to_i64(qual, value, line);
    } else if (key == "flux_correction") {
      controls.flux_correction_enabled = to_bool(qual, value, line);
    } else if (key == "init_refine_passes") {
      controls.init_refine_passes = static_cast<int>(to_i64(qual, value, line));
    } else if (key == "tag_velocity") {
      config.tag_on_velocity = to_bool(qual, value, line);
    } else if (key == "tag_scalar0") {
      config.tag_on_scalar0 = to_bool(qual, value, line);
    } else {
      unknown();
    }
  } else if (section == "burgers") {
    if (key == "num_scalar") {
      config.num_scalar = static_cast<int>(to_i64(qual, value, line));
    } else if (key == "profile") {
      config.profile.name = value;
    } else if (key == "amplitude") {
      config.profile.amplitude = to_f64(qual, value, line);
    } else if (key == "width") {
      config.profile.width = to_f64(qual, value, line);
    } else if (key == "center") {
      config.profile.center = to_per_dim<double>(
          qual, value, config.dim, line,
          [](const std::string &k, const std::string &v, int ln) { return to_f64(k, v, ln); },
          0.0);
      center_explicit_ = true;
    } else if (key == "background") {
      config.profile.background = to_f64(qual, value, line);
    } else if (key == "scalar_amplitude") {
      config.profile.scalar_amplitude = to_f64(qual, value, line);
    } else if (key == "scalar_background") {
      config.profile.scalar_background = to_f64(qual, value, line);
    } else if (key == "cfl") {
      config.cfl = to_f64(qual, value, line);
    } else if (key == "dt_max") {
      config.dt_max = to_f64(qual, value, line);
    } else {
      unknown();
    }
  } else if (section == "run") {
    if (key == "nlim") {
      controls.nlim = to_i64(qual, value, line);
    } else if (key == "tlim") {
      controls.tlim = to_f64(qual, value, line);
    } else if (key == "workers") {
      controls.workers = static_cast<int>(to_i64(qual, value, line));
    } else if (key == "num_partitions") {
      controls.num_partitions = static_cast<int>(to_i64(qual, value, line));
    } else if (key == "check_finite_every") {
      controls.check_finite_every = static_cast<int>(to_i64(qual, value, line));
    } else {
      unknown();
    }
  } else if (section == "output") {
    if (key == "csv_dir") {
      csv_dir = value;
    } else if (key == "summary") {
      summary = static_cast<int>(to_i64(qual, value, line));
    } else {
      unknown();
    }
  } else {
    value_fail(section, "unknown section", line);
  }
}

void InputDeck::finalize(const std::map<std::string, int> *key_lines) {
  auto line_of = [&](const std::string &qual) {
    if (key_lines == nullptr) return 0;
    auto it = key_lines->find(qual);
    return it == key_lines->end() ? 0 : it->second;
  };

  for (int d = config.dim; d < 3; ++d) {
    config.mesh_cells[d] = 1;
    config.extent[d] = 1.0;
    config.periodic[d] = true;
  }
  if (!center_explicit_) {
    for (int d = 0; d < config.dim; ++d) config.profile.center[d] = 0.5 * config.extent[d];
  }

  // Cross-field rules, anchored to the key that most directly caused them.
  if (config.nx1 < 2 * config.ng || config.nx1 % 2 != 0) {
    value_fail("block.nx1",
               "nx1 must be even and >= 2*ng (nx1=" + std::to_string(config.nx1) +
                   ", ng=" + std::to_string(config.ng) + ")",
               line_of("block.nx1"));
  }
  if (config.ng < 3 || config.ng % 2 != 0) {
    value_fail("block.ng", "ng must be even and >= 3 (WENO5 stencil width)", line_of("block.ng"));
  }
  for (int d = 0; d < config.dim; ++d) {
    if (config.mesh_cells[d] <= 0 || config.mesh_cells[d] % config.nx1 != 0) {
      value_fail("block.nx1",
                 "mesh size " + std::to_string(config.mesh_cells[d]) +
                     " is not an exact multiple of block size " + std::to_string(config.nx1),
                 line_of("block.nx1"));
    }
  }
  if (!(config.derefine_tol > 0.0) || !(config.derefine_tol < config.refine_tol)) {
    value_fail("amr.derefine_tol", "tolerances must satisfy 0 < derefine_tol < refine_tol",
               line_of("amr.derefine_tol"));
  }
  if (controls.workers < 1) value_fail("run.workers", "must be >= 1", line_of("run.workers"));
  if (controls.num_partitions < 1) {
    value_fail("run.num_partitions", "must be >= 1", line_of("run.num_partitions"));
  }
  if (controls.nlim < 0) value_fail("run.nlim", "must be >= 0", line_of("run.nlim"));
  if (summary < 0 || summary > 2) {
    value_fail("output.summary", "verbosity must be 0, 1, or 2", line_of("output.summary"));
  }

  try {
    config.validate();
  } catch (const Error &e) {
    fail(e.code(), std::string("deck validation: ") + e.what());
  }
}

InputDeck InputDeck::parse(std::string_view text) {
  std::vector<RawEntry> entries;
  std::map<std::string, int> key_lines;
  std::string section;
  int line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string line(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) parse_fail(line_no, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) parse_fail(line_no, "empty key");
    if (value.empty()) parse_fail(line_no, "empty value");
    if (section.empty()) parse_fail(line_no, "key outside any [section]");
    entries.push_back({section, key, value, line_no});
    key_lines[section + "." + key] = line_no;
  }

  InputDeck deck;
  // dim first: per-dimension values depend on it.
  for (const auto &entry : entries) {
    if (entry.section == "mesh" && entry.key == "dim") {
      deck.apply(entry.section, entry.key, entry.value, entry.line);
    }
  }
  for (const auto &entry : entries) {
    if (entry.section == "mesh" && entry.key == "dim") continue;
    deck.apply(entry.section, entry.key, entry.value, entry.line);
  }
  deck.finalize(&key_lines);
  return deck;
}

InputDeck InputDeck::parse_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open deck file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void InputDeck::set(const std::string &section, const std::string &key,
                    const std::string &value) {
  // Validate on a copy so a rejected override leaves the deck untouched.
  InputDeck trial = *this;
  trial.apply(section, key, value, 0);
  trial.finalize();
  *this = std::move(trial);
}

std::string InputDeck::get(const std::string &section, const std::string &key) const {
  auto per_dim_i = [&](const std::array<std::int64_t, 3> &v) {
    std::string out;
    for (int d = 0; d < config.dim; ++d) out += (d ? "," : "") + std::to_string(v[d]);
    return out;
  };
  auto per_dim_f = [&](const std::array<double, 3> &v) {
    std::string out;
    for (int d = 0; d < config.dim; ++d) out += (d ? "," : "") + f64_str(v[d]);
    return out;
  };
  auto per_dim_b = [&](const std::array<bool, 3> &v) {
    std::string out;
    for (int d = 0; d < config.dim; ++d) out += std::string(d ? "," : "") + (v[d] ? "true" : "false");
    return out;
  };

  const std::string qual = section + "." + key;
  if (qual == "mesh.dim") return std::to_string(config.dim);
  if (qual == "mesh.nx") return per_dim_i(config.mesh_cells);
  if (qual == "mesh.extent") return per_dim_f(config.extent);
  if (qual == "mesh.periodic") return per_dim_b(config.periodic);
  if (qual == "block.nx1") return std::to_string(config.nx1);
  if (qual == "block.ng") return std::to_string(config.ng);
  if (qual == "amr.max_levels") return std::to_string(config.max_levels);
  if (qual == "amr.refine_tol") return f64_str(config.refine_tol);
  if (qual == "amr.derefine_tol") return f64_str(config.derefine_tol);
  if (qual == "amr.derefine_gap") return std::to_string(config.derefine_gap);
  if (qual == "amr.flux_correction") return controls.flux_correction_enabled ? "true" : "false";
  if (qual == "amr.init_refine_passes") return std::to_string(controls.init_refine_passes);
  if (qual == "amr.tag_velocity") return config.tag_on_velocity ? "true" : "false";
  if (qual == "amr.tag_scalar0") return config.tag_on_scalar0 ? "true" : "false";
  if (qual == "burgers.num_scalar") return std::to_string(config.num_scalar);
  if (qual == "burgers.profile") return config.profile.name;
  if (qual == "burgers.amplitude") return f64_str(config.profile.amplitude);
  if (qual == "burgers.width") return f64_str(config.profile.width);
  if (qual == "burgers.center") return per_dim_f(config.profile.center);
  if (qual == "burgers.background") return f64_str(config.profile.background);
  if (qual == "burgers.scalar_amplitude") return f64_str(config.profile.scalar_amplitude);
  if (qual == "burgers.scalar_background") return f64_str(config.profile.scalar_background);
  if (qual == "burgers.cfl") return f64_str(config.cfl);
  if (qual == "burgers.dt_max") return f64_str(config.dt_max);
  if (qual == "run.nlim") return std::to_string(controls.nlim);
  if (qual == "run.tlim") return f64_str(controls.tlim);
  if (qual == "run.workers") return std::to_string(controls.workers);
  if (qual == "run.num_partitions") return std::to_string(controls.num_partitions);
  if (qual == "run.check_finite_every") return std::to_string(controls.check_finite_every);
  if (qual == "output.csv_dir") return csv_dir;
  if (qual == "output.summary") return std::to_string(summary);
  fail(ErrorCode::ValidationError, qual + ": unknown key");
}

std::string InputDeck::render() const {
  std::ostringstream out;
  out << "[mesh]\n";
  out << "dim = " << get("mesh", "dim") << "\n";
  out << "nx = " << get("mesh", "nx") << "\n";
  out << "extent = " << get("mesh", "extent") << "\n";
  out << "periodic = " << get("mesh", "periodic") << "\n";
  out << "\n[block]\n";
  out << "nx1 = " << get("block", "nx1") << "\n";
  out << "ng = " << get("block", "ng") << "\n";
  out << "\n[amr]\n";
  for (const char *key : {"max_levels", "refine_tol", "derefine_tol", "derefine_gap",
                          "flux_correction", "init_refine_passes", "tag_velocity", "tag_scalar0"}) {
    out << key << " = " << get("amr", key) << "\n";
  }
  out << "\n[burgers]\n";
  for (const char *key : {"num_scalar", "profile", "amplitude", "width", "center", "background",
                          "scalar_amplitude", "scalar_background", "cfl", "dt_max"}) {
    out << key << " = " << get("burgers", key) << "\n";
  }
  out << "\n[run]\n";
  for (const char *key : {"nlim", "tlim", "workers", "num_partitions", "check_finite_every"}) {
    out << key << " = " << get("run", key) << "\n";
  }
  out << "\n[output]\n";
  if (!csv_dir.empty()) out << "csv_dir = " << csv_dir << "\n";
  out << "summary = " << get("output", "summary") << "\n";
  return out.str();
}

} // namespace amrbench
