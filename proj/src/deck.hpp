#ifndef AMRBENCH_DECK_HPP_
#define AMRBENCH_DECK_HPP_
//! \file deck.hpp
//! \brief Input decks: an INI-like grammar with [section] headers,
//!  `key = value` lines, and `#` comments. Unknown sections or keys are
//!  rejected; missing keys take the documented defaults; all numeric parsing
//!  is locale-independent.
//!
//! Sections and keys:
//!   [mesh]    dim, nx, extent, periodic
//!   [block]   nx1, ng
//!   [amr]     max_levels, refine_tol, derefine_tol, derefine_gap,
//!             flux_correction, init_refine_passes, tag_velocity, tag_scalar0
//!   [burgers] num_scalar, profile, amplitude, width, center, background,
//!             scalar_amplitude, scalar_background, cfl, dt_max
//!   [run]     nlim, tlim, workers, num_partitions, check_finite_every
//!   [output]  csv_dir, summary

#include <map>
#include <string>
#include <string_view>

#include "driver.hpp"
#include "problem_config.hpp"

namespace amrbench {

class InputDeck {
 public:
  ProblemConfig config;
  RunControls controls;
  std::string csv_dir;
  int summary = 1;

  //! Parse and fully validate deck text. Throws ParseError with the offending
  //! line for syntax problems and ValidationError (line-anchored where the
  //! key is known) for semantic ones.
  static InputDeck parse(std::string_view text);
  static InputDeck parse_file(const std::string &path);

  //! Apply a single override, then re-derive defaults and re-validate.
  void set(const std::string &section, const std::string &key, const std::string &value);

  //! Normalized value of one key, as render() would print it.
  std::string get(const std::string &section, const std::string &key) const;

  //! Canonical serialized form; parse(render()) reproduces the deck.
  std::string render() const;

 private:
  bool center_explicit_ = false;
  void apply(const std::string &section, const std::string &key, const std::string &value,
             int line);
  //! Derive dependent defaults and run all cross-field validation; key_lines
  //! (section.key -> deck line) anchors error messages when available.
  void finalize(const std::map<std::string, int> *key_lines = nullptr);
};

} // namespace amrbench

#endif // AMRBENCH_DECK_HPP_
