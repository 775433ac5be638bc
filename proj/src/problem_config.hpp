#ifndef AMRBENCH_PROBLEM_CONFIG_HPP_
#define AMRBENCH_PROBLEM_CONFIG_HPP_
//! \file problem_config.hpp
//! \brief Validated problem parameters shared by the mesh, solver, and driver.

#include <array>
#include <cstdint>
#include <string>

#include "error.hpp"

namespace amrbench {

//! Initial-condition profile: "gaussian", "sine", or "constant".
struct ProfileParams {
  std::string name = "gaussian";
  double amplitude = 1.0;         // velocity bump height
  double width = 0.1;             // gaussian standard deviation
  std::array<double, 3> center = {0.5, 0.5, 0.5};
  double background = 1.0;        // velocity offset (gaussian/sine)
  double scalar_amplitude = 1.0;
  double scalar_background = 1.0;
};

struct ProblemConfig {
  int dim = 3;
  std::array<std::int64_t, 3> mesh_cells = {64, 64, 64};
  std::array<double, 3> extent = {1.0, 1.0, 1.0};
  std::array<bool, 3> periodic = {true, true, true};
  int nx1 = 16; // cells per block per dimension (uniform)
  int ng = 4;   // ghost width; WENO5 needs >= 3, coarse-fine transfer needs it even
  int num_scalar = 8;
  int bytes_per_value = 8;
  int max_levels = 3;
  double cfl = 0.4;
  double dt_max = 0.1;
  double refine_tol = 0.05;
  double derefine_tol = 0.005;
  std::int64_t derefine_gap = 10;
  bool tag_on_velocity = true;
  bool tag_on_scalar0 = true;
  ProfileParams profile;

  int nvar() const { return dim + num_scalar; }
  std::int64_t layout(int d) const { return mesh_cells[d] / nx1; }
  //! Base-level cell width in dimension d.
  double base_dx(int d) const { return extent[d] / static_cast<double>(mesh_cells[d]); }

  void validate() const {
    auto reject = [](const std::string &what) { fail(ErrorCode::ValidationError, what); };
    if (dim != 2 && dim != 3) reject("dim must be 2 or 3");
    if (ng < 3) reject("ng must be >= 3 (WENO5 stencil)");
    if (ng % 2 != 0) reject("ng must be even (coarse-fine ghost transfer)");
    if (nx1 < 2 * ng) reject("nx1 must be >= 2*ng so restriction can fill a coarse ghost region");
    if (nx1 % 2 != 0) reject("nx1 must be even (2:1 refinement)");
    if (num_scalar < 0) reject("num_scalar must be >= 0");
    if (max_levels < 1) reject("max_levels must be >= 1");
    if (!(cfl > 0.0) || cfl > 1.0) reject("cfl must be in (0, 1]");
    if (!(dt_max > 0.0)) reject("dt_max must be positive");
    if (!(derefine_tol > 0.0) || !(derefine_tol < refine_tol)) {
      reject("tolerances must satisfy 0 < derefine_tol < refine_tol");
    }
    if (derefine_gap < 0) reject("derefine_gap must be >= 0");
    for (int d = 0; d < dim; ++d) {
      if (mesh_cells[d] <= 0) reject("mesh cells must be positive");
      if (mesh_cells[d] % nx1 != 0) {
        reject("mesh size " + std::to_string(mesh_cells[d]) +
               " is not an exact multiple of block size " + std::to_string(nx1));
      }
      if (!(extent[d] > 0.0)) reject("domain extent must be positive");
    }
    if (profile.name != "gaussian" && profile.name != "sine" && profile.name != "constant") {
      fail(ErrorCode::UnknownProfile, "unknown profile '" + profile.name + "'");
    }
    if (profile.name == "gaussian" && !(profile.width > 0.0)) reject("profile width must be > 0");
  }
};

} // namespace amrbench

#endif // AMRBENCH_PROBLEM_CONFIG_HPP_
