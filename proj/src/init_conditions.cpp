//! \file init_conditions.cpp
//! \brief Built-in initial profiles: gaussian, sine, constant.

#include "init_conditions.hpp"

#include <cmath>

#include "error.hpp"

namespace amrbench {

namespace {

//! Minimum-image displacement so the gaussian is exactly periodic.
double wrapped_delta(double x, double center, double extent, bool periodic) {
  double d = x - center;
  if (periodic) {
    d -= extent * std::round(d / extent);
  }
  return d;
}

} // namespace

double profile_value(const ProblemConfig &config, int v, const std::array<double, 3> &x) {
  const ProfileParams &p = config.profile;
  const bool is_velocity = v < config.dim;

  if (p.name == "constant") {
    return is_velocity ? p.amplitude : p.scalar_amplitude;
  }
  if (p.name == "sine") {
    // Velocity component d varies along dimension d; scalar i along i mod dim.
    const int d = is_velocity ? v : (v - config.dim) % config.dim;
    const double s = std::sin(2.0 * M_PI * x[d] / config.extent[d]);
    return is_velocity ? p.background + p.amplitude * s
                       : p.scalar_background + p.scalar_amplitude * s;
  }
  if (p.name == "gaussian") {
    double arg = 0.0;
    for (int d = 0; d < config.dim; ++d) {
      const double delta =
          wrapped_delta(x[d], p.center[d], config.extent[d], config.periodic[d]);
      arg += delta * delta;
    }
    const double bump = std::exp(-arg / (2.0 * p.width * p.width));
    return is_velocity ? p.background + p.amplitude * bump
                       : p.scalar_background + p.scalar_amplitude * bump;
  }
  fail(ErrorCode::UnknownProfile, "unknown profile '" + p.name + "'");
}

void init_conditions(MeshBlock &block, const ProblemConfig &config) {
  if (config.profile.name != "gaussian" && config.profile.name != "sine" &&
      config.profile.name != "constant") {
    fail(ErrorCode::UnknownProfile, "unknown profile '" + config.profile.name + "'");
  }
  const auto &shape = block.u.shape();
  for (int v = 0; v < block.u.nvar(); ++v) {
    for (int k = 0; k < shape[2]; ++k) {
      for (int j = 0; j < shape[1]; ++j) {
        for (int i = 0; i < shape[0]; ++i) {
          const std::array<double, 3> x = {block.cell_center(0, i - block.ghosts(0)),
                                           block.cell_center(1, j - block.ghosts(1)),
                                           block.cell_center(2, k - block.ghosts(2))};
          block.u.at(v, i, j, k) = profile_value(config, v, x);
        }
      }
    }
  }
  calculate_derived(block);
}

} // namespace amrbench
