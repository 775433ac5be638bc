#ifndef AMRBENCH_BURGERS_HPP_
#define AMRBENCH_BURGERS_HPP_
//! \file burgers.hpp
//! \brief Physics kernels for the vector inviscid Burgers system with passive
//!  scalars: WENO5 reconstruction, HLL interface fluxes, flux divergence,
//!  weighted-sum stage combinations, timestep estimation, refinement tagging.

#include <span>
#include <utility>
#include <vector>

#include "mesh_block.hpp"
#include "mesh_tree.hpp"
#include "problem_config.hpp"

namespace amrbench {

//! Jiang-Shu WENO5 value at the right face of the center cell v0, biased from
//! the left. Mirror the argument order for the right-biased state.
double weno5_reconstruct(double vm2, double vm1, double v0, double vp1, double vp2);

//! HLL flux for left/right nvar states through a face with normal `normal_dim`.
//! Velocity components carry F_m = u_n u_m / 2, scalars F_q = q u_n.
void hll_flux(std::span<const double> left, std::span<const double> right, int normal_dim,
              int dim, std::span<double> flux_out);

//! Physical flux of a single state (the consistency limit of hll_flux).
void physical_flux(std::span<const double> w, int normal_dim, int dim, std::span<double> flux_out);

//! WENO5-reconstruct left/right states and store HLL fluxes on every interior
//! face in every dimension. Pure function of u; requires current ghosts.
void calculate_fluxes(MeshBlock &block);

//! rhs[cell] = -sum_d (F_d+ - F_d-) / dx_d on interior cells.
void flux_divergence(MeshBlock &block);

//! Elementwise a*X + b*Y over all variables including ghosts.
BlockArray weighted_sum_data(const BlockArray &x, const BlockArray &y, double a, double b);
//! In-place form; dst may alias x or y. Throws ShapeMismatch.
void weighted_sum_into(BlockArray &dst, double a, const BlockArray &x, double b,
                       const BlockArray &y);

//! One Heun (RK2) step of du/dt = L(u):
//!   u1 = u0 + dt L(u0);  u_next = (u0 + u1 + dt L(u1)) / 2.
template <typename State, typename Rhs>
State rk2_advance(const State &u0, double dt, Rhs &&eval_rhs) {
  State u1 = u0 + dt * eval_rhs(u0);
  return 0.5 * u0 + 0.5 * (u1 + dt * eval_rhs(u1));
}

//! CFL bound: cfl * min over blocks, cells, dims of dx_d / (|u_d| + 1e-12),
//! capped by dt_max. Blocks must be passed in Morton order.
double estimate_timestep(std::span<const MeshBlock *const> blocks, double cfl, double dt_max);

//! Largest relative centered first derivative over the tagging variable set.
double refinement_indicator(const MeshBlock &block, const ProblemConfig &config);

//! Refine above refine_tol, derefine below derefine_tol, None between.
RefinementTag tag_refinement(const MeshBlock &block, const ProblemConfig &config);

} // namespace amrbench

#endif // AMRBENCH_BURGERS_HPP_
