#ifndef AMRBENCH_INIT_CONDITIONS_HPP_
#define AMRBENCH_INIT_CONDITIONS_HPP_
//! \file init_conditions.hpp

#include "mesh_block.hpp"
#include "problem_config.hpp"

namespace amrbench {

//! Evaluate the selected profile at a physical point for variable `v`
//! (velocities first, then scalars). Deterministic and periodic-compatible.
double profile_value(const ProblemConfig &config, int v, const std::array<double, 3> &x);

//! Populate a block's interior (ghosts included, from the same closed form)
//! with the deck-selected profile. Throws UnknownProfile.
void init_conditions(MeshBlock &block, const ProblemConfig &config);

} // namespace amrbench

#endif // AMRBENCH_INIT_CONDITIONS_HPP_
