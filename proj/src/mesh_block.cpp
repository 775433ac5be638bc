//! \file mesh_block.cpp
//! \brief Block allocation and the level-transfer operators.

#include "mesh_block.hpp"

#include <cmath>

#include "error.hpp"

namespace amrbench {

MeshBlock allocate_block(const ProblemConfig &config, const MeshTree &tree,
                         const LogicalLocation &loc) {
  MeshBlock block;
  block.loc = loc;
  block.dim = config.dim;
  block.nx1 = config.nx1;
  block.ng = config.ng;

  const int plev = tree.physical_level(loc);
  std::array<int, 3> shape;
  for (int d = 0; d < 3; ++d) {
    shape[d] = block.total_cells(d);
    if (d < config.dim) {
      block.dx[d] = config.base_dx(d) / static_cast<double>(std::int64_t{1} << plev);
      block.origin[d] = static_cast<double>(loc.lx[d]) * config.nx1 * block.dx[d];
    }
  }
  const int nvar = config.nvar();
  block.u = BlockArray(nvar, shape);
  block.u0 = BlockArray(nvar, shape);
  block.rhs = BlockArray(nvar, shape);
  block.derived.assign(block.interior_size(), 0.0);
  const std::size_t faces_per_var =
      static_cast<std::size_t>(config.nx1 + 1) * config.nx1 * (config.dim == 3 ? config.nx1 : 1);
  for (int axis = 0; axis < config.dim; ++axis) {
    block.face_flux[axis].assign(static_cast<std::size_t>(nvar) * faces_per_var, 0.0);
  }
  return block;
}

double restrict_cells(std::span<const double> fine_values) {
  double sum = 0.0;
  for (double v : fine_values) sum += v;
  return sum / static_cast<double>(fine_values.size());
}

namespace {
double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}
} // namespace

std::array<double, 8> prolong_cells(double center, std::span<const double> lo,
                                    std::span<const double> hi, int dim) {
  std::array<double, 3> slope = {0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d) slope[d] = minmod(center - lo[d], hi[d] - center);

  std::array<double, 8> children{};
  for (int ci = 0; ci < (1 << dim); ++ci) {
    double value = center;
    for (int d = 0; d < dim; ++d) {
      value += (((ci >> d) & 1) ? 0.25 : -0.25) * slope[d];
    }
    children[ci] = value;
  }
  return children;
}

void calculate_derived(MeshBlock &block) {
  const int dim = block.dim;
  const int ng = block.ng;
  const int nk = block.active_cells(2);
  const bool has_scalar = block.u.nvar() > dim;
  for (int k = 0; k < nk; ++k) {
    for (int j = 0; j < block.nx1; ++j) {
      for (int i = 0; i < block.nx1; ++i) {
        const int gi = i + ng, gj = j + ng, gk = k + block.ghosts(2);
        double ke = 0.0;
        for (int d = 0; d < dim; ++d) {
          const double ud = block.u.at(d, gi, gj, gk);
          ke += ud * ud;
        }
        const double q0 = has_scalar ? block.u.at(dim, gi, gj, gk) : 0.0;
        block.derived[block.interior_index(i, j, k)] = 0.5 * q0 * ke;
      }
    }
  }
}

} // namespace amrbench
