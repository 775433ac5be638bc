#ifndef AMRBENCH_MESH_BLOCK_HPP_
#define AMRBENCH_MESH_BLOCK_HPP_
//! \file mesh_block.hpp
//! \brief Per-block cell-centered storage with ghost layers, face-flux arrays,
//!  and the restriction/prolongation operators that move data between levels.
//!
//! Storage is structure-of-arrays per variable, x fastest. Variables are
//! fixed-index: components [0, dim) are velocities, [dim, dim+num_scalar) the
//! passive scalars.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "logical_location.hpp"
#include "mesh_tree.hpp"
#include "problem_config.hpp"

namespace amrbench {

//! Dense nvar x nz x ny x nx block of doubles, zero-initialized.
class BlockArray {
 public:
  BlockArray() = default;
  BlockArray(int nvar, const std::array<int, 3> &shape)
      : nvar_(nvar), shape_(shape),
        stride_v_(static_cast<std::size_t>(shape[0]) * shape[1] * shape[2]),
        data_(static_cast<std::size_t>(nvar) * stride_v_, 0.0) {}

  int nvar() const { return nvar_; }
  const std::array<int, 3> &shape() const { return shape_; }
  std::size_t values_per_var() const { return stride_v_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const BlockArray &o) const { return nvar_ == o.nvar_ && shape_ == o.shape_; }

  double &at(int v, int i, int j, int k) { return data_[index(v, i, j, k)]; }
  double at(int v, int i, int j, int k) const { return data_[index(v, i, j, k)]; }

  double *var(int v) { return data_.data() + static_cast<std::size_t>(v) * stride_v_; }
  const double *var(int v) const { return data_.data() + static_cast<std::size_t>(v) * stride_v_; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::size_t index(int v, int i, int j, int k) const {
    return ((static_cast<std::size_t>(v) * shape_[2] + k) * shape_[1] + j) * shape_[0] + i;
  }

 private:
  int nvar_ = 0;
  std::array<int, 3> shape_ = {0, 0, 0};
  std::size_t stride_v_ = 0;
  std::vector<double> data_;
};

struct MeshBlock {
  LogicalLocation loc;
  int owner = 0;
  double cost = 1.0;
  std::int64_t last_derefine_cycle = RefinementFlags::kNeverDerefined;
  std::array<double, 3> dx = {0.0, 0.0, 0.0};
  std::array<double, 3> origin = {0.0, 0.0, 0.0}; // low corner of the interior

  BlockArray u;                      // conserved variables, with ghosts
  BlockArray u0;                     // RK base register, same shape as u
  BlockArray rhs;                    // flux divergence, ghost cells stay zero
  BlockArray coarse;                 // coarse ghost scratch (see exchange)
  std::vector<double> derived;       // d = q0 |u|^2 / 2, interior cells only
  std::array<std::vector<double>, 3> face_flux;

  int dim = 3;
  int nx1 = 0;
  int ng = 0;

  int active_cells(int d) const { return d < dim ? nx1 : 1; }
  int ghosts(int d) const { return d < dim ? ng : 0; }
  int total_cells(int d) const { return active_cells(d) + 2 * ghosts(d); }
  std::size_t interior_size() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(nx1);
    return n;
  }
  bool is_ghost(int i, int j, int k) const {
    const int idx[3] = {i, j, k};
    for (int d = 0; d < dim; ++d) {
      if (idx[d] < ng || idx[d] >= ng + nx1) return true;
    }
    return false;
  }
  double cell_center(int d, int interior_index) const {
    return origin[d] + (interior_index + 0.5) * dx[d];
  }
  double cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= dx[d];
    return v;
  }

  //! Flux through face `f` in [0, nx1] along the flux axis; (t1, t2) run over
  //! the remaining active dimensions in increasing order, interior cells only.
  std::size_t flux_index(int v, int f, int t1, int t2) const {
    const std::size_t nf = static_cast<std::size_t>(nx1) + 1;
    const std::size_t nt1 = static_cast<std::size_t>(nx1);
    return ((static_cast<std::size_t>(v) * (dim == 3 ? nx1 : 1) + t2) * nt1 + t1) * nf + f;
  }
  //! Flat index into interior-only arrays such as `derived`.
  std::size_t interior_index(int i_int, int j_int, int k_int) const {
    return (static_cast<std::size_t>(k_int) * nx1 + j_int) * nx1 + i_int;
  }
};

//! Allocate a zero-filled block at `loc` with geometry derived from `config`.
MeshBlock allocate_block(const ProblemConfig &config, const MeshTree &tree,
                         const LogicalLocation &loc);

//! Arithmetic mean of one 2^dim sibling cell group.
double restrict_cells(std::span<const double> fine_values);

//! Minmod-limited linear prolongation of one coarse cell into its 2^dim
//! children (z-order). lo/hi hold the per-dimension face-neighbor values.
//! The children's mean equals `center` exactly.
std::array<double, 8> prolong_cells(double center, std::span<const double> lo,
                                    std::span<const double> hi, int dim);

//! Recompute d = q0 |u|^2 / 2 on interior cells (zero when num_scalar == 0).
void calculate_derived(MeshBlock &block);

} // namespace amrbench

#endif // AMRBENCH_MESH_BLOCK_HPP_
