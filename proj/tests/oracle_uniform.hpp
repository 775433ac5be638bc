#ifndef AMRBENCH_TESTS_ORACLE_UNIFORM_HPP_
#define AMRBENCH_TESTS_ORACLE_UNIFORM_HPP_
//! \file oracle_uniform.hpp
//! \brief Test-only reference solver: the same WENO5/HLL/RK2 scheme written as
//!  a monolithic single-array periodic implementation, independent of the
//!  block/ghost/AMR machinery it is used to check.

#include <array>
#include <cstddef>
#include <vector>

namespace amrbench_test {

class OracleUniform {
 public:
  //! nvar = dim velocities + num_scalar, periodic in every dimension.
  OracleUniform(int dim, std::array<int, 3> cells, int num_scalar,
                std::array<double, 3> extent);

  int dim() const { return dim_; }
  int nvar() const { return nvar_; }
  const std::array<int, 3> &cells() const { return n_; }
  double dx(int d) const { return dx_[d]; }

  double &at(int v, int i, int j, int k);
  double at(int v, int i, int j, int k) const;

  //! Flux along `axis` through the left face of cell (i, j, k), variable v.
  double face_flux(int axis, int v, int i, int j, int k) const;
  void compute_fluxes();

  double min_timestep(double cfl, double dt_max) const;
  void step(double dt); // one Heun step with periodic wrap

 private:
  std::size_t idx(int v, int i, int j, int k) const;
  int wrap(int c, int d) const;
  double reconstruct(const double *cells5) const;
  void hll(const double *wl, const double *wr, int axis, double *f) const;
  std::vector<double> divergence() const;

  int dim_;
  int nvar_;
  std::array<int, 3> n_;
  std::array<double, 3> dx_;
  std::vector<double> q_;
  std::array<std::vector<double>, 3> flux_;
};

} // namespace amrbench_test

#endif // AMRBENCH_TESTS_ORACLE_UNIFORM_HPP_
