//! \file burgers.cpp
//! \brief WENO5/HLL kernels and per-block solver operations.

#include "burgers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace amrbench {

double weno5_reconstruct(double vm2, double vm1, double v0, double vp1, double vp2) {
  constexpr double eps = 1e-6;
  constexpr double c13_12 = 13.0 / 12.0;

  const double p0 = (2.0 * vm2 - 7.0 * vm1 + 11.0 * v0) / 6.0;
  const double p1 = (-vm1 + 5.0 * v0 + 2.0 * vp1) / 6.0;
  const double p2 = (2.0 * v0 + 5.0 * vp1 - vp2) / 6.0;

  const double b0 = c13_12 * (vm2 - 2.0 * vm1 + v0) * (vm2 - 2.0 * vm1 + v0) +
                    0.25 * (vm2 - 4.0 * vm1 + 3.0 * v0) * (vm2 - 4.0 * vm1 + 3.0 * v0);
  const double b1 = c13_12 * (vm1 - 2.0 * v0 + vp1) * (vm1 - 2.0 * v0 + vp1) +
                    0.25 * (vm1 - vp1) * (vm1 - vp1);
  const double b2 = c13_12 * (v0 - 2.0 * vp1 + vp2) * (v0 - 2.0 * vp1 + vp2) +
                    0.25 * (3.0 * v0 - 4.0 * vp1 + vp2) * (3.0 * v0 - 4.0 * vp1 + vp2);

  const double a0 = 0.1 / ((eps + b0) * (eps + b0));
  const double a1 = 0.6 / ((eps + b1) * (eps + b1));
  const double a2 = 0.3 / ((eps + b2) * (eps + b2));
  const double inv_sum = 1.0 / (a0 + a1 + a2);
  return (a0 * p0 + a1 * p1 + a2 * p2) * inv_sum;
}

void physical_flux(std::span<const double> w, int normal_dim, int dim,
                   std::span<double> flux_out) {
  const double un = w[normal_dim];
  for (std::size_t v = 0; v < w.size(); ++v) {
    flux_out[v] = (static_cast<int>(v) < dim) ? 0.5 * un * w[v] : w[v] * un;
  }
}

void hll_flux(std::span<const double> left, std::span<const double> right, int normal_dim,
              int dim, std::span<double> flux_out) {
  const double al = left[normal_dim];
  const double ar = right[normal_dim];
  const double sl = std::min(al, ar);
  const double sr = std::max(al, ar);

  if (sl >= 0.0) {
    physical_flux(left, normal_dim, dim, flux_out);
    return;
  }
  if (sr <= 0.0) {
    physical_flux(right, normal_dim, dim, flux_out);
    return;
  }
  const double inv = 1.0 / (sr - sl);
  for (std::size_t v = 0; v < left.size(); ++v) {
    const double fl = (static_cast<int>(v) < dim) ? 0.5 * al * left[v] : left[v] * al;
    const double fr = (static_cast<int>(v) < dim) ? 0.5 * ar * right[v] : right[v] * ar;
    flux_out[v] = (sr * fl - sl * fr + sl * sr * (right[v] - left[v])) * inv;
  }
}

namespace {

//! HLL over one reconstructed line; the physical flux is factor * u_n * w
//! (factor 1/2 for velocity components, 1 for scalars).
inline void hll_line(const double *wl, const double *wr, const double *sl, const double *sr,
                     double factor, const double *ul, const double *ur, int count, double *out,
                     int out_stride) {
  for (int i = 0; i < count; ++i) {
    const double fl = factor * ul[i] * wl[i];
    const double fr = factor * ur[i] * wr[i];
    double f;
    if (sl[i] >= 0.0) {
      f = fl;
    } else if (sr[i] <= 0.0) {
      f = fr;
    } else {
      f = (sr[i] * fl - sl[i] * fr + sl[i] * sr[i] * (wr[i] - wl[i])) / (sr[i] - sl[i]);
    }
    out[static_cast<std::size_t>(i) * out_stride] = f;
  }
}

} // namespace

void calculate_fluxes(MeshBlock &block) {
  const int dim = block.dim;
  const int ng = block.ng;
  const int n = block.nx1;
  const int nvar = block.u.nvar();
  const int nf = n + 1;
  const auto &shape = block.u.shape();
  const std::size_t sy = shape[0];
  const std::size_t sz = static_cast<std::size_t>(shape[0]) * shape[1];
  const int gz = block.ghosts(2);
  const int nk = block.active_cells(2);

  // Reconstructed left/right states along one line, per variable.
  std::vector<double> wl(static_cast<std::size_t>(nvar) * nf);
  std::vector<double> wr(static_cast<std::size_t>(nvar) * nf);
  std::vector<double> sl(nf), sr(nf);

  auto wave_speeds = [&](int count, int normal_var) {
    const double *ul = wl.data() + static_cast<std::size_t>(normal_var) * nf;
    const double *ur = wr.data() + static_cast<std::size_t>(normal_var) * nf;
    for (int i = 0; i < count; ++i) {
      sl[i] = std::min(ul[i], ur[i]);
      sr[i] = std::max(ul[i], ur[i]);
    }
  };

  // x: faces run along the contiguous dimension.
  for (int k = 0; k < nk; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int v = 0; v < nvar; ++v) {
        const double *row = block.u.var(v) + (k + gz) * sz + (j + ng) * sy;
        double *l = wl.data() + static_cast<std::size_t>(v) * nf;
        double *r = wr.data() + static_cast<std::size_t>(v) * nf;
        for (int f = 0; f < nf; ++f) {
          const int c = ng + f - 1; // cell left of the face
          l[f] = weno5_reconstruct(row[c - 2], row[c - 1], row[c], row[c + 1], row[c + 2]);
          r[f] = weno5_reconstruct(row[c + 3], row[c + 2], row[c + 1], row[c], row[c - 1]);
        }
      }
      wave_speeds(nf, 0);
      for (int v = 0; v < nvar; ++v) {
        hll_line(wl.data() + static_cast<std::size_t>(v) * nf,
                 wr.data() + static_cast<std::size_t>(v) * nf, sl.data(), sr.data(),
                 v < dim ? 0.5 : 1.0, wl.data(), wr.data(), nf,
                 block.face_flux[0].data() + block.flux_index(v, 0, j, k), 1);
      }
    }
  }

  // y: reconstruct whole x-rows at once from five neighboring y-rows.
  for (int k = 0; k < nk; ++k) {
    for (int f = 0; f < nf; ++f) {
      const int c = ng + f - 1;
      for (int v = 0; v < nvar; ++v) {
        const double *base = block.u.var(v) + (k + gz) * sz + ng;
        const double *m2 = base + (c - 2) * sy, *m1 = base + (c - 1) * sy, *c0 = base + c * sy,
                     *p1 = base + (c + 1) * sy, *p2 = base + (c + 2) * sy,
                     *p3 = base + (c + 3) * sy;
        double *l = wl.data() + static_cast<std::size_t>(v) * nf;
        double *r = wr.data() + static_cast<std::size_t>(v) * nf;
        for (int i = 0; i < n; ++i) {
          l[i] = weno5_reconstruct(m2[i], m1[i], c0[i], p1[i], p2[i]);
          r[i] = weno5_reconstruct(p3[i], p2[i], p1[i], c0[i], m1[i]);
        }
      }
      wave_speeds(n, 1);
      for (int v = 0; v < nvar; ++v) {
        hll_line(wl.data() + static_cast<std::size_t>(v) * nf,
                 wr.data() + static_cast<std::size_t>(v) * nf, sl.data(), sr.data(),
                 v < dim ? 0.5 : 1.0, wl.data() + nf, wr.data() + nf, n,
                 block.face_flux[1].data() + block.flux_index(v, f, 0, k), nf);
      }
    }
  }

  if (dim == 3) {
    for (int f = 0; f < nf; ++f) {
      const int c = ng + f - 1;
      for (int j = 0; j < n; ++j) {
        for (int v = 0; v < nvar; ++v) {
          const double *base = block.u.var(v) + (j + ng) * sy + ng;
          const double *m2 = base + (c - 2) * sz, *m1 = base + (c - 1) * sz, *c0 = base + c * sz,
                       *p1 = base + (c + 1) * sz, *p2 = base + (c + 2) * sz,
                       *p3 = base + (c + 3) * sz;
          double *l = wl.data() + static_cast<std::size_t>(v) * nf;
          double *r = wr.data() + static_cast<std::size_t>(v) * nf;
          for (int i = 0; i < n; ++i) {
            l[i] = weno5_reconstruct(m2[i], m1[i], c0[i], p1[i], p2[i]);
            r[i] = weno5_reconstruct(p3[i], p2[i], p1[i], c0[i], m1[i]);
          }
        }
        wave_speeds(n, 2);
        for (int v = 0; v < nvar; ++v) {
          hll_line(wl.data() + static_cast<std::size_t>(v) * nf,
                   wr.data() + static_cast<std::size_t>(v) * nf, sl.data(), sr.data(),
                   v < dim ? 0.5 : 1.0, wl.data() + 2 * static_cast<std::size_t>(nf),
                   wr.data() + 2 * static_cast<std::size_t>(nf), n,
                   block.face_flux[2].data() + block.flux_index(v, f, 0, j), nf);
        }
      }
    }
  }
}

void flux_divergence(MeshBlock &block) {
  const int dim = block.dim;
  const int ng = block.ng;
  const int n = block.nx1;
  const int nvar = block.u.nvar();
  const int nk = block.active_cells(2);
  const double inv_dx[3] = {1.0 / block.dx[0], 1.0 / block.dx[1],
                            dim == 3 ? 1.0 / block.dx[2] : 0.0};

  for (int v = 0; v < nvar; ++v) {
    for (int k = 0; k < nk; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const auto &fx = block.face_flux[0];
          const auto &fy = block.face_flux[1];
          double div = (fx[block.flux_index(v, i + 1, j, k)] -
                        fx[block.flux_index(v, i, j, k)]) *
                       inv_dx[0];
          div += (fy[block.flux_index(v, j + 1, i, k)] - fy[block.flux_index(v, j, i, k)]) *
                 inv_dx[1];
          if (dim == 3) {
            const auto &fz = block.face_flux[2];
            div += (fz[block.flux_index(v, k + 1, i, j)] - fz[block.flux_index(v, k, i, j)]) *
                   inv_dx[2];
          }
          block.rhs.at(v, i + ng, j + ng, k + block.ghosts(2)) = -div;
        }
      }
    }
  }
}

BlockArray weighted_sum_data(const BlockArray &x, const BlockArray &y, double a, double b) {
  if (!x.same_shape(y)) fail(ErrorCode::ShapeMismatch, "weighted_sum_data: shapes differ");
  BlockArray out(x.nvar(), x.shape());
  auto xs = x.data();
  auto ys = y.data();
  auto os = out.data();
  for (std::size_t idx = 0; idx < os.size(); ++idx) os[idx] = a * xs[idx] + b * ys[idx];
  return out;
}

void weighted_sum_into(BlockArray &dst, double a, const BlockArray &x, double b,
                       const BlockArray &y) {
  if (!dst.same_shape(x) || !dst.same_shape(y)) {
    fail(ErrorCode::ShapeMismatch, "weighted_sum_into: shapes differ");
  }
  auto xs = x.data();
  auto ys = y.data();
  auto ds = dst.data();
  for (std::size_t idx = 0; idx < ds.size(); ++idx) ds[idx] = a * xs[idx] + b * ys[idx];
}

double estimate_timestep(std::span<const MeshBlock *const> blocks, double cfl, double dt_max) {
  constexpr double eps_v = 1e-12;
  double bound = std::numeric_limits<double>::infinity();
  for (const MeshBlock *block : blocks) {
    const int ng = block->ng;
    const int nk = block->active_cells(2);
    for (int d = 0; d < block->dim; ++d) {
      const double dxd = block->dx[d];
      const double *u = block->u.var(d);
      for (int k = 0; k < nk; ++k) {
        for (int j = 0; j < block->nx1; ++j) {
          const std::size_t row = block->u.index(0, ng, j + ng, k + block->ghosts(2));
          for (int i = 0; i < block->nx1; ++i) {
            bound = std::min(bound, dxd / (std::abs(u[row + i]) + eps_v));
          }
        }
      }
    }
  }
  return std::min(cfl * bound, dt_max);
}

double refinement_indicator(const MeshBlock &block, const ProblemConfig &config) {
  constexpr double floor_w = 1e-10;
  std::vector<int> vars;
  if (config.tag_on_velocity) {
    for (int d = 0; d < block.dim; ++d) vars.push_back(d);
  }
  if (config.tag_on_scalar0 && config.num_scalar > 0) vars.push_back(block.dim);

  const int ng = block.ng;
  const int nk = block.active_cells(2);
  double s = 0.0;
  for (int v : vars) {
    for (int k = 0; k < nk; ++k) {
      for (int j = 0; j < block.nx1; ++j) {
        for (int i = 0; i < block.nx1; ++i) {
          const int gi = i + ng, gj = j + ng, gk = k + block.ghosts(2);
          const double w0 = std::abs(block.u.at(v, gi, gj, gk));
          const double denom = 2.0 * std::max(w0, floor_w);
          double num = std::abs(block.u.at(v, gi + 1, gj, gk) - block.u.at(v, gi - 1, gj, gk));
          s = std::max(s, num / denom);
          num = std::abs(block.u.at(v, gi, gj + 1, gk) - block.u.at(v, gi, gj - 1, gk));
          s = std::max(s, num / denom);
          if (block.dim == 3) {
            num = std::abs(block.u.at(v, gi, gj, gk + 1) - block.u.at(v, gi, gj, gk - 1));
            s = std::max(s, num / denom);
          }
        }
      }
    }
  }
  return s;
}

RefinementTag tag_refinement(const MeshBlock &block, const ProblemConfig &config) {
  const double s = refinement_indicator(block, config);
  if (s > config.refine_tol) return RefinementTag::Refine;
  if (s < config.derefine_tol) return RefinementTag::Derefine;
  return RefinementTag::None;
}

} // namespace amrbench
