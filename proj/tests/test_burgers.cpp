//! \file test_burgers.cpp
//! \brief Kernel-level checks: WENO5, HLL, fluxes, divergence, RK2, dt, tags.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "burgers.hpp"
#include "error.hpp"
#include "mesh_block.hpp"
#include "oracle_uniform.hpp"
#include "problem_config.hpp"

using namespace amrbench;

namespace {

ProblemConfig single_block_config(int dim, int n, int num_scalar) {
  ProblemConfig cfg;
  cfg.dim = dim;
  cfg.mesh_cells = {n, n, dim == 3 ? n : 1};
  cfg.nx1 = n;
  cfg.num_scalar = num_scalar;
  cfg.max_levels = 1;
  return cfg;
}

MeshBlock make_block(const ProblemConfig &cfg) {
  auto tree = MeshTree::build_base_tree(cfg.mesh_cells, {cfg.nx1, cfg.nx1, cfg.dim == 3 ? cfg.nx1 : 1},
                                        cfg.dim, cfg.max_levels);
  return allocate_block(cfg, tree, tree.morton_order().front());
}

//! Fill interior and ghosts from a periodic function of global cell indices,
//! so ghost cells hold bitwise copies of the wrapped interior.
template <typename Fn>
void fill_periodic(MeshBlock &block, Fn fn) {
  const auto &shape = block.u.shape();
  const int n = block.nx1;
  auto wrap = [n](int c) { return ((c % n) + n) % n; };
  for (int v = 0; v < block.u.nvar(); ++v) {
    for (int k = 0; k < shape[2]; ++k) {
      for (int j = 0; j < shape[1]; ++j) {
        for (int i = 0; i < shape[0]; ++i) {
          block.u.at(v, i, j, k) = fn(v, wrap(i - block.ghosts(0)), wrap(j - block.ghosts(1)),
                                      wrap(k - block.ghosts(2)));
        }
      }
    }
  }
}

//! Compensated (Neumaier) sum for roundoff-tight conservation checks.
double stable_sum(const std::vector<double> &vals) {
  double sum = 0.0, comp = 0.0;
  for (double v : vals) {
    const double t = sum + v;
    comp += (std::fabs(sum) >= std::fabs(v)) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

//! Exact cell average of sin(2*pi*x) over [a, a+h].
double sine_cell_average(double a, double h) {
  return (std::cos(2 * M_PI * a) - std::cos(2 * M_PI * (a + h))) / (2 * M_PI * h);
}

} // namespace

TEST_CASE("weno5 reproduces constants and linear data") {
  CHECK(weno5_reconstruct(3, 3, 3, 3, 3) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(weno5_reconstruct(1, 2, 3, 4, 5) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(weno5_reconstruct(-7.25, -7.25, -7.25, -7.25, -7.25) ==
        doctest::Approx(-7.25).epsilon(1e-15));
  CHECK(std::isnan(weno5_reconstruct(1, 2, std::nan(""), 4, 5)));
}

TEST_CASE("weno5 measured order on smooth data is at least 4.5") {
  double prev_err = 0.0;
  for (int pass = 0; pass < 3; ++pass) {
    const int n = 32 << pass;
    const double h = 1.0 / n;
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      double avg[5];
      for (int s = -2; s <= 2; ++s) {
        avg[s + 2] = sine_cell_average((i + s) * h, h); // periodic closed form
      }
      const double face = weno5_reconstruct(avg[0], avg[1], avg[2], avg[3], avg[4]);
      err = std::max(err, std::fabs(face - std::sin(2 * M_PI * (i + 1) * h)));
    }
    if (pass > 0) {
      const double order = std::log2(prev_err / err);
      CHECK(order >= 4.5);
    }
    prev_err = err;
  }
}

TEST_CASE("hll_flux branches") {
  const int dim = 3;
  std::vector<double> flux(3);

  SUBCASE("consistency on equal states") {
    const std::vector<double> w = {2, 0, 0};
    hll_flux(w, w, 0, dim, flux);
    CHECK(flux[0] == 2.0);
    CHECK(flux[1] == 0.0);
    CHECK(flux[2] == 0.0);
  }
  SUBCASE("transonic fan gives the HLL average") {
    const std::vector<double> wl = {1, 0, 0}, wr = {-1, 0, 0};
    hll_flux(wl, wr, 0, dim, flux);
    CHECK(flux[0] == doctest::Approx(1.5));
  }
  SUBCASE("supersonic left state upwinds") {
    const std::vector<double> wl = {2, 0, 0}, wr = {1, 0, 0};
    hll_flux(wl, wr, 0, dim, flux);
    CHECK(flux[0] == 2.0);
  }
  SUBCASE("consistency holds exactly for random states with scalars") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    std::vector<double> w(5), f(5), ref(5);
    for (int trial = 0; trial < 200; ++trial) {
      for (auto &x : w) x = val(rng);
      for (int normal = 0; normal < 3; ++normal) {
        hll_flux(w, w, normal, dim, f);
        physical_flux(w, normal, dim, ref);
        for (int v = 0; v < 5; ++v) CHECK(f[v] == ref[v]);
      }
    }
  }
}

TEST_CASE("calculate_fluxes constant state reproduces the physical flux") {
  for (int dim : {2, 3}) {
    ProblemConfig cfg = single_block_config(dim, 16, 2);
    auto block = make_block(cfg);
    const std::vector<double> w = {1.5, -0.75, dim == 3 ? 0.5 : -1.0, 2.0, 3.0};
    fill_periodic(block, [&](int v, int, int, int) { return w[v]; });
    calculate_fluxes(block);

    std::vector<double> ref(cfg.nvar());
    for (int axis = 0; axis < dim; ++axis) {
      physical_flux(std::span(w).first(cfg.nvar()), axis, dim, ref);
      for (int v = 0; v < cfg.nvar(); ++v) {
        for (int f = 0; f <= cfg.nx1; ++f) {
          CHECK(block.face_flux[axis][block.flux_index(v, f, 3, dim == 3 ? 5 : 0)] ==
                doctest::Approx(ref[v]).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("calculate_fluxes zero velocity zeroes every flux") {
  ProblemConfig cfg = single_block_config(2, 16, 3);
  auto block = make_block(cfg);
  fill_periodic(block, [&](int v, int i, int j, int) {
    return v < 2 ? 0.0 : 1.0 + 0.1 * std::sin(0.3 * i + 0.7 * j);
  });
  calculate_fluxes(block);
  for (int axis = 0; axis < 2; ++axis) {
    for (double f : block.face_flux[axis]) CHECK(f == 0.0);
  }
}

TEST_CASE("calculate_fluxes matches the monolithic oracle") {
  for (int dim : {2, 3}) {
    const int n = dim == 3 ? 16 : 32;
    ProblemConfig cfg = single_block_config(dim, n, 2);
    auto block = make_block(cfg);
    amrbench_test::OracleUniform oracle(dim, {n, n, n}, 2, {1.0, 1.0, 1.0});

    auto field = [&](int v, int i, int j, int k) {
      const double x = (i + 0.5) / n, y = (j + 0.5) / n, z = dim == 3 ? (k + 0.5) / n : 0.0;
      switch (v % 4) {
        case 0: return 1.0 + 0.4 * std::sin(2 * M_PI * x) * std::cos(2 * M_PI * y);
        case 1: return 0.5 * std::cos(2 * M_PI * (x + y + z));
        case 2: return -0.3 + 0.2 * std::sin(2 * M_PI * (y - z));
        default: return 1.0 + 0.25 * std::cos(2 * M_PI * (x - y));
      }
    };
    fill_periodic(block, field);
    for (int v = 0; v < cfg.nvar(); ++v) {
      for (int k = 0; k < (dim == 3 ? n : 1); ++k) {
        for (int j = 0; j < n; ++j) {
          for (int i = 0; i < n; ++i) oracle.at(v, i, j, k) = field(v, i, j, k);
        }
      }
    }

    calculate_fluxes(block);
    oracle.compute_fluxes();

    double max_diff = 0.0;
    for (int axis = 0; axis < dim; ++axis) {
      for (int v = 0; v < cfg.nvar(); ++v) {
        for (int k = 0; k < (dim == 3 ? n : 1); ++k) {
          for (int j = 0; j < n; ++j) {
            for (int f = 0; f <= n; ++f) {
              // Oracle stores the flux on the left face of cell f (periodic).
              int oi = 0, oj = 0, ok = 0;
              if (axis == 0) {
                oi = f, oj = j, ok = k;
              } else if (axis == 1) {
                oj = f, oi = j, ok = k;
              } else {
                ok = f, oi = j, oj = k;
              }
              const double mine = block.face_flux[axis][block.flux_index(v, f, j, k)];
              max_diff = std::max(max_diff,
                                  std::fabs(mine - oracle.face_flux(axis, v, oi, oj, ok)));
            }
          }
        }
      }
    }
    CHECK(max_diff <= 1e-14);
  }
}

TEST_CASE("flux_divergence") {
  ProblemConfig cfg = single_block_config(2, 16, 0);
  auto block = make_block(cfg);

  SUBCASE("uniform fluxes cancel exactly") {
    for (int axis = 0; axis < 2; ++axis) {
      for (auto &f : block.face_flux[axis]) f = 3.75;
    }
    flux_divergence(block);
    for (int j = 0; j < 16; ++j) {
      for (int i = 0; i < 16; ++i) {
        CHECK(block.rhs.at(0, i + cfg.ng, j + cfg.ng, 0) == 0.0);
      }
    }
  }
  SUBCASE("hand-checked single cell") {
    block.dx = {0.5, 0.5, 0.0};
    for (int f = 0; f <= 16; ++f) {
      for (int t = 0; t < 16; ++t) {
        block.face_flux[0][block.flux_index(0, f, t, 0)] = (f > t) ? 2.0 : 1.0;
      }
    }
    // Along y the flux is constant, contributing nothing.
    for (auto &f : block.face_flux[1]) f = 5.0;
    flux_divergence(block);
    // Cell (i=t, j=t): left face f=t gives 1, right face f=t+1 gives 2.
    CHECK(block.rhs.at(0, 0 + cfg.ng, 0 + cfg.ng, 0) == doctest::Approx(-2.0));
  }
  SUBCASE("periodic telescoping sums to zero") {
    ProblemConfig scfg = single_block_config(2, 32, 1);
    auto sblock = make_block(scfg);
    fill_periodic(sblock, [&](int v, int i, int j, int) {
      const double x = (i + 0.5) / 32, y = (j + 0.5) / 32;
      return (v == 2 ? 1.0 : 0.2) + 0.3 * std::sin(2 * M_PI * x) * std::cos(2 * M_PI * y);
    });
    calculate_fluxes(sblock);
    flux_divergence(sblock);
    for (int v = 0; v < scfg.nvar(); ++v) {
      std::vector<double> terms;
      double scale = 0.0;
      for (int j = 0; j < 32; ++j) {
        for (int i = 0; i < 32; ++i) {
          const double L = sblock.rhs.at(v, i + scfg.ng, j + scfg.ng, 0);
          terms.push_back(L);
          scale += std::fabs(L);
        }
      }
      CHECK(std::fabs(stable_sum(terms)) <= 1e-13 * std::max(scale, 1.0));
    }
  }
}

TEST_CASE("weighted_sum_data") {
  ProblemConfig cfg = single_block_config(2, 16, 1);
  auto block = make_block(cfg);
  fill_periodic(block, [](int v, int i, int j, int) { return v + 0.01 * i - 0.02 * j; });

  auto x = block.u;
  auto y = weighted_sum_data(x, x, 0.25, 0.25); // = x/2

  SUBCASE("identities") {
    auto same = weighted_sum_data(x, y, 1.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(same.data()[i] == x.data()[i]);
    auto halves = weighted_sum_data(x, x, 0.5, 0.5);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(halves.data()[i] == x.data()[i]);
  }
  SUBCASE("forward Euler stage shape") {
    const double dt = 0.125;
    auto stage = weighted_sum_data(x, y, 1.0, dt);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(stage.data()[i] == doctest::Approx(x.data()[i] * (1.0 + dt / 2)).epsilon(1e-15));
    }
  }
  SUBCASE("shape mismatch is rejected") {
    BlockArray small(1, {4, 4, 1});
    CHECK_THROWS_AS(weighted_sum_data(x, small, 1.0, 1.0), Error);
  }
}

TEST_CASE("rk2_advance template") {
  SUBCASE("zero right-hand side is exact identity") {
    const double u0 = 1.2345678901234567;
    CHECK(rk2_advance(u0, 0.125, [](double) { return 0.0; }) == u0);
  }
  SUBCASE("scalar decay matches the Heun expansion") {
    for (double dt : {0.5, 0.1, 0.01}) {
      const double u0 = 2.0;
      const double got = rk2_advance(u0, dt, [](double u) { return -u; });
      CHECK(got == doctest::Approx(u0 * (1.0 - dt + 0.5 * dt * dt)).epsilon(1e-15));
    }
  }
  SUBCASE("halving dt quarters the global error") {
    auto integrate = [](int steps) {
      const double dt = 1.0 / steps;
      double u = 1.0;
      for (int s = 0; s < steps; ++s) u = rk2_advance(u, dt, [](double v) { return -v; });
      return std::fabs(u - std::exp(-1.0));
    };
    const double e1 = integrate(16), e2 = integrate(32);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.08));
  }
}

TEST_CASE("estimate_timestep") {
  ProblemConfig cfg = single_block_config(3, 8, 0);
  auto block = make_block(cfg);
  block.dx = {0.1, 0.1, 0.1};

  SUBCASE("uniform speed") {
    fill_periodic(block, [](int v, int, int, int) { return v == 0 ? 2.0 : 0.0; });
    const MeshBlock *ptr = &block;
    CHECK(estimate_timestep({&ptr, 1}, 0.5, 1e9) == doctest::Approx(0.025).epsilon(1e-11));
  }
  SUBCASE("zero velocity caps at dt_max") {
    fill_periodic(block, [](int, int, int, int) { return 0.0; });
    const MeshBlock *ptr = &block;
    CHECK(estimate_timestep({&ptr, 1}, 0.5, 0.75) == 0.75);
  }
  SUBCASE("a refined block halves the global dt") {
    fill_periodic(block, [](int v, int, int, int) { return v == 0 ? 2.0 : 0.0; });
    auto fine = make_block(cfg);
    fine.dx = {0.05, 0.05, 0.05};
    fill_periodic(fine, [](int v, int, int, int) { return v == 0 ? 2.0 : 0.0; });
    const MeshBlock *coarse_only[1] = {&block};
    const MeshBlock *both[2] = {&block, &fine};
    const double dt_coarse = estimate_timestep({coarse_only, 1}, 0.4, 1e9);
    const double dt_both = estimate_timestep({both, 2}, 0.4, 1e9);
    CHECK(dt_both == doctest::Approx(0.5 * dt_coarse).epsilon(1e-14));
  }
}

TEST_CASE("tag_refinement") {
  ProblemConfig cfg = single_block_config(2, 16, 1);
  cfg.refine_tol = 0.1;
  cfg.derefine_tol = 0.001;

  SUBCASE("constant field derefines") {
    auto block = make_block(cfg);
    fill_periodic(block, [](int, int, int, int) { return 1.0; });
    CHECK(refinement_indicator(block, cfg) == 0.0);
    CHECK(tag_refinement(block, cfg) == RefinementTag::Derefine);
  }
  SUBCASE("step profile refines, matching the direct formula") {
    auto block = make_block(cfg);
    fill_periodic(block, [](int v, int i, int, int) {
      if (v < 2) return 0.0;
      return i < 8 ? 1.0 : 2.0;
    });
    // Direct evaluation: jump 1 against max(|w|) = 1 at the left edge cell.
    double expect = 0.0;
    auto wrap = [](int c) { return ((c % 16) + 16) % 16; };
    auto w = [&](int i) { return wrap(i) < 8 ? 1.0 : 2.0; };
    for (int i = 0; i < 16; ++i) {
      expect = std::max(expect, std::fabs(w(i + 1) - w(i - 1)) / (2 * std::max(w(i), 1e-10)));
    }
    CHECK(expect > cfg.refine_tol);
    CHECK(refinement_indicator(block, cfg) == doctest::Approx(expect));
    CHECK(tag_refinement(block, cfg) == RefinementTag::Refine);
  }
  SUBCASE("mid-band ripple stays untagged") {
    auto block = make_block(cfg);
    fill_periodic(block, [](int v, int i, int, int) {
      if (v < 2) return 0.0;
      return 1.0 + 0.01 * std::sin(2 * M_PI * i / 16.0);
    });
    const double s = refinement_indicator(block, cfg);
    CHECK(s > cfg.derefine_tol);
    CHECK(s < cfg.refine_tol);
    CHECK(tag_refinement(block, cfg) == RefinementTag::None);
  }
}
