//! \file test_field_state.cpp
//! \brief Block storage, restriction/prolongation, derived quantity, profiles.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "init_conditions.hpp"
#include "mesh_block.hpp"
#include "mesh_tree.hpp"
#include "problem_config.hpp"

using namespace amrbench;

namespace {

ProblemConfig small_config(int dim, std::int64_t mesh, int nx1) {
  ProblemConfig cfg;
  cfg.dim = dim;
  cfg.mesh_cells = {mesh, mesh, dim == 3 ? mesh : 1};
  cfg.nx1 = nx1;
  return cfg;
}

MeshTree tree_for(const ProblemConfig &cfg) {
  return MeshTree::build_base_tree(cfg.mesh_cells, {cfg.nx1, cfg.nx1, cfg.dim == 3 ? cfg.nx1 : 1},
                                   cfg.dim, cfg.max_levels);
}

} // namespace

TEST_CASE("allocate_block sizes and spacing") {
  ProblemConfig cfg = small_config(3, 64, 8);
  cfg.num_scalar = 8;
  cfg.validate();
  auto tree = tree_for(cfg);

  auto block = allocate_block(cfg, tree, LogicalLocation(3, 0, 0, 0));
  CHECK(block.u.nvar() == 11);
  CHECK(block.u.values_per_var() == 16 * 16 * 16);
  CHECK(block.dx[0] == doctest::Approx(1.0 / 64));
  for (double v : block.u.data()) CHECK(v == 0.0);

  // Refined child: half the spacing of its level.
  RefinementFlags flags;
  flags.tags[LogicalLocation(3, 1, 1, 1)] = RefinementTag::Refine;
  auto fine_tree = tree.update_tree(tree.enforce_proper_nesting(flags), 0, 10).first;
  auto fine = allocate_block(cfg, fine_tree, LogicalLocation(4, 2, 2, 2));
  CHECK(fine.dx[0] == doctest::Approx(0.5 / 64));
  CHECK(fine.origin[0] == doctest::Approx(2 * 8 * fine.dx[0]));
}

TEST_CASE("restrict_cells") {
  SUBCASE("2D group mean") {
    const double vals[4] = {1, 2, 3, 4};
    CHECK(restrict_cells(std::span<const double>(vals, 4)) == doctest::Approx(2.5));
  }
  SUBCASE("constant group is exact") {
    const double vals[8] = {7.5, 7.5, 7.5, 7.5, 7.5, 7.5, 7.5, 7.5};
    CHECK(restrict_cells(std::span<const double>(vals, 8)) == 7.5);
  }
  SUBCASE("fine means of a linear field give the coarse mean") {
    // f(x) = x over coarse cell [0,1] x [0,1]: fine-cell means are the center
    // values; analytic coarse mean is 1/2.
    const double vals[4] = {0.25, 0.75, 0.25, 0.75};
    CHECK(restrict_cells(std::span<const double>(vals, 4)) == doctest::Approx(0.5));
  }
}

TEST_CASE("prolong_cells") {
  SUBCASE("constant neighborhood") {
    const double lo[3] = {4, 4, 4}, hi[3] = {4, 4, 4};
    auto kids = prolong_cells(4.0, lo, hi, 3);
    for (int ci = 0; ci < 8; ++ci) CHECK(kids[ci] == 4.0);
  }
  SUBCASE("1D ramp slope") {
    const double lo[1] = {1.0}, hi[1] = {3.0};
    auto kids = prolong_cells(2.0, lo, hi, 1);
    CHECK(kids[0] == doctest::Approx(1.75));
    CHECK(kids[1] == doctest::Approx(2.25));
  }
  SUBCASE("local extremum flattens") {
    const double lo[1] = {1.0}, hi[1] = {1.0};
    auto kids = prolong_cells(3.0, lo, hi, 1);
    CHECK(kids[0] == 3.0);
    CHECK(kids[1] == 3.0);
  }
  SUBCASE("children mean preserves the coarse value exactly") {
    const double lo[3] = {0.3, -2.0, 5.5}, hi[3] = {1.9, -0.5, 6.0};
    for (int dim : {2, 3}) {
      auto kids = prolong_cells(1.25, lo, hi, dim);
      double sum = 0.0;
      for (int ci = 0; ci < (1 << dim); ++ci) sum += kids[ci];
      CHECK(sum / (1 << dim) == doctest::Approx(1.25).epsilon(1e-15));
      CHECK(sum == doctest::Approx((1 << dim) * 1.25).epsilon(1e-15));
    }
  }
  SUBCASE("globally linear field reproduces exact fine means") {
    // f(x,y) = 2x - y on unit-spaced coarse cells centered at the origin cell.
    auto f = [](double x, double y) { return 2 * x - y; };
    const double lo[2] = {f(-1, 0), f(0, -1)};
    const double hi[2] = {f(1, 0), f(0, 1)};
    auto kids = prolong_cells(f(0, 0), lo, hi, 2);
    CHECK(kids[0] == doctest::Approx(f(-0.25, -0.25)));
    CHECK(kids[1] == doctest::Approx(f(0.25, -0.25)));
    CHECK(kids[2] == doctest::Approx(f(-0.25, 0.25)));
    CHECK(kids[3] == doctest::Approx(f(0.25, 0.25)));
  }
}

TEST_CASE("calculate_derived") {
  ProblemConfig cfg = small_config(3, 32, 8);
  cfg.num_scalar = 2;
  auto tree = tree_for(cfg);
  auto block = allocate_block(cfg, tree, LogicalLocation(2, 0, 0, 0));

  auto fill = [&](std::array<double, 3> u, double q0) {
    for (int v = 0; v < 3; ++v) {
      for (auto &x : std::span(block.u.var(v), block.u.values_per_var())) x = u[v];
    }
    for (auto &x : std::span(block.u.var(3), block.u.values_per_var())) x = q0;
  };

  fill({2, 0, 0}, 3.0);
  calculate_derived(block);
  for (double d : block.derived) CHECK(d == doctest::Approx(6.0));

  fill({0, 0, 0}, 5.0);
  calculate_derived(block);
  for (double d : block.derived) CHECK(d == 0.0);

  fill({1, 1, 1}, 2.0);
  calculate_derived(block);
  for (double d : block.derived) CHECK(d == doctest::Approx(3.0));

  // Idempotent: recomputation does not drift.
  auto snapshot = block.derived;
  calculate_derived(block);
  CHECK(block.derived == snapshot);
}

TEST_CASE("init_conditions profiles") {
  SUBCASE("constant amplitude zero gives the all-zero state") {
    ProblemConfig cfg = small_config(2, 32, 16);
    cfg.profile.name = "constant";
    cfg.profile.amplitude = 0.0;
    cfg.profile.scalar_amplitude = 0.0;
    auto tree = tree_for(cfg);
    auto block = allocate_block(cfg, tree, LogicalLocation(1, 0, 0, 0));
    init_conditions(block, cfg);
    for (double v : block.u.data()) CHECK(v == 0.0);
  }

  SUBCASE("sine matches the closed form at cell centers") {
    ProblemConfig cfg = small_config(2, 32, 32);
    cfg.profile.name = "sine";
    cfg.profile.amplitude = 1.0;
    cfg.profile.background = 0.0;
    auto tree = tree_for(cfg);
    auto block = allocate_block(cfg, tree, LogicalLocation(0, 0, 0, 0));
    init_conditions(block, cfg);
    for (int i = 0; i < 32; ++i) {
      const double x = (i + 0.5) / 32.0;
      CHECK(block.u.at(0, i + cfg.ng, cfg.ng, 0) ==
            doctest::Approx(std::sin(2 * M_PI * x)).epsilon(1e-15));
    }
  }

  SUBCASE("gaussian total matches a uniform sampling oracle") {
    ProblemConfig cfg = small_config(2, 32, 16);
    cfg.num_scalar = 2;
    cfg.profile.name = "gaussian";
    cfg.profile.width = 0.15;
    auto tree = tree_for(cfg);

    double block_total = 0.0;
    for (const auto &loc : tree.morton_order()) {
      auto block = allocate_block(cfg, tree, loc);
      init_conditions(block, cfg);
      for (int j = 0; j < 16; ++j) {
        for (int i = 0; i < 16; ++i) {
          block_total += block.u.at(2, i + cfg.ng, j + cfg.ng, 0); // q0
        }
      }
    }

    double oracle_total = 0.0;
    for (int j = 0; j < 32; ++j) {
      for (int i = 0; i < 32; ++i) {
        const double x = (i + 0.5) / 32.0, y = (j + 0.5) / 32.0;
        const double dx0 = x - 0.5, dy0 = y - 0.5;
        oracle_total += 1.0 + std::exp(-(dx0 * dx0 + dy0 * dy0) / (2 * 0.15 * 0.15));
      }
    }
    CHECK(block_total == doctest::Approx(oracle_total).epsilon(1e-12));
  }

  SUBCASE("unknown profile is rejected") {
    ProblemConfig cfg = small_config(2, 32, 16);
    cfg.profile.name = "vortex";
    auto tree = tree_for(cfg);
    auto block = allocate_block(cfg, tree, LogicalLocation(1, 0, 0, 0));
    CHECK_THROWS_AS(init_conditions(block, cfg), Error);
  }
}
