//! \file driver.cpp

#include "driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "burgers.hpp"
#include "error.hpp"
#include "init_conditions.hpp"

namespace amrbench {

namespace {

std::array<std::int64_t, 3> block_cells(const ProblemConfig &config) {
  return {config.nx1, config.nx1, config.dim == 3 ? config.nx1 : 1};
}

MeshTree validated_base_tree(const ProblemConfig &config) {
  config.validate();
  return MeshTree::build_base_tree(config.mesh_cells, block_cells(config), config.dim,
                                   config.max_levels);
}

//! Fill one refined child's interior by minmod prolongation of its parent.
void prolong_child_from_parent(const ProblemConfig &config, const MeshBlock &parent,
                               MeshBlock &child) {
  const int dim = config.dim, n = config.nx1, g = config.ng;
  const int nc = n / 2;
  const int ci_child = child.loc.child_index_in_parent();

  std::array<int, 3> base; // parent interior origin of this child's quadrant
  for (int d = 0; d < 3; ++d) {
    base[d] = d < dim ? g + ((ci_child >> d) & 1) * nc : 0;
  }
  const int nk = dim == 3 ? nc : 1;
  for (int v = 0; v < parent.u.nvar(); ++v) {
    for (int pk = 0; pk < nk; ++pk) {
      for (int pj = 0; pj < nc; ++pj) {
        for (int pi = 0; pi < nc; ++pi) {
          const int i = base[0] + pi, j = base[1] + pj, k = base[2] + pk;
          const double center = parent.u.at(v, i, j, k);
          double lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
          lo[0] = parent.u.at(v, i - 1, j, k);
          hi[0] = parent.u.at(v, i + 1, j, k);
          lo[1] = parent.u.at(v, i, j - 1, k);
          hi[1] = parent.u.at(v, i, j + 1, k);
          if (dim == 3) {
            lo[2] = parent.u.at(v, i, j, k - 1);
            hi[2] = parent.u.at(v, i, j, k + 1);
          }
          const auto kids = prolong_cells(center, {lo, 3}, {hi, 3}, dim);
          const int fi = g + 2 * pi, fj = g + 2 * pj, fk = dim == 3 ? g + 2 * pk : 0;
          for (int c = 0; c < (1 << dim); ++c) {
            child.u.at(v, fi + (c & 1), fj + ((c >> 1) & 1), fk + ((c >> 2) & 1)) = kids[c];
          }
        }
      }
    }
  }
}

//! Fill a coarsened parent's interior by restricting its four/eight children.
void restrict_parent_from_children(const ProblemConfig &config,
                                   const std::vector<const MeshBlock *> &children,
                                   MeshBlock &parent) {
  const int dim = config.dim, n = config.nx1, g = config.ng;
  const int nc = n / 2;
  for (const MeshBlock *child : children) {
    const int ci_child = child->loc.child_index_in_parent();
    std::array<int, 3> base;
    for (int d = 0; d < 3; ++d) base[d] = d < dim ? g + ((ci_child >> d) & 1) * nc : 0;
    const int nk = dim == 3 ? nc : 1;
    for (int v = 0; v < parent.u.nvar(); ++v) {
      for (int pk = 0; pk < nk; ++pk) {
        for (int pj = 0; pj < nc; ++pj) {
          for (int pi = 0; pi < nc; ++pi) {
            const int fi = g + 2 * pi, fj = g + 2 * pj, fk = dim == 3 ? g + 2 * pk : 0;
            double sum = child->u.at(v, fi, fj, fk) + child->u.at(v, fi + 1, fj, fk) +
                         child->u.at(v, fi, fj + 1, fk) + child->u.at(v, fi + 1, fj + 1, fk);
            if (dim == 3) {
              sum += child->u.at(v, fi, fj, fk + 1) + child->u.at(v, fi + 1, fj, fk + 1) +
                     child->u.at(v, fi, fj + 1, fk + 1) + child->u.at(v, fi + 1, fj + 1, fk + 1);
            }
            parent.u.at(v, base[0] + pi, base[1] + pj, base[2] + pk) =
                sum / (dim == 3 ? 8.0 : 4.0);
          }
        }
      }
    }
  }
}

} // namespace

Driver::Driver(ProblemConfig config, RunControls controls)
    : config_(std::move(config)), controls_(std::move(controls)),
      tree_(validated_base_tree(config_)), pool_(controls_.workers) {
  if (controls_.num_partitions < 1) {
    fail(ErrorCode::ValidationError, "num_partitions must be >= 1");
  }
  if (controls_.workers < 1) fail(ErrorCode::ValidationError, "workers must be >= 1");
  tree_.set_periodic(config_.periodic);
  initial_conditions_and_refinement();
}

void Driver::initial_conditions_and_refinement() {
  for (const auto &loc : tree_.morton_order()) {
    blocks_.push_back(std::make_unique<MeshBlock>(allocate_block(config_, tree_, loc)));
    init_conditions(*blocks_.back(), config_);
  }
  RunMetrics scratch; // setup work is not part of the reported run
  repartition(scratch, true);

  const int passes =
      controls_.init_refine_passes < 0 ? config_.max_levels - 1 : controls_.init_refine_passes;
  for (int pass = 0; pass < passes; ++pass) {
    exchange_ghosts(scratch);
    RefinementFlags flags;
    std::vector<RefinementTag> tags(blocks_.size());
    pool_.parallel_for(blocks_.size(),
                       [&](std::size_t b) { tags[b] = tag_refinement(*blocks_[b], config_); });
    bool any = false;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      // Initial refinement only refines; coarsening starts from cycle 0.
      const bool refine = tags[b] == RefinementTag::Refine;
      flags.tags[blocks_[b]->loc] = refine ? RefinementTag::Refine : RefinementTag::None;
      any = any || refine;
    }
    if (!any) break;
    auto [next_tree, lineage] = tree_.update_tree(tree_.enforce_proper_nesting(flags), 0,
                                                  config_.derefine_gap);
    std::unordered_map<LogicalLocation, std::unique_ptr<MeshBlock>, LogicalLocationHash> old;
    for (auto &block : blocks_) old[block->loc] = std::move(block);
    blocks_.clear();
    tree_ = std::move(next_tree);
    for (const auto &entry : lineage) {
      if (entry.kind == LineageKind::Same) {
        blocks_.push_back(std::move(old.at(entry.new_loc)));
      } else {
        // Fresh profile evaluation on the refined block: exact initial data.
        blocks_.push_back(
            std::make_unique<MeshBlock>(allocate_block(config_, tree_, entry.new_loc)));
        init_conditions(*blocks_.back(), config_);
      }
    }
    schedule_valid_ = false;
    repartition(scratch, true);
  }
}

void Driver::ensure_schedule() {
  if (!schedule_valid_) {
    schedule_ = build_buffer_schedule(tree_, config_, blocks_);
    buffers_.clear();
    buffers_.resize(schedule_.entries.size());
    schedule_valid_ = true;
  }
}

void Driver::exchange_ghosts(RunMetrics &metrics) {
  {
    PhaseTimer timer(metrics, Phase::SendBoundBufs);
    ensure_schedule();
    pack_send_into(blocks_, schedule_, buffers_, metrics.counters, pool_);
  }
  {
    PhaseTimer timer(metrics, Phase::ReceiveBoundBufs);
    receive_buffers(schedule_, buffers_);
  }
  {
    PhaseTimer timer(metrics, Phase::SetBounds);
    set_bounds(blocks_, schedule_, buffers_, pool_);
  }
}

std::uint64_t Driver::interior_cells_per_block() const {
  std::uint64_t cells = 1;
  for (int d = 0; d < config_.dim; ++d) cells *= static_cast<std::uint64_t>(config_.nx1);
  return cells;
}

double Driver::estimate_timestep_phase(RunMetrics &metrics) {
  PhaseTimer timer(metrics, Phase::EstimateTimestep);
  std::vector<const MeshBlock *> ptrs;
  ptrs.reserve(blocks_.size());
  for (const auto &block : blocks_) ptrs.push_back(block.get());
  return estimate_timestep(ptrs, config_.cfl, config_.dt_max);
}

void Driver::step(double dt, RunMetrics &metrics) {
  for (int stage = 0; stage < 2; ++stage) {
    exchange_ghosts(metrics);
    {
      PhaseTimer timer(metrics, Phase::CalculateFluxes);
      pool_.parallel_for(blocks_.size(), [&](std::size_t b) { calculate_fluxes(*blocks_[b]); });
    }
    if (controls_.flux_correction_enabled) {
      PhaseTimer timer(metrics, Phase::FluxCorrection);
      flux_correction(blocks_, schedule_, pool_);
    }
    {
      PhaseTimer timer(metrics, Phase::FluxDivergence);
      pool_.parallel_for(blocks_.size(), [&](std::size_t b) { flux_divergence(*blocks_[b]); });
    }
    {
      PhaseTimer timer(metrics, Phase::WeightedSumData);
      pool_.parallel_for(blocks_.size(), [&](std::size_t b) {
        MeshBlock &block = *blocks_[b];
        if (stage == 0) {
          weighted_sum_into(block.u0, 1.0, block.u, 0.0, block.u);  // save U^n
          weighted_sum_into(block.u, 1.0, block.u0, dt, block.rhs); // U1 = U0 + dt L(U0)
        } else {
          weighted_sum_into(block.u, 1.0, block.u, dt, block.rhs); // U1 + dt L(U1)
          weighted_sum_into(block.u, 0.5, block.u0, 0.5, block.u); // Heun average
        }
      });
    }
    {
      PhaseTimer timer(metrics, Phase::FillDerived);
      pool_.parallel_for(blocks_.size(), [&](std::size_t b) { calculate_derived(*blocks_[b]); });
    }
    metrics.counters.cell_updates += interior_cells_per_block() * blocks_.size();
  }
}

void Driver::repartition(RunMetrics &metrics, bool lineage_changed) {
  PhaseTimer timer(metrics, Phase::RedistributeAndRefineMeshBlocks);
  std::vector<LogicalLocation> order;
  std::vector<double> costs;
  order.reserve(blocks_.size());
  for (const auto &block : blocks_) {
    order.push_back(block->loc);
    costs.push_back(block->cost);
  }
  const auto owners = assign_partitions(order, costs, controls_.num_partitions);
  bool owners_changed = false;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b]->owner != owners[b]) owners_changed = true;
    blocks_[b]->owner = owners[b];
    tree_.set_owner(order[b], owners[b]);
  }
  if (lineage_changed || owners_changed) schedule_valid_ = false;
  ensure_schedule();
}

void Driver::load_balancing_and_amr(std::int64_t cycle, RunMetrics &metrics) {
  // Tags read one ghost layer, so refresh boundaries after the step.
  exchange_ghosts(metrics);

  std::vector<RefinementTag> tags(blocks_.size());
  {
    PhaseTimer timer(metrics, Phase::RefinementTag);
    pool_.parallel_for(blocks_.size(),
                       [&](std::size_t b) { tags[b] = tag_refinement(*blocks_[b], config_); });
  }

  BlockLineage lineage;
  {
    PhaseTimer timer(metrics, Phase::UpdateMeshBlockTree);
    RefinementFlags flags;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      flags.tags[blocks_[b]->loc] = tags[b];
      flags.last_derefine_cycle[blocks_[b]->loc] = blocks_[b]->last_derefine_cycle;
    }
    auto enforced = tree_.enforce_proper_nesting(flags);
    enforced.last_derefine_cycle = std::move(flags.last_derefine_cycle);
    auto [next_tree, next_lineage] = tree_.update_tree(enforced, cycle, config_.derefine_gap);
    tree_ = std::move(next_tree);
    lineage = std::move(next_lineage);
  }

  bool lineage_changed = false;
  for (const auto &entry : lineage) {
    if (entry.kind != LineageKind::Same) {
      lineage_changed = true;
      break;
    }
  }

  if (lineage_changed) {
    PhaseTimer timer(metrics, Phase::ProlongRestrLoop);
    std::unordered_map<LogicalLocation, std::unique_ptr<MeshBlock>, LogicalLocationHash> old;
    for (auto &block : blocks_) old[block->loc] = std::move(block);
    BlockList next;
    next.reserve(lineage.size());
    for (const auto &entry : lineage) {
      if (entry.kind == LineageKind::Same) {
        next.push_back(std::move(old.at(entry.new_loc)));
        continue;
      }
      auto block = std::make_unique<MeshBlock>(allocate_block(config_, tree_, entry.new_loc));
      if (entry.kind == LineageKind::RefinedFrom) {
        const MeshBlock &parent = *old.at(entry.old_locs[0]);
        prolong_child_from_parent(config_, parent, *block);
        block->last_derefine_cycle = parent.last_derefine_cycle;
        metrics.refined_blocks += 1;
      } else {
        std::vector<const MeshBlock *> children;
        std::int64_t newest = RefinementFlags::kNeverDerefined;
        for (const auto &child_loc : entry.old_locs) {
          const MeshBlock &child = *old.at(child_loc);
          children.push_back(&child);
          newest = std::max(newest, child.last_derefine_cycle);
        }
        restrict_parent_from_children(config_, children, *block);
        block->last_derefine_cycle = cycle;
        metrics.coarsened_blocks += 1;
        metrics.coarsen_events.push_back({cycle, entry.new_loc, newest});
      }
      calculate_derived(*block);
      next.push_back(std::move(block));
    }
    blocks_ = std::move(next);
    schedule_valid_ = false;
  }

  repartition(metrics, lineage_changed);
}

void Driver::check_finite(std::int64_t cycle) const {
  for (const auto &block : blocks_) {
    const int ng = block->ng;
    const int nk = block->active_cells(2);
    for (int v = 0; v < block->u.nvar(); ++v) {
      for (int k = 0; k < nk; ++k) {
        for (int j = 0; j < block->nx1; ++j) {
          for (int i = 0; i < block->nx1; ++i) {
            if (!std::isfinite(block->u.at(v, i + ng, j + ng, k + block->ghosts(2)))) {
              fail(ErrorCode::NumericalFailure,
                   "non-finite value at cycle " + std::to_string(cycle) + " block " +
                       block->loc.to_string() + " variable " + std::to_string(v));
            }
          }
        }
      }
    }
  }
}

RunMetrics Driver::run() {
  RunMetrics metrics;
  const auto start = std::chrono::steady_clock::now();

  std::int64_t cycle = 0;
  while (cycle < controls_.nlim && time_ < controls_.tlim) {
    double dt = estimate_timestep_phase(metrics);
    if (controls_.tlim < 1e29) dt = std::min(dt, controls_.tlim - time_);

    metrics.zone_cycles += interior_cells_per_block() * blocks_.size();
    metrics.blocks_processed_per_cycle.push_back(blocks_.size());

    step(dt, metrics);
    load_balancing_and_amr(cycle, metrics);

    metrics.counters.per_cycle.push_back({metrics.counters.cells_sent_local,
                                          metrics.counters.cells_sent_remote,
                                          metrics.counters.cell_updates});
    if (controls_.cycle_callback) controls_.cycle_callback(*this, cycle);
    time_ += dt;
    ++cycle;
    if (controls_.check_finite_every > 0 &&
        (cycle % controls_.check_finite_every == 0 || cycle == controls_.nlim)) {
      check_finite(cycle);
    }
  }

  metrics.cycles = static_cast<std::uint64_t>(cycle);
  metrics.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  metrics.final_state_checksum = state_checksum();
  return metrics;
}

std::uint64_t Driver::state_checksum() const {
  Checksum sum;
  for (const auto &block : blocks_) {
    sum.add_i64(block->loc.level);
    for (int d = 0; d < 3; ++d) sum.add_i64(block->loc.lx[d]);
    const int ng = block->ng;
    const int nk = block->active_cells(2);
    for (int v = 0; v < block->u.nvar(); ++v) {
      for (int k = 0; k < nk; ++k) {
        for (int j = 0; j < block->nx1; ++j) {
          for (int i = 0; i < block->nx1; ++i) {
            sum.add_double(block->u.at(v, i + ng, j + ng, k + block->ghosts(2)));
          }
        }
      }
    }
  }
  return sum.digest();
}

double Driver::total_scalar(int scalar_index) const {
  const int v = config_.dim + scalar_index;
  double total = 0.0, comp = 0.0;
  for (const auto &block : blocks_) {
    const double vol = block->cell_volume();
    const int ng = block->ng;
    const int nk = block->active_cells(2);
    for (int k = 0; k < nk; ++k) {
      for (int j = 0; j < block->nx1; ++j) {
        for (int i = 0; i < block->nx1; ++i) {
          const double term = block->u.at(v, i + ng, j + ng, k + block->ghosts(2)) * vol;
          const double t = total + term;
          comp += (std::fabs(total) >= std::fabs(term)) ? (total - t) + term : (term - t) + total;
          total = t;
        }
      }
    }
  }
  return total + comp;
}

} // namespace amrbench
