//! \file mesh_tree.cpp
//! \brief MeshTree construction, neighbor discovery, nesting enforcement,
//!  tree updates, Morton ordering, and partition assignment.

#include "mesh_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "error.hpp"

namespace amrbench {

namespace {

int ceil_log2(std::int64_t n) {
  int lvl = 0;
  while ((std::int64_t{1} << lvl) < n) ++lvl;
  return lvl;
}

//! Enumerate the 3^dim - 1 nonzero offsets in a fixed deterministic order.
std::vector<std::array<int, 3>> all_offsets(int dim) {
  std::vector<std::array<int, 3>> out;
  const int zmax = (dim == 3) ? 1 : 0;
  for (int oz = -zmax; oz <= zmax; ++oz) {
    for (int oy = -1; oy <= 1; ++oy) {
      for (int ox = -1; ox <= 1; ++ox) {
        if (ox == 0 && oy == 0 && oz == 0) continue;
        out.push_back({ox, oy, oz});
      }
    }
  }
  return out;
}

} // namespace

MeshTree MeshTree::build_base_tree(const std::array<std::int64_t, 3> &mesh_cells,
                                   const std::array<std::int64_t, 3> &block_cells, int dim,
                                   int max_levels) {
  if (dim != 2 && dim != 3) fail(ErrorCode::BadDimension, "dim must be 2 or 3");
  if (max_levels < 1) fail(ErrorCode::BadDimension, "max_levels must be >= 1");

  MeshTree tree;
  tree.dim_ = dim;
  tree.max_physical_levels_ = max_levels;
  std::int64_t max_layout = 1;
  for (int d = 0; d < dim; ++d) {
    if (mesh_cells[d] <= 0 || block_cells[d] <= 0) {
      fail(ErrorCode::BadDimension, "mesh and block cell counts must be positive");
    }
    if (mesh_cells[d] % block_cells[d] != 0) {
      fail(ErrorCode::NonMultipleMesh, "mesh size " + std::to_string(mesh_cells[d]) +
                                           " is not a multiple of block size " +
                                           std::to_string(block_cells[d]) + " in dimension " +
                                           std::to_string(d));
    }
    tree.layout_[d] = mesh_cells[d] / block_cells[d];
    max_layout = std::max(max_layout, tree.layout_[d]);
  }
  for (int d = dim; d < 3; ++d) tree.layout_[d] = 1;

  tree.base_logical_level_ = ceil_log2(max_layout);
  const std::int64_t slots = std::int64_t{1} << tree.base_logical_level_;
  const std::int64_t slots_z = (dim == 3) ? slots : 1;
  for (std::int64_t k = 0; k < slots_z; ++k) {
    for (std::int64_t j = 0; j < slots; ++j) {
      for (std::int64_t i = 0; i < slots; ++i) {
        LogicalLocation loc(tree.base_logical_level_, i, j, k);
        const bool inside = i < tree.layout_[0] && j < tree.layout_[1] && k < tree.layout_[2];
        if (inside) {
          tree.leaves_.insert(loc);
        } else {
          tree.empty_.insert(loc);
        }
      }
    }
  }
  return tree;
}

bool MeshTree::inside_physical_domain(const LogicalLocation &loc) const {
  for (int d = 0; d < dim_; ++d) {
    if (loc.lx[d] < 0 || loc.lx[d] >= physical_span(loc.level, d)) return false;
  }
  return true;
}

std::vector<NeighborInfo> MeshTree::find_neighbors(const LogicalLocation &loc,
                                                   const std::array<bool, 3> &periodic) const {
  if (!is_leaf(loc)) fail(ErrorCode::UnknownLeaf, "find_neighbors: not a leaf " + loc.to_string());

  const int my_owner = owner_of(loc);
  std::vector<NeighborInfo> out;
  for (const auto &off : all_offsets(dim_)) {
    LogicalLocation cand(loc.level, 0, 0, 0);
    bool valid = true;
    for (int d = 0; d < dim_ && valid; ++d) {
      std::int64_t c = loc.lx[d] + off[d];
      const std::int64_t span = physical_span(loc.level, d);
      if (c < 0 || c >= span) {
        if (periodic[d]) {
          c = ((c % span) + span) % span;
        } else {
          valid = false;
        }
      }
      cand.lx[d] = c;
    }
    if (!valid) continue;

    auto emit = [&](const LogicalLocation &nloc, int delta) {
      NeighborInfo info;
      info.neighbor_loc = nloc;
      info.level_delta = delta;
      info.offset = off;
      info.owner_partition = owner_of(nloc);
      info.same_partition = info.owner_partition == my_owner;
      out.push_back(info);
    };

    if (is_leaf(cand)) {
      emit(cand, 0);
      continue;
    }
    const LogicalLocation up = cand.parent();
    if (loc.level > base_logical_level_ && is_leaf(up)) {
      emit(up, -1);
      continue;
    }
    // The candidate slot is refined; collect its children touching loc.
    bool found = false;
    for (int ci = 0; ci < (1 << dim_); ++ci) {
      bool touches = true;
      for (int d = 0; d < dim_ && touches; ++d) {
        const int bit = (ci >> d) & 1;
        if (off[d] == 1 && bit != 0) touches = false;
        if (off[d] == -1 && bit != 1) touches = false;
      }
      if (!touches) continue;
      const LogicalLocation child = cand.child(ci);
      if (is_leaf(child)) {
        emit(child, +1);
        found = true;
      }
    }
    if (!found && !is_empty_leaf(cand)) {
      fail(ErrorCode::UnknownLeaf, "neighbor slot neither leaf nor properly refined at " +
                                       cand.to_string() + " (2:1 violated?)");
    }
  }
  return out;
}

RefinementFlags MeshTree::enforce_proper_nesting(const RefinementFlags &flags) const {
  RefinementFlags result = flags;
  for (const auto &loc : leaves_) {
    if (result.tags.find(loc) == result.tags.end()) result.tags[loc] = RefinementTag::None;
  }

  // Level caps.
  for (auto &[loc, tag] : result.tags) {
    const int plev = physical_level(loc);
    if (tag == RefinementTag::Refine && plev >= max_physical_levels_ - 1) {
      tag = RefinementTag::None;
    }
    if (tag == RefinementTag::Derefine && plev == 0) tag = RefinementTag::None;
  }

  // Neighbor lists are stable across iterations; build once.
  std::vector<LogicalLocation> order;
  order.reserve(leaves_.size());
  for (const auto &loc : leaves_) order.push_back(loc);
  std::sort(order.begin(), order.end());
  std::unordered_map<LogicalLocation, std::vector<NeighborInfo>, LogicalLocationHash> nbrs;
  for (const auto &loc : order) nbrs[loc] = find_neighbors(loc, periodic_);

  auto intended = [&](const LogicalLocation &loc) {
    return loc.level + static_cast<int>(result.tag_of(loc));
  };

  // Every adjustment below raises some leaf's intended level, so iterating
  // to a fixed point terminates.
  bool changed = true;
  while (changed) {
    changed = false;

    // Sibling completeness: every child of the parent must be a leaf tagged
    // Derefine, otherwise the whole set is vetoed.
    for (const auto &loc : order) {
      if (result.tag_of(loc) != RefinementTag::Derefine) continue;
      const LogicalLocation parent = loc.parent();
      bool complete = true;
      for (int ci = 0; ci < (1 << dim_) && complete; ++ci) {
        const LogicalLocation sib = parent.child(ci);
        if (!is_leaf(sib) || result.tag_of(sib) != RefinementTag::Derefine) complete = false;
      }
      if (!complete) {
        result.tags[loc] = RefinementTag::None;
        changed = true;
      }
    }

    for (const auto &loc : order) {
      const auto tag = result.tag_of(loc);
      for (const auto &nb : nbrs[loc]) {
        const int t_nb = intended(nb.neighbor_loc);
        if (t_nb >= loc.level + 2 && tag != RefinementTag::Refine) {
          result.tags[loc] = RefinementTag::Refine;
          changed = true;
          break;
        }
        if (tag == RefinementTag::Derefine && t_nb >= loc.level + 1) {
          result.tags[loc] = RefinementTag::None;
          changed = true;
          break;
        }
      }
    }
  }
  return result;
}

std::pair<MeshTree, BlockLineage> MeshTree::update_tree(const RefinementFlags &flags,
                                                        std::int64_t cycle,
                                                        std::int64_t derefine_gap) const {
  RefinementFlags eff = flags;

  // Suppress derefinement where any sibling was itself created by a
  // derefinement fewer than derefine_gap cycles ago, then cascade the veto:
  // a suppressed set may strand a neighboring set two levels apart.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto &loc : leaves_) {
      if (eff.tag_of(loc) != RefinementTag::Derefine) continue;
      const LogicalLocation parent = loc.parent();
      bool allowed = true;
      for (int ci = 0; ci < (1 << dim_) && allowed; ++ci) {
        const LogicalLocation sib = parent.child(ci);
        if (!is_leaf(sib) || eff.tag_of(sib) != RefinementTag::Derefine) {
          allowed = false; // incomplete set (possibly after a veto below)
        } else if (cycle - eff.derefine_cycle_of(sib) < derefine_gap) {
          allowed = false;
        }
      }
      if (!allowed) {
        eff.tags[loc] = RefinementTag::None;
        changed = true;
      }
    }
    auto intended = [&](const LogicalLocation &loc) {
      return loc.level + static_cast<int>(eff.tag_of(loc));
    };
    for (const auto &loc : leaves_) {
      if (eff.tag_of(loc) != RefinementTag::Derefine) continue;
      for (const auto &nb : find_neighbors(loc, periodic_)) {
        if (intended(nb.neighbor_loc) >= loc.level + 1) {
          eff.tags[loc] = RefinementTag::None;
          changed = true;
          break;
        }
      }
    }
  }

  MeshTree next;
  next.dim_ = dim_;
  next.base_logical_level_ = base_logical_level_;
  next.max_physical_levels_ = max_physical_levels_;
  next.layout_ = layout_;
  next.periodic_ = periodic_;
  next.empty_ = empty_;

  std::unordered_map<LogicalLocation, LineageEntry, LogicalLocationHash> lineage_by_loc;
  std::unordered_set<LogicalLocation, LogicalLocationHash> coarsened_parents;

  for (const auto &loc : leaves_) {
    const auto tag = eff.tag_of(loc);
    if (tag == RefinementTag::Refine) {
      for (int ci = 0; ci < (1 << dim_); ++ci) {
        const LogicalLocation child = loc.child(ci);
        next.leaves_.insert(child);
        lineage_by_loc[child] = {child, LineageKind::RefinedFrom, {loc}};
      }
    } else if (tag == RefinementTag::Derefine) {
      const LogicalLocation parent = loc.parent();
      if (coarsened_parents.insert(parent).second) {
        next.leaves_.insert(parent);
        LineageEntry entry{parent, LineageKind::CoarsenedFrom, {}};
        for (int ci = 0; ci < (1 << dim_); ++ci) entry.old_locs.push_back(parent.child(ci));
        lineage_by_loc[parent] = std::move(entry);
      }
    } else {
      next.leaves_.insert(loc);
      lineage_by_loc[loc] = {loc, LineageKind::Same, {loc}};
    }
  }

  for (const auto &[loc, owner] : owners_) {
    if (next.is_leaf(loc)) next.owners_[loc] = owner;
  }

  BlockLineage lineage;
  lineage.reserve(next.leaves_.size());
  for (const auto &loc : next.morton_order()) lineage.push_back(std::move(lineage_by_loc[loc]));
  return {std::move(next), std::move(lineage)};
}

std::vector<LogicalLocation> MeshTree::morton_order() const {
  const int top = max_leaf_level();
  std::vector<LogicalLocation> order(leaves_.begin(), leaves_.end());
  std::sort(order.begin(), order.end(), [&](const LogicalLocation &a, const LogicalLocation &b) {
    return a.morton_key(top, dim_) < b.morton_key(top, dim_);
  });
  return order;
}

int MeshTree::max_leaf_level() const {
  int top = base_logical_level_;
  for (const auto &loc : leaves_) top = std::max(top, static_cast<int>(loc.level));
  return top;
}

std::size_t MeshTree::two_to_one_violations() const {
  const int top = max_leaf_level();
  struct Box {
    LogicalLocation loc;
    std::array<std::int64_t, 3> lo, hi; // closed cell ranges at level `top`
  };
  std::vector<Box> boxes;
  boxes.reserve(leaves_.size());
  for (const auto &loc : leaves_) {
    Box b;
    b.loc = loc;
    const int shift = top - loc.level;
    for (int d = 0; d < 3; ++d) {
      b.lo[d] = loc.lx[d] << shift;
      b.hi[d] = ((loc.lx[d] + 1) << shift); // exclusive; touch test uses closure
    }
    boxes.push_back(b);
  }

  std::size_t violations = 0;
  for (std::size_t a = 0; a < boxes.size(); ++a) {
    for (std::size_t b = a + 1; b < boxes.size(); ++b) {
      if (std::abs(boxes[a].loc.level - boxes[b].loc.level) <= 1) continue;
      bool touch = true;
      for (int d = 0; d < dim_ && touch; ++d) {
        const std::int64_t span = physical_span(top, d);
        bool dim_touch = false;
        for (int shift = -1; shift <= 1 && !dim_touch; ++shift) {
          if (shift != 0 && !periodic_[d]) continue;
          const std::int64_t lo = boxes[b].lo[d] + shift * span;
          const std::int64_t hi = boxes[b].hi[d] + shift * span;
          // Closed-interval intersection of [lo,hi] and [alo,ahi].
          if (std::max(lo, boxes[a].lo[d]) <= std::min(hi, boxes[a].hi[d])) dim_touch = true;
        }
        touch = dim_touch;
      }
      if (touch) ++violations;
    }
  }
  return violations;
}

bool MeshTree::covers_domain_exactly() const {
  const int top = max_leaf_level();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals; // [start, end)
  std::uint64_t covered = 0;
  for (const auto &loc : leaves_) {
    if (!inside_physical_domain(loc)) return false;
    const std::uint64_t start = loc.morton_key(top, dim_);
    const std::uint64_t len = std::uint64_t{1}
                              << (static_cast<std::uint64_t>(dim_) * (top - loc.level));
    intervals.emplace_back(start, start + len);
    covered += len;
  }
  std::sort(intervals.begin(), intervals.end());
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].first < intervals[i - 1].second) return false;
  }
  std::uint64_t domain = 1;
  for (int d = 0; d < dim_; ++d) domain *= static_cast<std::uint64_t>(physical_span(top, d));
  return covered == domain;
}

std::vector<int> assign_partitions(const std::vector<LogicalLocation> &ordered_leaves,
                                   const std::vector<double> &costs, int num_partitions) {
  if (num_partitions < 1) fail(ErrorCode::InvalidArgument, "num_partitions must be >= 1");
  if (ordered_leaves.size() != costs.size()) {
    fail(ErrorCode::InvalidArgument, "one cost per leaf required");
  }
  double total = 0.0;
  for (double c : costs) {
    if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "costs must be positive");
    total += c;
  }
  const double target = std::ceil(total / num_partitions);

  std::vector<int> owners(ordered_leaves.size(), 0);
  int part = 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < ordered_leaves.size(); ++i) {
    if (part < num_partitions - 1 && acc > 0.0 && acc + costs[i] > target) {
      ++part;
      acc = 0.0;
    }
    owners[i] = part;
    acc += costs[i];
  }
  return owners;
}

} // namespace amrbench
