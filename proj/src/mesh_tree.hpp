#ifndef AMRBENCH_MESH_TREE_HPP_
#define AMRBENCH_MESH_TREE_HPP_
//! \file mesh_tree.hpp
//! \brief Tree-based mesh management: base-grid construction with empty
//!  leaves, refinement/derefinement flags with 2:1 proper nesting, neighbor
//!  discovery, Morton ordering, and cost-weighted partition assignment.
//!
//! The tree covers a 2^L x 2^L (x 2^L) logical cube at the base logical
//! level L; slots outside the physical block layout are kept as explicit
//! empty leaves. The physical level of a leaf is its logical level minus
//! the base logical level and must stay in [0, max_physical_levels).

#include <array>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "logical_location.hpp"

namespace amrbench {

enum class RefinementTag : std::int8_t { Derefine = -1, None = 0, Refine = 1 };

//! Per-leaf refinement requests plus the cycle at which each leaf was last
//! created by a derefinement (used for the derefinement-gap rule).
struct RefinementFlags {
  std::unordered_map<LogicalLocation, RefinementTag, LogicalLocationHash> tags;
  std::unordered_map<LogicalLocation, std::int64_t, LogicalLocationHash> last_derefine_cycle;

  RefinementTag tag_of(const LogicalLocation &loc) const {
    auto it = tags.find(loc);
    return it == tags.end() ? RefinementTag::None : it->second;
  }
  std::int64_t derefine_cycle_of(const LogicalLocation &loc) const {
    auto it = last_derefine_cycle.find(loc);
    return it == last_derefine_cycle.end() ? kNeverDerefined : it->second;
  }

  static constexpr std::int64_t kNeverDerefined = INT64_MIN / 2;
};

struct NeighborInfo {
  LogicalLocation neighbor_loc;
  int level_delta = 0;                  // neighbor level minus querying level
  std::array<int, 3> offset = {0, 0, 0}; // direction from querying block
  int owner_partition = 0;
  bool same_partition = true;
};

enum class LineageKind { Same, RefinedFrom, CoarsenedFrom };

struct LineageEntry {
  LogicalLocation new_loc;
  LineageKind kind = LineageKind::Same;
  // Same/RefinedFrom: one source leaf; CoarsenedFrom: the 2^dim consumed
  // children in z-order.
  std::vector<LogicalLocation> old_locs;
};

using BlockLineage = std::vector<LineageEntry>;

class MeshTree {
 public:
  //! Build the base tree. Every mesh_cells entry must be a positive exact
  //! multiple of the matching block_cells entry; throws NonMultipleMesh or
  //! BadDimension otherwise.
  static MeshTree build_base_tree(const std::array<std::int64_t, 3> &mesh_cells,
                                  const std::array<std::int64_t, 3> &block_cells, int dim,
                                  int max_levels);

  int dim() const { return dim_; }
  int base_logical_level() const { return base_logical_level_; }
  int max_physical_levels() const { return max_physical_levels_; }
  const std::array<std::int64_t, 3> &base_layout() const { return layout_; }

  std::size_t num_leaves() const { return leaves_.size(); }
  std::size_t num_empty_leaves() const { return empty_.size(); }
  bool is_leaf(const LogicalLocation &loc) const { return leaves_.count(loc) > 0; }
  bool is_empty_leaf(const LogicalLocation &loc) const { return empty_.count(loc) > 0; }

  int physical_level(const LogicalLocation &loc) const { return loc.level - base_logical_level_; }
  //! Block slots spanning the physical domain in dimension d at `level`.
  std::int64_t physical_span(int level, int d) const {
    return layout_[d] << (level - base_logical_level_);
  }

  void set_periodic(const std::array<bool, 3> &periodic) { periodic_ = periodic; }
  const std::array<bool, 3> &periodic() const { return periodic_; }

  int owner_of(const LogicalLocation &loc) const {
    auto it = owners_.find(loc);
    return it == owners_.end() ? 0 : it->second;
  }
  void set_owner(const LogicalLocation &loc, int owner) { owners_[loc] = owner; }

  //! All non-empty leaves touching `loc` across any face, edge, or corner,
  //! with periodic wrap where enabled. A coarse neighbor appears once per
  //! touching offset; fine neighbors appear individually. Throws UnknownLeaf.
  std::vector<NeighborInfo> find_neighbors(const LogicalLocation &loc,
                                           const std::array<bool, 3> &periodic) const;
  std::vector<NeighborInfo> find_neighbors(const LogicalLocation &loc) const {
    return find_neighbors(loc, periodic_);
  }

  //! Adjust flags so that applying them keeps the tree properly nested:
  //! refinement ripples outward, derefinement is vetoed for incomplete
  //! sibling sets, at physical level 0, or where 2:1 would break, and
  //! refinement is vetoed at the finest allowed level.
  RefinementFlags enforce_proper_nesting(const RefinementFlags &flags) const;

  //! Apply enforced flags: Refine leaves split into 2^dim children; complete
  //! Derefine sibling sets whose members all satisfy
  //! cycle - last_derefine_cycle >= derefine_gap collapse into their parent.
  //! Returns the new tree and the leaf lineage in new-tree Morton order.
  std::pair<MeshTree, BlockLineage> update_tree(const RefinementFlags &flags, std::int64_t cycle,
                                                std::int64_t derefine_gap) const;

  //! Non-empty leaves in deterministic z-order (depth-first traversal order).
  std::vector<LogicalLocation> morton_order() const;

  //! Exhaustive pairwise adjacency scan; returns the number of touching
  //! leaf pairs whose levels differ by more than one.
  std::size_t two_to_one_violations() const;
  //! True when the non-empty leaves tile the physical domain exactly once.
  bool covers_domain_exactly() const;

  int max_leaf_level() const;

 private:
  MeshTree() = default;

  bool inside_physical_domain(const LogicalLocation &loc) const;

  int dim_ = 3;
  int base_logical_level_ = 0;
  int max_physical_levels_ = 1;
  std::array<std::int64_t, 3> layout_ = {1, 1, 1};
  std::array<bool, 3> periodic_ = {true, true, true};
  std::unordered_set<LogicalLocation, LogicalLocationHash> leaves_;
  std::unordered_set<LogicalLocation, LogicalLocationHash> empty_;
  std::unordered_map<LogicalLocation, int, LogicalLocationHash> owners_;
};

//! Cut the Morton-ordered leaf list into `num_partitions` contiguous runs so
//! no partition exceeds ceil(total_cost / num_partitions) where feasible.
//! Returns the owning partition id per leaf index.
std::vector<int> assign_partitions(const std::vector<LogicalLocation> &ordered_leaves,
                                   const std::vector<double> &costs, int num_partitions);

} // namespace amrbench

#endif // AMRBENCH_MESH_TREE_HPP_
