#ifndef AMRBENCH_EXCHANGE_HPP_
#define AMRBENCH_EXCHANGE_HPP_
//! \file exchange.hpp
//! \brief In-process ghost-cell communication: buffer scheduling, packing with
//!  restriction before fine-to-coarse sends, delivery with local/remote
//!  accounting, ghost filling with receiver-side prolongation, and coarse-fine
//!  flux correction.
//!
//! Conventions. A schedule entry moves one (sender, receiver, offset) region;
//! `offset` points from sender to receiver. Same-level payloads copy interior
//! cells into the receiver's ghost band. Fine-to-coarse payloads are restricted
//! before packing and land in the receiver's ghost band. Coarse-to-fine
//! payloads land in the receiver's coarse scratch array (interior = nx1/2
//! cells, ghost width ng/2 + 1, the +1 being slope slop); set_bounds then
//! restricts the receiver's own data into the scratch and prolongs scratch
//! cells into the fine ghost bands facing coarser neighbors.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mesh_block.hpp"
#include "mesh_tree.hpp"
#include "metrics.hpp"
#include "problem_config.hpp"
#include "worker_pool.hpp"

namespace amrbench {

//! Per-dimension [begin, end) cell box in a block-local frame.
struct Region {
  std::array<int, 3> begin = {0, 0, 0};
  std::array<int, 3> end = {1, 1, 1};
  std::size_t cell_count() const {
    std::size_t n = 1;
    for (int d = 0; d < 3; ++d) n *= static_cast<std::size_t>(end[d] - begin[d]);
    return n;
  }
};

enum class TransferKind { SameLevel, FineToCoarse, CoarseToFine };

struct ScheduleEntry {
  int sender = 0;   // Morton block index
  int receiver = 0; // Morton block index
  LogicalLocation sender_loc;
  LogicalLocation receiver_loc;
  std::array<int, 3> offset = {0, 0, 0}; // sender -> receiver
  int level_delta = 0;                   // receiver level minus sender level
  TransferKind kind = TransferKind::SameLevel;
  bool restricted = false; // fine sender coarsens before packing
  bool remote = false;     // sender owner != receiver owner
  Region src; // sender u frame (fine cells for FineToCoarse, pre-restriction)
  Region dst; // receiver u frame; coarse-scratch frame for CoarseToFine
};

struct BoundaryBuffer {
  std::vector<double> payload; // nvar * dst cells, dst-region order
  bool delivered = false;
};

struct BufferSchedule {
  std::vector<ScheduleEntry> entries;
  std::vector<std::vector<int>> entries_by_receiver; // block idx -> entry ids
  //! Ghost bands with no source (non-periodic domain boundary), filled by
  //! zero-gradient clamp after delivery: per block, packed offset ids.
  std::vector<std::vector<int>> open_boundary_offsets;
  std::uint64_t local_cells = 0;  // payload cells with sender owner == receiver owner
  std::uint64_t remote_cells = 0; // payload cells crossing partition owners
  int nvar = 0;
};

using BlockList = std::vector<std::unique_ptr<MeshBlock>>;

//! One entry per ordered neighbor pair per touching offset, deterministically
//! ordered by (sender Morton index, offset, receiver). Allocates coarse
//! scratch arrays on blocks that face a coarser neighbor.
BufferSchedule build_buffer_schedule(const MeshTree &tree, const ProblemConfig &config,
                                     BlockList &blocks);

//! Fill payloads (restricting fine-to-coarse ones) and account the traffic.
//! Throws ScheduleMismatch when the schedule does not match `blocks`.
std::vector<BoundaryBuffer> pack_send(const BlockList &blocks, const BufferSchedule &schedule,
                                      CommCounters &counters, WorkerPool &pool);
//! In-place variant reusing previously allocated payload storage.
void pack_send_into(const BlockList &blocks, const BufferSchedule &schedule,
                    std::vector<BoundaryBuffer> &buffers, CommCounters &counters,
                    WorkerPool &pool);

//! Delivery barrier: remote payloads pass through a staging copy, local ones
//! are marked delivered in place.
void receive_buffers(const BufferSchedule &schedule, std::vector<BoundaryBuffer> &buffers);

//! Move delivered payloads into ghost cells (prolonging coarse-to-fine ones)
//! and clamp open-boundary bands. Every ghost cell of every block is written.
//! Throws MissingBuffer on schedule/delivery mismatch.
void set_bounds(BlockList &blocks, const BufferSchedule &schedule,
                std::vector<BoundaryBuffer> &buffers, WorkerPool &pool);

//! Replace every coarse face flux under a fine neighbor with the mean of the
//! overlying fine face fluxes. Fine fluxes are untouched.
void flux_correction(BlockList &blocks, const BufferSchedule &schedule, WorkerPool &pool);

//! Offset id helpers shared with the schedule builder.
int offset_id(const std::array<int, 3> &offset);
std::array<int, 3> offset_from_id(int id);

} // namespace amrbench

#endif // AMRBENCH_EXCHANGE_HPP_
