//! \file exchange.cpp
//! \brief Schedule construction, packing, delivery, ghost fill, flux correction.

#include "exchange.hpp"

#include <algorithm>
#include <unordered_map>

#include "error.hpp"

namespace amrbench {

namespace {

bool active_dim(const ProblemConfig &config, int d) { return d < config.dim; }

//! Receiver u-frame ghost band for offset `toward` (block -> neighbor).
Region ghost_band(int dim, int n, int g, const std::array<int, 3> &toward) {
  Region band;
  for (int d = 0; d < 3; ++d) {
    if (d >= dim) {
      band.begin[d] = 0;
      band.end[d] = 1;
    } else if (toward[d] == 1) {
      band.begin[d] = g + n;
      band.end[d] = g + n + g;
    } else if (toward[d] == -1) {
      band.begin[d] = 0;
      band.end[d] = g;
    } else {
      band.begin[d] = g;
      band.end[d] = g + n;
    }
  }
  return band;
}

//! Coarse-scratch ghost band for offset `toward`; gc = ng/2 + 1 layers.
Region scratch_band(const ProblemConfig &config, const std::array<int, 3> &toward) {
  const int nc = config.nx1 / 2, gc = config.ng / 2 + 1;
  Region band;
  for (int d = 0; d < 3; ++d) {
    if (!active_dim(config, d)) {
      band.begin[d] = 0;
      band.end[d] = 1;
    } else if (toward[d] == 1) {
      band.begin[d] = gc + nc;
      band.end[d] = gc + nc + gc;
    } else if (toward[d] == -1) {
      band.begin[d] = 0;
      band.end[d] = gc;
    } else {
      band.begin[d] = gc;
      band.end[d] = gc + nc;
    }
  }
  return band;
}

template <typename Fn>
void for_each_cell(const Region &region, Fn fn) {
  for (int k = region.begin[2]; k < region.end[2]; ++k) {
    for (int j = region.begin[1]; j < region.end[1]; ++j) {
      for (int i = region.begin[0]; i < region.end[0]; ++i) fn(i, j, k);
    }
  }
}

ScheduleEntry make_entry(const MeshTree &tree, const ProblemConfig &config, int receiver_idx,
                         const MeshBlock &receiver, int sender_idx, const MeshBlock &sender,
                         const NeighborInfo &nb) {
  const int n = config.nx1, g = config.ng;
  const int nc = n / 2, gc = g / 2 + 1;
  const auto &o = nb.offset; // receiver -> sender

  ScheduleEntry entry;
  entry.sender = sender_idx;
  entry.receiver = receiver_idx;
  entry.sender_loc = sender.loc;
  entry.receiver_loc = receiver.loc;
  entry.offset = {-o[0], -o[1], -o[2]};
  entry.level_delta = -nb.level_delta;

  if (nb.level_delta == 0) {
    entry.kind = TransferKind::SameLevel;
    entry.dst = ghost_band(config.dim, config.nx1, config.ng, o);
    for (int d = 0; d < 3; ++d) {
      if (!active_dim(config, d)) {
        entry.src.begin[d] = 0;
        entry.src.end[d] = 1;
      } else if (o[d] == 1) { // sender sits on the + side: its low interior
        entry.src.begin[d] = g;
        entry.src.end[d] = 2 * g;
      } else if (o[d] == -1) {
        entry.src.begin[d] = n;
        entry.src.end[d] = n + g;
      } else {
        entry.src.begin[d] = g;
        entry.src.end[d] = g + n;
      }
    }
  } else if (nb.level_delta == 1) {
    // Finer sender: restrict 2 ng deep fine data into the receiver band.
    entry.kind = TransferKind::FineToCoarse;
    entry.restricted = true;
    const Region band = ghost_band(config.dim, config.nx1, config.ng, o);
    for (int d = 0; d < 3; ++d) {
      if (!active_dim(config, d)) {
        entry.src.begin[d] = entry.dst.begin[d] = 0;
        entry.src.end[d] = entry.dst.end[d] = 1;
        continue;
      }
      int cov_begin, cov_end;
      if (o[d] == 1) {
        cov_begin = g + n;
        cov_end = g + n + nc;
      } else if (o[d] == -1) {
        cov_begin = g - nc;
        cov_end = g;
      } else {
        const int half = static_cast<int>(sender.loc.lx[d] & 1);
        cov_begin = g + half * nc;
        cov_end = cov_begin + nc;
      }
      entry.dst.begin[d] = std::max(band.begin[d], cov_begin);
      entry.dst.end[d] = std::min(band.end[d], cov_end);
      entry.src.begin[d] = g + 2 * (entry.dst.begin[d] - cov_begin);
      entry.src.end[d] = g + 2 * (entry.dst.end[d] - cov_begin);
    }
  } else {
    // Coarser sender: ship the covering coarse region (slope slop included)
    // into the receiver's coarse scratch. The sender may straddle several of
    // the receiver's offsets, so its local source coordinates come from
    // global coarse-cell positions, wrapped over the periodic span.
    entry.kind = TransferKind::CoarseToFine;
    entry.dst = scratch_band(config, o);
    for (int d = 0; d < 3; ++d) {
      if (!active_dim(config, d)) {
        entry.src.begin[d] = 0;
        entry.src.end[d] = 1;
        continue;
      }
      std::int64_t global_begin = receiver.loc.lx[d] * (n / 2); // receiver's low edge
      if (o[d] == 1) {
        global_begin += nc;
      } else if (o[d] == -1) {
        global_begin -= gc;
      }
      const std::int64_t total = tree.physical_span(sender.loc.level, d) * n;
      std::int64_t local = global_begin - sender.loc.lx[d] * n;
      local = ((local % total) + total) % total;
      entry.src.begin[d] = static_cast<int>(local) + g;
      entry.src.end[d] = entry.src.begin[d] + (entry.dst.end[d] - entry.dst.begin[d]);
    }
  }
  return entry;
}

void ensure_coarse_scratch(const ProblemConfig &config, MeshBlock &block) {
  if (block.coarse.size() != 0) return;
  const int nc = config.nx1 / 2, gc = config.ng / 2 + 1;
  std::array<int, 3> shape;
  for (int d = 0; d < 3; ++d) shape[d] = active_dim(config, d) ? nc + 2 * gc : 1;
  block.coarse = BlockArray(config.nvar(), shape);
}

} // namespace

int offset_id(const std::array<int, 3> &offset) {
  return (offset[0] + 1) + 3 * (offset[1] + 1) + 9 * (offset[2] + 1);
}

std::array<int, 3> offset_from_id(int id) {
  return {id % 3 - 1, (id / 3) % 3 - 1, (id / 9) % 3 - 1};
}

BufferSchedule build_buffer_schedule(const MeshTree &tree, const ProblemConfig &config,
                                     BlockList &blocks) {
  const auto order = tree.morton_order();
  if (order.size() != blocks.size()) {
    fail(ErrorCode::ScheduleMismatch, "block list does not match the tree");
  }
  std::unordered_map<LogicalLocation, int, LogicalLocationHash> index;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (blocks[i]->loc != order[i]) {
      fail(ErrorCode::ScheduleMismatch, "block list is not in Morton order");
    }
    index[order[i]] = static_cast<int>(i);
  }

  BufferSchedule schedule;
  schedule.nvar = config.nvar();
  schedule.entries_by_receiver.resize(blocks.size());
  schedule.open_boundary_offsets.resize(blocks.size());

  for (std::size_t r = 0; r < blocks.size(); ++r) {
    MeshBlock &receiver = *blocks[r];
    std::array<bool, 27> covered{};
    for (const auto &nb : tree.find_neighbors(receiver.loc, config.periodic)) {
      covered[offset_id(nb.offset)] = true;
      const int s = index.at(nb.neighbor_loc);
      auto entry = make_entry(tree, config, static_cast<int>(r), receiver, s, *blocks[s], nb);
      entry.remote = blocks[s]->owner != receiver.owner;
      if (entry.kind == TransferKind::CoarseToFine) ensure_coarse_scratch(config, receiver);
      schedule.entries.push_back(std::move(entry));
    }
    for (int oz = config.dim == 3 ? -1 : 0; oz <= (config.dim == 3 ? 1 : 0); ++oz) {
      for (int oy = -1; oy <= 1; ++oy) {
        for (int ox = -1; ox <= 1; ++ox) {
          if (ox == 0 && oy == 0 && oz == 0) continue;
          const int id = offset_id({ox, oy, oz});
          if (!covered[id]) schedule.open_boundary_offsets[r].push_back(id);
        }
      }
    }
  }

  std::sort(schedule.entries.begin(), schedule.entries.end(),
            [](const ScheduleEntry &a, const ScheduleEntry &b) {
              if (a.sender != b.sender) return a.sender < b.sender;
              const int oa = offset_id(a.offset), ob = offset_id(b.offset);
              if (oa != ob) return oa < ob;
              return a.receiver < b.receiver;
            });

  for (std::size_t e = 0; e < schedule.entries.size(); ++e) {
    const auto &entry = schedule.entries[e];
    schedule.entries_by_receiver[entry.receiver].push_back(static_cast<int>(e));
    const std::uint64_t cells = entry.dst.cell_count();
    (entry.remote ? schedule.remote_cells : schedule.local_cells) += cells;
  }
  return schedule;
}

std::vector<BoundaryBuffer> pack_send(const BlockList &blocks, const BufferSchedule &schedule,
                                      CommCounters &counters, WorkerPool &pool) {
  std::vector<BoundaryBuffer> buffers;
  pack_send_into(blocks, schedule, buffers, counters, pool);
  return buffers;
}

void pack_send_into(const BlockList &blocks, const BufferSchedule &schedule,
                    std::vector<BoundaryBuffer> &buffers, CommCounters &counters,
                    WorkerPool &pool) {
  for (const auto &entry : schedule.entries) {
    if (entry.sender >= static_cast<int>(blocks.size()) ||
        blocks[entry.sender]->loc != entry.sender_loc ||
        blocks[entry.receiver]->loc != entry.receiver_loc) {
      fail(ErrorCode::ScheduleMismatch, "stale schedule: blocks changed since build");
    }
  }

  buffers.resize(schedule.entries.size());
  pool.parallel_for(schedule.entries.size(), [&](std::size_t e) {
    const ScheduleEntry &entry = schedule.entries[e];
    const MeshBlock &sender = *blocks[entry.sender];
    const int nvar = schedule.nvar;
    BoundaryBuffer &buf = buffers[e];
    buf.payload.resize(entry.dst.cell_count() * nvar); // keeps capacity on reuse
    buf.delivered = false;

    std::size_t at = 0;
    if (entry.kind == TransferKind::FineToCoarse) {
      const int dim = sender.dim;
      for (int v = 0; v < nvar; ++v) {
        for (int k = entry.dst.begin[2]; k < entry.dst.end[2]; ++k) {
          for (int j = entry.dst.begin[1]; j < entry.dst.end[1]; ++j) {
            for (int i = entry.dst.begin[0]; i < entry.dst.end[0]; ++i) {
              const int fi = entry.src.begin[0] + 2 * (i - entry.dst.begin[0]);
              const int fj = entry.src.begin[1] + 2 * (j - entry.dst.begin[1]);
              const int fk = dim == 3 ? entry.src.begin[2] + 2 * (k - entry.dst.begin[2]) : 0;
              double group[8];
              int c = 0;
              for (int bk = 0; bk <= (dim == 3 ? 1 : 0); ++bk) {
                for (int bj = 0; bj <= 1; ++bj) {
                  for (int bi = 0; bi <= 1; ++bi) {
                    group[c++] = sender.u.at(v, fi + bi, fj + bj, fk + bk);
                  }
                }
              }
              buf.payload[at++] = restrict_cells(std::span<const double>(group, c));
            }
          }
        }
      }
    } else {
      const auto &shape = sender.u.shape();
      const std::size_t sy = shape[0];
      const std::size_t sz = static_cast<std::size_t>(shape[0]) * shape[1];
      const std::size_t run = static_cast<std::size_t>(entry.src.end[0] - entry.src.begin[0]);
      for (int v = 0; v < nvar; ++v) {
        const double *var = sender.u.var(v);
        for (int k = entry.src.begin[2]; k < entry.src.end[2]; ++k) {
          for (int j = entry.src.begin[1]; j < entry.src.end[1]; ++j) {
            const double *row = var + k * sz + j * sy + entry.src.begin[0];
            std::copy(row, row + run, buf.payload.data() + at);
            at += run;
          }
        }
      }
    }
  });

  counters.cells_sent_local += schedule.local_cells;
  counters.cells_sent_remote += schedule.remote_cells;
}

void receive_buffers(const BufferSchedule &schedule, std::vector<BoundaryBuffer> &buffers) {
  if (buffers.size() != schedule.entries.size()) {
    fail(ErrorCode::MissingBuffer, "buffer list does not match the schedule");
  }
  for (std::size_t e = 0; e < buffers.size(); ++e) {
    if (schedule.entries[e].remote) {
      // Remote messages pass through a staging copy, as a rank boundary would.
      std::vector<double> staged(buffers[e].payload);
      buffers[e].payload.swap(staged);
    }
    buffers[e].delivered = true;
  }
}

namespace {

//! Restrict the receiver's own u data (interior plus filled ghost bands) into
//! the coarse scratch; depth ng/2 of scratch ghosts is reachable this way.
void restrict_into_scratch(MeshBlock &block) {
  const int dim = block.dim, n = block.nx1, g = block.ng;
  const int nc = n / 2, gc = g / 2 + 1;
  const int lo = gc - g / 2, hi = gc + nc + g / 2;
  const int klo = dim == 3 ? lo : 0, khi = dim == 3 ? hi : 1;
  for (int v = 0; v < block.u.nvar(); ++v) {
    for (int ck = klo; ck < khi; ++ck) {
      for (int cj = lo; cj < hi; ++cj) {
        for (int ci = lo; ci < hi; ++ci) {
          const int fi = 2 * (ci - gc) + g;
          const int fj = 2 * (cj - gc) + g;
          const int fk = dim == 3 ? 2 * (ck - gc) + g : 0;
          double sum = block.u.at(v, fi, fj, fk) + block.u.at(v, fi + 1, fj, fk) +
                       block.u.at(v, fi, fj + 1, fk) + block.u.at(v, fi + 1, fj + 1, fk);
          if (dim == 3) {
            sum += block.u.at(v, fi, fj, fk + 1) + block.u.at(v, fi + 1, fj, fk + 1) +
                   block.u.at(v, fi, fj + 1, fk + 1) + block.u.at(v, fi + 1, fj + 1, fk + 1);
          }
          block.coarse.at(v, ci, cj, ck) = sum / (dim == 3 ? 8.0 : 4.0);
        }
      }
    }
  }
}

//! Prolong the scratch band facing offset `toward` into the fine ghost band.
void prolong_band(MeshBlock &block, const std::array<int, 3> &toward) {
  const int dim = block.dim, n = block.nx1, g = block.ng;
  const int nc = n / 2, gc = g / 2 + 1;

  Region band; // scratch cells whose children lie in the fine ghost band
  for (int d = 0; d < 3; ++d) {
    if (d >= dim) {
      band.begin[d] = 0;
      band.end[d] = 1;
    } else if (toward[d] == 1) {
      band.begin[d] = gc + nc;
      band.end[d] = gc + nc + g / 2;
    } else if (toward[d] == -1) {
      band.begin[d] = gc - g / 2;
      band.end[d] = gc;
    } else {
      band.begin[d] = gc;
      band.end[d] = gc + nc;
    }
  }

  for (int v = 0; v < block.u.nvar(); ++v) {
    for_each_cell(band, [&](int ci, int cj, int ck) {
      const double center = block.coarse.at(v, ci, cj, ck);
      double lo[3], hi[3];
      lo[0] = block.coarse.at(v, ci - 1, cj, ck);
      hi[0] = block.coarse.at(v, ci + 1, cj, ck);
      lo[1] = block.coarse.at(v, ci, cj - 1, ck);
      hi[1] = block.coarse.at(v, ci, cj + 1, ck);
      if (dim == 3) {
        lo[2] = block.coarse.at(v, ci, cj, ck - 1);
        hi[2] = block.coarse.at(v, ci, cj, ck + 1);
      }
      const auto children = prolong_cells(center, {lo, 3}, {hi, 3}, dim);
      const int fi = 2 * (ci - gc) + g;
      const int fj = 2 * (cj - gc) + g;
      const int fk = dim == 3 ? 2 * (ck - gc) + g : 0;
      for (int c = 0; c < (1 << dim); ++c) {
        block.u.at(v, fi + (c & 1), fj + ((c >> 1) & 1), fk + ((c >> 2) & 1)) = children[c];
      }
    });
  }
}

//! Zero-gradient clamp for a ghost band with no neighbor (open boundary).
void clamp_band(MeshBlock &block, const std::array<int, 3> &toward) {
  const int g = block.ng, n = block.nx1;
  const Region band = ghost_band(block.dim, n, g, toward);
  for (int v = 0; v < block.u.nvar(); ++v) {
    for_each_cell(band, [&](int i, int j, int k) {
      const int ci = std::clamp(i, g, g + n - 1);
      const int cj = std::clamp(j, g, g + n - 1);
      const int ck = block.dim == 3 ? std::clamp(k, g, g + n - 1) : 0;
      block.u.at(v, i, j, k) = block.u.at(v, ci, cj, ck);
    });
  }
}

} // namespace

void set_bounds(BlockList &blocks, const BufferSchedule &schedule,
                std::vector<BoundaryBuffer> &buffers, WorkerPool &pool) {
  if (buffers.size() != schedule.entries.size()) {
    fail(ErrorCode::MissingBuffer, "buffer list does not match the schedule");
  }
  for (std::size_t e = 0; e < buffers.size(); ++e) {
    if (!buffers[e].delivered ||
        buffers[e].payload.size() != schedule.entries[e].dst.cell_count() * schedule.nvar) {
      fail(ErrorCode::MissingBuffer,
           "undelivered or mis-sized buffer for entry " + std::to_string(e));
    }
  }

  pool.parallel_for(blocks.size(), [&](std::size_t r) {
    MeshBlock &block = *blocks[r];
    const auto &entry_ids = schedule.entries_by_receiver[r];

    bool has_coarse_neighbor = false;
    const auto &shape = block.u.shape();
    const std::size_t sy = shape[0];
    const std::size_t sz = static_cast<std::size_t>(shape[0]) * shape[1];
    for (int e : entry_ids) {
      const ScheduleEntry &entry = schedule.entries[e];
      if (entry.kind == TransferKind::CoarseToFine) {
        has_coarse_neighbor = true;
        continue;
      }
      std::size_t at = 0;
      const auto &payload = buffers[e].payload;
      const std::size_t run = static_cast<std::size_t>(entry.dst.end[0] - entry.dst.begin[0]);
      for (int v = 0; v < schedule.nvar; ++v) {
        double *var = block.u.var(v);
        for (int k = entry.dst.begin[2]; k < entry.dst.end[2]; ++k) {
          for (int j = entry.dst.begin[1]; j < entry.dst.end[1]; ++j) {
            double *row = var + k * sz + j * sy + entry.dst.begin[0];
            std::copy(payload.data() + at, payload.data() + at + run, row);
            at += run;
          }
        }
      }
    }
    for (int id : schedule.open_boundary_offsets[r]) {
      clamp_band(block, offset_from_id(id));
    }

    if (has_coarse_neighbor) {
      restrict_into_scratch(block);
      for (int e : entry_ids) {
        const ScheduleEntry &entry = schedule.entries[e];
        if (entry.kind != TransferKind::CoarseToFine) continue;
        std::size_t at = 0;
        const auto &payload = buffers[e].payload;
        for (int v = 0; v < schedule.nvar; ++v) {
          for_each_cell(entry.dst,
                        [&](int i, int j, int k) { block.coarse.at(v, i, j, k) = payload[at++]; });
        }
      }
      for (int e : entry_ids) {
        const ScheduleEntry &entry = schedule.entries[e];
        if (entry.kind != TransferKind::CoarseToFine) continue;
        prolong_band(block, {-entry.offset[0], -entry.offset[1], -entry.offset[2]});
      }
    }
  });
}

void flux_correction(BlockList &blocks, const BufferSchedule &schedule, WorkerPool &pool) {
  // Pure-face coarse-to-fine entries identify every fine block sitting on a
  // coarse face; the fine side overwrites its footprint of the coarse flux.
  std::vector<const ScheduleEntry *> faces;
  for (const auto &entry : schedule.entries) {
    if (entry.kind != TransferKind::CoarseToFine) continue;
    const int nz = std::abs(entry.offset[0]) + std::abs(entry.offset[1]) +
                   std::abs(entry.offset[2]);
    if (nz == 1) faces.push_back(&entry);
  }

  pool.parallel_for(faces.size(), [&](std::size_t idx) {
    const ScheduleEntry &entry = *faces[idx];
    MeshBlock &fine = *blocks[entry.receiver];
    MeshBlock &coarse = *blocks[entry.sender];
    const int dim = fine.dim, n = fine.nx1;
    const int nc = n / 2;
    const int nvar = fine.u.nvar();

    int axis = 0;
    for (int d = 0; d < 3; ++d) {
      if (entry.offset[d] != 0) axis = d;
    }
    const int side = -entry.offset[axis]; // fine block's face toward the coarse one
    const int f_fine = side > 0 ? n : 0;
    const int f_coarse = side > 0 ? 0 : n;

    const int t1dim = axis == 0 ? 1 : 0;
    const int t2dim = axis == 2 ? 1 : 2;
    const int b1 = static_cast<int>(fine.loc.lx[t1dim] & 1);
    const int b2 = dim == 3 ? static_cast<int>(fine.loc.lx[t2dim] & 1) : 0;
    const int nt2 = dim == 3 ? nc : 1;

    for (int v = 0; v < nvar; ++v) {
      for (int t2 = 0; t2 < nt2; ++t2) {
        for (int t1 = 0; t1 < nc; ++t1) {
          double sum = 0.0;
          for (int s2 = 0; s2 <= (dim == 3 ? 1 : 0); ++s2) {
            for (int s1 = 0; s1 <= 1; ++s1) {
              sum += fine.face_flux[axis][fine.flux_index(v, f_fine, 2 * t1 + s1,
                                                          dim == 3 ? 2 * t2 + s2 : 0)];
            }
          }
          const double mean = sum / (dim == 3 ? 4.0 : 2.0);
          coarse.face_flux[axis][coarse.flux_index(v, f_coarse, b1 * nc + t1,
                                                   dim == 3 ? b2 * nc + t2 : 0)] = mean;
        }
      }
    }
  });
}

} // namespace amrbench
