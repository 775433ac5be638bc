//! \file metrics.cpp

#include "metrics.hpp"

#include <cstring>

namespace amrbench {

namespace {
constexpr const char *kPhaseNames[kNumPhases] = {
    "CalculateFluxes",
    "FluxCorrection",
    "FluxDivergence",
    "WeightedSumData",
    "SendBoundBufs",
    "ReceiveBoundBufs",
    "SetBounds",
    "RedistributeAndRefineMeshBlocks",
    "UpdateMeshBlockTree",
    "RefinementTag",
    "EstimateTimestep",
    "FillDerived",
    "Prolong.Restr.Loop",
};
} // namespace

const char *phase_name(Phase phase) { return kPhaseNames[static_cast<int>(phase)]; }

bool phase_is_block_parallel(Phase phase) {
  switch (phase) {
    case Phase::ReceiveBoundBufs:
    case Phase::RedistributeAndRefineMeshBlocks:
    case Phase::UpdateMeshBlockTree:
      return false;
    default:
      return true;
  }
}

double RunMetrics::parallel_seconds() const {
  double total = 0.0;
  for (int p = 0; p < kNumPhases; ++p) {
    if (phase_is_block_parallel(static_cast<Phase>(p))) total += phase_seconds[p];
  }
  return total;
}

double fom(const RunMetrics &metrics) {
  if (metrics.zone_cycles == 0 || metrics.wall_seconds <= 0.0) return 0.0;
  return static_cast<double>(metrics.zone_cycles) / metrics.wall_seconds;
}

void Checksum::add_double(double v) {
  std::uint64_t bits = 0;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  add_u64(bits);
}

} // namespace amrbench
