//! \file memory_model.cpp

#include "memory_model.hpp"

#include "error.hpp"

namespace amrbench {

std::uint64_t memory_model(const MemoryModelParams &params, bool optimized) {
  if (params.bytes_per_value == 0 || params.nx1 == 0) {
    fail(ErrorCode::ValidationError, "memory model: B and nx1 must be positive");
  }
  if (params.dimension < 1 || params.dimension > 3) {
    fail(ErrorCode::ValidationError, "memory model: dimension must be 1, 2, or 3");
  }
  if (optimized && params.reduced_dim >= params.dimension) {
    fail(ErrorCode::ValidationError,
         "memory model: reduced loop dimension must be smaller than dimension");
  }

  const std::uint64_t cells_per_dim = params.nx1 + 2 * params.ng;
  const std::uint64_t exponent = optimized ? params.reduced_dim : params.dimension;
  std::uint64_t cells = 1;
  for (std::uint64_t e = 0; e < exponent; ++e) cells *= cells_per_dim;

  const std::uint64_t instances = optimized ? params.n_threadblocks : params.n_meshblocks;
  return instances * params.bytes_per_value * 6 * cells * (3 + params.num_scalar);
}

} // namespace amrbench
