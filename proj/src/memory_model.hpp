#ifndef AMRBENCH_MEMORY_MODEL_HPP_
#define AMRBENCH_MEMORY_MODEL_HPP_
//! \file memory_model.hpp
//! \brief Exact integer model of the auxiliary (intermediate/temporary)
//!  memory used by the flux kernels, before and after loop restructuring.
//!
//! pre  = n_meshblocks   * B * 6 * (nx1 + 2 ng)^dimension   * (3 + num_scalar)
//! post = n_threadblocks * B * 6 * (nx1 + 2 ng)^reduced_dim * (3 + num_scalar)
//!
//! The factor 6 covers three spatial directions with two sides each; the
//! fixed 3 covers the primary conserved components.

#include <cstdint>

namespace amrbench {

struct MemoryModelParams {
  std::uint64_t n_meshblocks = 0;
  std::uint64_t n_threadblocks = 0;
  std::uint64_t bytes_per_value = 8; // B
  std::uint64_t nx1 = 8;
  std::uint64_t ng = 4;
  std::uint64_t dimension = 3;
  std::uint64_t reduced_dim = 2; // d, used by the optimized form
  std::uint64_t num_scalar = 0;
};

//! Bytes of auxiliary memory. Bit-exact integer arithmetic.
std::uint64_t memory_model(const MemoryModelParams &params, bool optimized);

} // namespace amrbench

#endif // AMRBENCH_MEMORY_MODEL_HPP_
