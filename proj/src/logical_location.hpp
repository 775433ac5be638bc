#ifndef AMRBENCH_LOGICAL_LOCATION_HPP_
#define AMRBENCH_LOGICAL_LOCATION_HPP_
//! \file logical_location.hpp
//! \brief LogicalLocation addresses a node of the refinement tree by
//!  (logical level, integer coordinates). Coordinates satisfy 0 <= c < 2^level
//!  in every active dimension; inactive dimensions hold 0.

#include <array>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <string>

namespace amrbench {

struct LogicalLocation {
  std::int32_t level = 0;
  std::array<std::int64_t, 3> lx = {0, 0, 0};

  LogicalLocation() = default;
  LogicalLocation(std::int32_t lev, std::int64_t lx0, std::int64_t lx1, std::int64_t lx2 = 0)
      : level(lev), lx{lx0, lx1, lx2} {}

  bool operator==(const LogicalLocation &o) const { return level == o.level && lx == o.lx; }
  bool operator!=(const LogicalLocation &o) const { return !(*this == o); }
  // Lexicographic; used only to get stable container ordering.
  bool operator<(const LogicalLocation &o) const {
    if (level != o.level) return level < o.level;
    return lx < o.lx;
  }

  LogicalLocation parent() const {
    return LogicalLocation(level - 1, lx[0] >> 1, lx[1] >> 1, lx[2] >> 1);
  }

  //! Child with index bits s in z-order: bit d of `child_index` selects the
  //! upper half in dimension d. Inactive dimensions must keep bit 0.
  LogicalLocation child(int child_index) const {
    return LogicalLocation(level + 1, (lx[0] << 1) | (child_index & 1),
                           (lx[1] << 1) | ((child_index >> 1) & 1),
                           (lx[2] << 1) | ((child_index >> 2) & 1));
  }

  //! Index of this node among its parent's children (z-order convention).
  int child_index_in_parent() const {
    return static_cast<int>((lx[0] & 1) | ((lx[1] & 1) << 1) | ((lx[2] & 1) << 2));
  }

  bool contains(const LogicalLocation &other) const {
    if (other.level < level) return false;
    const int shift = other.level - level;
    for (int d = 0; d < 3; ++d) {
      if ((other.lx[d] >> shift) != lx[d]) return false;
    }
    return true;
  }

  //! Bit-interleaved key placing this node on the space-filling curve at
  //! reference level `max_level`; nodes of distinct leaves never collide.
  std::uint64_t morton_key(int max_level, int dim) const {
    std::uint64_t key = 0;
    for (int b = level - 1; b >= 0; --b) {
      int idx = 0;
      for (int d = 0; d < dim; ++d) {
        idx |= static_cast<int>((lx[d] >> b) & 1) << d;
      }
      key = (key << dim) | static_cast<std::uint64_t>(idx);
    }
    key <<= static_cast<std::uint64_t>(dim) * static_cast<std::uint64_t>(max_level - level);
    return key;
  }

  std::string to_string() const {
    return "(" + std::to_string(level) + ":" + std::to_string(lx[0]) + "," +
           std::to_string(lx[1]) + "," + std::to_string(lx[2]) + ")";
  }
};

struct LogicalLocationHash {
  std::size_t operator()(const LogicalLocation &loc) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(loc.level));
    for (int d = 0; d < 3; ++d) mix(static_cast<std::uint64_t>(loc.lx[d]));
    return static_cast<std::size_t>(h);
  }
};

} // namespace amrbench

#endif // AMRBENCH_LOGICAL_LOCATION_HPP_
