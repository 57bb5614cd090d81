#ifndef GCS_TYPES_HPP
#define GCS_TYPES_HPP

#include <cstdint>
#include <limits>

namespace gcs {

// Terminal alphabet code in [1..sigma].
using Symbol = std::uint32_t;
// Index of a rule inside Grammar::rules (rules are stored in topological order).
using RuleId = std::uint32_t;
// 1-based position inside an expansion.
using Position = std::uint64_t;
using Length = std::uint64_t;

inline constexpr RuleId kNoRule = std::numeric_limits<RuleId>::max();

// Per-query instrumentation. Caller-owned so queries stay read-only.
struct QueryStats {
  std::uint64_t light_transitions = 0;  // longest triplet sequence touched
  std::uint64_t nodes_visited = 0;      // jump-table probes or expanded nodes
  std::uint64_t decompress_nodes = 0;   // virtual decompression-tree nodes
  std::uint64_t work = 0;               // all of the above plus fringe copies and jumps
};

enum class EngineKind : std::uint8_t { kUnbalanced = 0, kBalanced = 1, kPathCount = 2 };

}  // namespace gcs

#endif  // GCS_TYPES_HPP
