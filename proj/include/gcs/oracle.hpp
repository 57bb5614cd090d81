#ifndef GCS_ORACLE_HPP
#define GCS_ORACLE_HPP

#include <vector>

#include "gcs/path_count.hpp"

// Plain scans over fully expanded text; reference answers for tests and the
// CLI's --oracle mode.
namespace gcs::oracle {

Length naive_rank(const std::vector<Symbol>& text, Symbol c, Position i);
Position naive_select(const std::vector<Symbol>& text, Symbol c, Length k);
std::vector<Symbol> naive_access(const std::vector<Symbol>& text, Position i, Position j);

// Memoized DFS over edge sequences; parallel edges count separately.
Length naive_count_paths(const InputDag& dag, std::uint32_t u, std::uint32_t v);
// Enumerates every source-to-sink path one by one.
Length naive_count_all_paths(const InputDag& dag);

}  // namespace gcs::oracle

#endif  // GCS_ORACLE_HPP
