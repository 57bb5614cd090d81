#include "gcs/oracle.hpp"

#include <string>

namespace gcs::oracle {

Length naive_rank(const std::vector<Symbol>& text, Symbol c, Position i) {
  if (i > text.size()) throw Error(ErrorCode::kPositionOutOfRange, "position " + std::to_string(i));
  Length n = 0;
  for (Position p = 0; p < i; ++p) n += text[p] == c;
  return n;
}

Position naive_select(const std::vector<Symbol>& text, Symbol c, Length k) {
  if (k >= 1) {
    Length seen = 0;
    for (Position p = 0; p < text.size(); ++p)
      if (text[p] == c && ++seen == k) return p + 1;
  }
  throw Error(ErrorCode::kOccurrenceOutOfRange, "occurrence " + std::to_string(k));
}

std::vector<Symbol> naive_access(const std::vector<Symbol>& text, Position i, Position j) {
  if (i < 1 || i > j || j > text.size())
    throw Error(ErrorCode::kPositionOutOfRange, "[" + std::to_string(i) + ", " + std::to_string(j) + "]");
  return {text.begin() + (i - 1), text.begin() + j};
}

namespace {

struct Dfs {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<int> state;  // 0 new, 1 on stack, 2 done
  std::vector<Length> memo;
  std::uint32_t target;

  Length count(std::uint32_t u) {
    if (state[u] == 2) return memo[u];
    if (state[u] == 1) throw Error(ErrorCode::kCyclicInput, "cycle through node " + std::to_string(u));
    state[u] = 1;
    Length n = u == target ? 1 : 0;
    for (auto v : out[u]) n += count(v);
    state[u] = 2;
    return memo[u] = n;
  }
};

}  // namespace

Length naive_count_paths(const InputDag& dag, std::uint32_t u, std::uint32_t v) {
  Dfs dfs{std::vector<std::vector<std::uint32_t>>(dag.size()), std::vector<int>(dag.size(), 0),
          std::vector<Length>(dag.size(), 0), v};
  for (auto [a, b] : dag.edges) dfs.out[a].push_back(b);
  for (std::uint32_t x = 0; x < dag.size(); ++x) dfs.count(x);
  return dfs.count(u);
}

Length naive_count_all_paths(const InputDag& dag) {
  const std::size_t n = dag.size();
  std::vector<std::vector<std::uint32_t>> out(n);
  std::vector<bool> has_in(n, false);
  for (auto [a, b] : dag.edges) {
    out[a].push_back(b);
    has_in[b] = true;
  }
  Length total = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (has_in[s]) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> path{{s, 0}};
    while (!path.empty()) {
      auto& [v, next] = path.back();
      if (out[v].empty()) {
        ++total;
        path.pop_back();
        continue;
      }
      if (next == out[v].size()) {
        path.pop_back();
        continue;
      }
      const std::uint32_t w = out[v][next++];
      if (path.size() > n) throw Error(ErrorCode::kCyclicInput, "cycle");
      path.push_back({w, 0});
    }
  }
  return total;
}

}  // namespace gcs::oracle
