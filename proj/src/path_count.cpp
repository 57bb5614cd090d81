#include "gcs/path_count.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <sstream>

#include "gcs/serialize.hpp"

namespace gcs {

std::uint32_t InputDag::node(const std::string& name) {
  auto [it, fresh] = ids_.try_emplace(name, static_cast<std::uint32_t>(names.size()));
  if (fresh) names.push_back(name);
  return it->second;
}

void InputDag::add_edge(const std::string& from, const std::string& to) {
  const std::uint32_t a = node(from);
  edges.emplace_back(a, node(to));
}

std::uint32_t InputDag::find(const std::string& name) const {
  auto it = ids_.find(name);
  return it == ids_.end() ? kNoRule : it->second;
}

InputDag read_dag(std::istream& in) {
  InputDag dag;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    std::string a, b, extra;
    if (tag == "V" && (ls >> a) && !(ls >> extra)) {
      dag.node(a);
    } else if (tag == "E" && (ls >> a >> b) && !(ls >> extra)) {
      const std::uint32_t u = dag.node(a);
      dag.edges.emplace_back(u, dag.node(b));
    } else {
      throw Error(ErrorCode::kInvalidDagFile, "line " + std::to_string(lineno) + ": " + line);
    }
  }
  return dag;
}

InputDag read_dag_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return read_dag(in);
}

namespace {

std::vector<std::vector<std::uint32_t>> adjacency(const InputDag& dag) {
  std::vector<std::vector<std::uint32_t>> out(dag.size());
  for (auto [u, v] : dag.edges) out[u].push_back(v);
  return out;
}

// Kahn order, sources first.
std::vector<std::uint32_t> topological(const std::vector<std::vector<std::uint32_t>>& out) {
  const std::size_t n = out.size();
  std::vector<std::uint32_t> indeg(n, 0), order;
  for (const auto& vs : out)
    for (auto v : vs) ++indeg[v];
  for (std::uint32_t v = 0; v < n; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (auto v : out[order[head]])
      if (--indeg[v] == 0) order.push_back(v);
  if (order.size() != n) throw Error(ErrorCode::kCyclicInput, "graph has a cycle");
  return order;
}

}  // namespace

NormalizedDag normalize_dag(const InputDag& dag) {
  const std::size_t n = dag.size();
  if (n == 0) throw Error(ErrorCode::kNoSink, "empty graph");
  const auto out = adjacency(dag);
  const auto order = topological(out);

  // Step 1: bypass nodes with a single out-edge; chains collapse fully.
  std::vector<std::uint32_t> image(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    image[*it] = out[*it].size() == 1 ? image[out[*it][0]] : *it;

  NormalizedDag nd;
  std::vector<std::uint32_t> new_id(n, kNoRule);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (image[v] != v) continue;
    new_id[v] = static_cast<std::uint32_t>(nd.out.size());
    nd.out.emplace_back();
    nd.origin.push_back(v);
  }
  nd.node_map.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) nd.node_map[v] = new_id[image[v]];

  // Balanced binary combination of at least two children under a new node.
  std::function<std::uint32_t(const std::vector<std::uint32_t>&, std::size_t, std::size_t)> combine =
      [&](const std::vector<std::uint32_t>& kids, std::size_t lo, std::size_t hi) -> std::uint32_t {
    if (hi - lo == 1) return kids[lo];
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    const std::uint32_t left = combine(kids, lo, mid), right = combine(kids, mid, hi);
    nd.out.push_back({left, right});
    nd.origin.push_back(kNoRule);
    ++nd.added;
    return static_cast<std::uint32_t>(nd.out.size() - 1);
  };

  // Step 3: out-degree d >= 3 becomes a balanced split with d - 2 new nodes.
  for (std::uint32_t v = 0; v < n; ++v) {
    if (image[v] != v || out[v].empty()) continue;
    std::vector<std::uint32_t> kids;
    for (auto t : out[v]) kids.push_back(nd.node_map[t]);
    const std::size_t mid = (kids.size() + 1) / 2;
    const std::uint32_t left = combine(kids, 0, mid), right = combine(kids, mid, kids.size());
    nd.out[new_id[v]] = {left, right};
  }

  // Step 2: one root over the images of the original sources.
  std::vector<std::uint32_t> indeg(n, 0), sources;
  for (auto [u, v] : dag.edges) ++indeg[v];
  for (std::uint32_t v = 0; v < n; ++v)
    if (indeg[v] == 0) sources.push_back(nd.node_map[v]);
  nd.root = combine(sources, 0, sources.size());
  return nd;
}

Length count_all_paths(const InputDag& dag, Length cap) {
  const auto out = adjacency(dag);
  const auto order = topological(out);
  const Length limit = cap == std::numeric_limits<Length>::max() ? cap : cap + 1;
  auto add = [limit](Length a, Length b) { return a >= limit - std::min(b, limit) ? limit : a + b; };
  std::vector<Length> paths(dag.size(), 0);
  std::vector<std::uint32_t> indeg(dag.size(), 0);
  for (auto [u, v] : dag.edges) ++indeg[v];
  Length total = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = *it;
    if (out[v].empty()) paths[v] = 1;
    for (auto t : out[v]) paths[v] = add(paths[v], paths[t]);
    if (indeg[v] == 0) total = add(total, paths[v]);
  }
  return total;
}

std::vector<Position> leftmost_occurrences(const Grammar& g) {
  constexpr Position kUnset = std::numeric_limits<Position>::max();
  std::vector<Position> start(g.size(), kUnset);
  if (g.size() == 0) return start;
  start[g.root] = 1;
  for (std::size_t r = g.size(); r-- > 0;) {
    const Rule& rule = g[static_cast<RuleId>(r)];
    if (start[r] == kUnset || rule.is_terminal()) continue;
    start[rule.left] = std::min(start[rule.left], start[r]);
    start[rule.right] = std::min(start[rule.right], start[r] + g.length(rule.left));
  }
  for (auto& s : start)
    if (s == kUnset) s = 0;
  return start;
}

PathCountIndex::PathCountIndex(const InputDag& dag, Length max_paths) {
  const Length total = count_all_paths(dag, max_paths);
  if (total > max_paths)
    throw Error(ErrorCode::kPathLimitExceeded, "more than " + std::to_string(max_paths) + " source-to-sink paths");
  const NormalizedDag nd = normalize_dag(dag);
  const std::size_t n = dag.size();
  names_ = dag.names;
  edges_ = dag.edges;
  for (std::uint32_t v = 0; v < n; ++v) ids_.emplace(names_[v], v);

  std::vector<bool> has_out(n, false);
  for (auto [u, v] : dag.edges) has_out[u] = true;

  std::vector<Rule> rules;
  std::vector<RuleId> rule_for(nd.size(), kNoRule);
  sink_symbol_.assign(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (has_out[v]) continue;
    sink_symbol_[v] = static_cast<Symbol>(rules.size() + 1);
    rule_for[nd.node_map[v]] = static_cast<RuleId>(rules.size());
    rules.push_back(Rule::terminal(sink_symbol_[v]));
  }
  const auto sigma = static_cast<std::uint32_t>(rules.size());

  // Post-order from the root gives children before parents.
  std::vector<std::pair<std::uint32_t, bool>> stack{{nd.root, false}};
  while (!stack.empty()) {
    auto [x, expanded] = stack.back();
    stack.pop_back();
    if (rule_for[x] != kNoRule) continue;
    if (!expanded) {
      stack.push_back({x, true});
      for (auto it = nd.out[x].rbegin(); it != nd.out[x].rend(); ++it)
        if (rule_for[*it] == kNoRule) stack.push_back({*it, false});
      continue;
    }
    rule_for[x] = static_cast<RuleId>(rules.size());
    rules.push_back(Rule::pair(rule_for[nd.out[x][0]], rule_for[nd.out[x][1]], 0));
  }
  grammar_ = std::make_shared<const Grammar>(make_grammar(std::move(rules), rule_for[nd.root], sigma));

  rule_of_.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) rule_of_[v] = rule_for[nd.node_map[v]];
  leftmost_ = leftmost_occurrences(*grammar_);
  forest_ = std::make_shared<const HeavyForest>(grammar_);
  rank_ = RankIndex(forest_);
}

InputDag PathCountIndex::input_dag() const {
  InputDag dag;
  for (const auto& s : names_) dag.node(s);
  dag.edges = edges_;
  return dag;
}

std::uint32_t PathCountIndex::lookup(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw Error(ErrorCode::kUnknownNode, "node '" + name + "'");
  return it->second;
}

Length PathCountIndex::count_paths(const std::string& from, const std::string& sink, QueryStats* stats) const {
  const std::uint32_t u = lookup(from), v = lookup(sink);
  return count_paths(u, v, stats);
}

Length PathCountIndex::count_paths(std::uint32_t from, std::uint32_t sink, QueryStats* stats) const {
  if (from >= nodes() || sink >= nodes()) throw Error(ErrorCode::kUnknownNode, "node id out of range");
  const Symbol c = sink_symbol_[sink];
  if (c == 0) throw Error(ErrorCode::kNotASink, "node '" + names_[sink] + "' has outgoing edges");
  if (from == sink) return 1;
  const RuleId r = rule_of_[from];
  const Grammar& g = *grammar_;
  if (g[r].is_terminal()) return g[r].symbol == c ? 1 : 0;
  const Position i = leftmost_[r], j = i + g.length(r) - 1;
  return rank_.rank(c, j, stats) - rank_.rank(c, i - 1, stats);
}

std::size_t PathCountIndex::size_in_bytes() const {
  std::size_t names = 0;
  for (const auto& s : names_) names += s.size();
  return names + edges_.size() * 8 + rule_of_.size() * sizeof(RuleId) + sink_symbol_.size() * sizeof(Symbol) +
         leftmost_.size() * sizeof(Position) + forest_->size_in_bytes() + rank_.size_in_bytes();
}

void PathCountIndex::save(BinaryWriter& out) const {
  out.u64(names_.size());
  for (const auto& s : names_) out.str(s);
  std::vector<std::uint32_t> from, to;
  for (auto [u, v] : edges_) {
    from.push_back(u);
    to.push_back(v);
  }
  out.vec(from);
  out.vec(to);
  out.vec(rule_of_);
  out.vec(sink_symbol_);
  out.vec(leftmost_);
  forest_->save(out);
  rank_.save(out);
}

PathCountIndex PathCountIndex::load(BinaryReader& in, std::shared_ptr<const Grammar> g) {
  PathCountIndex ix;
  ix.grammar_ = std::move(g);
  const Grammar& gr = *ix.grammar_;
  const std::size_t n = in.count(8);
  for (std::size_t v = 0; v < n; ++v) {
    ix.names_.push_back(in.str());
    if (!ix.ids_.emplace(ix.names_.back(), static_cast<std::uint32_t>(v)).second)
      throw Error(ErrorCode::kCorruptIndex, "duplicate node name");
  }
  const auto from = in.vec<std::uint32_t>(), to = in.vec<std::uint32_t>();
  if (from.size() != to.size()) throw Error(ErrorCode::kCorruptIndex, "edge list");
  for (std::size_t e = 0; e < from.size(); ++e) {
    if (from[e] >= n || to[e] >= n) throw Error(ErrorCode::kCorruptIndex, "edge endpoint");
    ix.edges_.emplace_back(from[e], to[e]);
  }
  ix.rule_of_ = in.vec<RuleId>();
  ix.sink_symbol_ = in.vec<Symbol>();
  ix.leftmost_ = in.vec<Position>();
  if (ix.rule_of_.size() != n || ix.sink_symbol_.size() != n || ix.leftmost_.size() != gr.size())
    throw Error(ErrorCode::kCorruptIndex, "path index size");
  for (std::size_t v = 0; v < n; ++v)
    if (ix.rule_of_[v] >= gr.size() || ix.sink_symbol_[v] > gr.sigma)
      throw Error(ErrorCode::kCorruptIndex, "path index entry");
  for (RuleId r = 0; r < gr.size(); ++r)
    if (ix.leftmost_[r] < 1 || ix.leftmost_[r] - 1 + gr.length(r) > gr.text_length())
      throw Error(ErrorCode::kCorruptIndex, "leftmost occurrence");
  ix.forest_ = std::make_shared<const HeavyForest>(HeavyForest::load(in, ix.grammar_));
  ix.rank_ = RankIndex::load(in, ix.forest_);
  return ix;
}

}  // namespace gcs
