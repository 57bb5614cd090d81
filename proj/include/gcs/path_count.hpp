#ifndef GCS_PATH_COUNT_HPP
#define GCS_PATH_COUNT_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "gcs/heavy_path.hpp"
#include "gcs/rank_select.hpp"

namespace gcs {

inline constexpr Length kDefaultMaxPaths = Length{1} << 48;

// Directed multigraph; edges keep their input order.
struct InputDag {
  std::vector<std::string> names;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  std::size_t size() const { return names.size(); }
  // Adds a node if the name is new; returns its id.
  std::uint32_t node(const std::string& name);
  std::uint32_t find(const std::string& name) const;  // kNoRule if absent
  // Declares both endpoints, `from` first.
  void add_edge(const std::string& from, const std::string& to);

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Line format: `V <id>` declares a node, `E <from> <to>` adds an edge (and
// declares its endpoints). Blank lines and lines starting with '#' are skipped.
InputDag read_dag(std::istream& in);
InputDag read_dag_file(const std::string& path);

// Every node has 0 or 2 ordered children and there is a single root.
struct NormalizedDag {
  std::vector<std::vector<std::uint32_t>> out;
  std::uint32_t root = 0;
  // Original node -> the normalized node with the same paths to every sink.
  std::vector<std::uint32_t> node_map;
  // Normalized node -> original node, or kNoRule for added nodes.
  std::vector<std::uint32_t> origin;
  std::size_t added = 0;  // split nodes plus the super-source, if any

  std::size_t size() const { return out.size(); }
};

// Throws kCyclicInput or kNoSink.
NormalizedDag normalize_dag(const InputDag& dag);

// Number of source-to-sink paths, saturated at `cap` + 1. Throws kCyclicInput.
Length count_all_paths(const InputDag& dag, Length cap);

// Counts u -> sink paths with two rank queries over a grammar whose string
// lists, left to right, the sink reached by every root-to-sink path.
class PathCountIndex {
 public:
  PathCountIndex() = default;
  explicit PathCountIndex(const InputDag& dag, Length max_paths = kDefaultMaxPaths);

  const Grammar& grammar() const { return *grammar_; }
  const std::shared_ptr<const Grammar>& grammar_ptr() const { return grammar_; }
  std::size_t nodes() const { return names_.size(); }
  const std::string& name(std::uint32_t v) const { return names_[v]; }
  RuleId rule_of(std::uint32_t v) const { return rule_of_[v]; }
  // Symbol of a sink, 0 for other nodes.
  Symbol sink_symbol(std::uint32_t v) const { return sink_symbol_[v]; }
  // 1-based start of the leftmost occurrence of expand(r) in the string.
  Position leftmost(RuleId r) const { return leftmost_[r]; }
  // The graph the index was built from.
  InputDag input_dag() const;

  Length count_paths(const std::string& from, const std::string& sink, QueryStats* stats = nullptr) const;
  Length count_paths(std::uint32_t from, std::uint32_t sink, QueryStats* stats = nullptr) const;

  std::size_t size_in_bytes() const;
  void save(BinaryWriter& out) const;
  static PathCountIndex load(BinaryReader& in, std::shared_ptr<const Grammar> g);

 private:
  std::uint32_t lookup(const std::string& name) const;
  void build_rank();

  std::vector<std::string> names_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<RuleId> rule_of_;
  std::vector<Symbol> sink_symbol_;
  std::vector<Position> leftmost_;
  std::shared_ptr<const Grammar> grammar_;
  std::shared_ptr<const HeavyForest> forest_;
  RankIndex rank_;
};

// Leftmost-occurrence start of every rule, top-down from the root.
std::vector<Position> leftmost_occurrences(const Grammar& g);

}  // namespace gcs

#endif  // GCS_PATH_COUNT_HPP
