#ifndef GCS_HEAVY_PATH_HPP
#define GCS_HEAVY_PATH_HPP

#include <bit>
#include <memory>
#include <vector>

#include "gcs/grammar.hpp"

namespace gcs {

// Binary-lifting tables over a forest whose edges are heavy-child links.
// Node ids must be topological: heavy[v] < v.
//
// hang[v]  is the weight hanging to the left of v's heavy child, i.e. the
//          coordinate shift when stepping from v to its heavy child.
// shift[v] is an optional second coordinate (text positions when the
//          weights are occurrence counts); empty means "same as hang".
class HeavyPathJumps {
 public:
  struct Stop {
    RuleId node;
    Length hang;   // summed hang weight from the start node
    Length shift;  // summed shift from the start node
  };

  HeavyPathJumps() = default;
  HeavyPathJumps(const std::vector<RuleId>& heavy, const std::vector<Length>& hang,
                 const std::vector<Length>& shift = {});

  std::size_t size() const { return depth_.size(); }
  std::uint32_t levels() const { return levels_; }
  // Heavy steps from v down to its leaf.
  std::uint32_t depth(RuleId v) const { return depth_[v]; }
  RuleId ancestor(std::uint32_t level, RuleId v) const { return anc_[level * size() + v]; }
  Length hang(std::uint32_t level, RuleId v) const { return hang_[level * size() + v]; }

  // Deepest node u on v's heavy path with inside(u, hang(v..u)) true. The
  // predicate must hold at v and be monotone along the path.
  template <class Inside>
  Stop descend(RuleId v, Inside&& inside, QueryStats* stats = nullptr) const {
    Stop s{v, 0, 0};
    const std::size_t n = size();
    for (int k = std::bit_width(depth_[v]) - 1; k >= 0; --k) {
      if (depth_[s.node] < (std::uint32_t{1} << k)) continue;
      const std::size_t idx = static_cast<std::size_t>(k) * n + s.node;
      if (stats) {
        ++stats->nodes_visited;
        ++stats->work;
      }
      const RuleId cand = anc_[idx];
      const Length h = s.hang + hang_[idx];
      if (inside(cand, h)) {
        s.node = cand;
        s.hang = h;
        s.shift += shift_.empty() ? hang_[idx] : shift_[idx];
      }
    }
    return s;
  }

  std::size_t size_in_bytes() const;
  void save(BinaryWriter& out) const;
  static HeavyPathJumps load(BinaryReader& in);

 private:
  std::uint32_t levels_ = 0;
  std::vector<std::uint32_t> depth_;
  std::vector<RuleId> anc_;
  std::vector<Length> hang_;
  std::vector<Length> shift_;
};

// One step of the access trace: `rule` generates positions [start, end] of
// the enclosing context (1-based).
struct Triplet {
  RuleId rule;
  Position start;
  Position end;
  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Where a position leaves the heavy path of a rule.
struct HeavyExit {
  std::uint32_t step;      // heavy steps from the rule down to `node`
  RuleId node;             // last heavy-path node containing the position
  Length node_offset;      // symbols of the rule before `node`
  bool light_on_left;      // node = light heavy  (else node = heavy light)
  RuleId light;            // light child containing the position
  Position light_start;    // 1-based start of `light` inside the rule
  Position offset_in_light;
};

// Heavy-path decomposition of the grammar DAG: heavy child (ties go left),
// center point, heavy-path leaf, and ancestor jump tables.
class HeavyForest {
 public:
  HeavyForest() = default;
  explicit HeavyForest(std::shared_ptr<const Grammar> g);

  const Grammar& grammar() const { return *grammar_; }
  const std::shared_ptr<const Grammar>& grammar_ptr() const { return grammar_; }
  const HeavyPathJumps& jumps() const { return jumps_; }

  bool heavy_is_left(RuleId r) const { return heavy_left_[r] != 0; }
  RuleId heavy_child(RuleId r) const {
    const Rule& rule = (*grammar_)[r];
    if (rule.is_terminal()) return kNoRule;
    return heavy_is_left(r) ? rule.left : rule.right;
  }
  RuleId light_child(RuleId r) const {
    const Rule& rule = (*grammar_)[r];
    if (rule.is_terminal()) return kNoRule;
    return heavy_is_left(r) ? rule.right : rule.left;
  }
  // 1-based position of the heavy-path leaf character inside expand(r).
  Position center(RuleId r) const { return center_[r]; }
  // Terminal rule at the end of r's heavy path.
  RuleId leaf(RuleId r) const { return leaf_[r]; }

  // Deepest node of r's heavy path whose expansion covers [a, b]; the
  // returned hang is the node's offset inside r.
  HeavyPathJumps::Stop deepest_covering(RuleId r, Position a, Position b,
                                        QueryStats* stats = nullptr) const;

  std::size_t size_in_bytes() const;
  void save(BinaryWriter& out) const;
  static HeavyForest load(BinaryReader& in, std::shared_ptr<const Grammar> g);

 private:
  std::shared_ptr<const Grammar> grammar_;
  std::vector<std::uint8_t> heavy_left_;
  std::vector<Position> center_;
  std::vector<RuleId> leaf_;
  HeavyPathJumps jumps_;
};

// Requires x != center(r).
HeavyExit heavy_path_predecessor(const HeavyForest& f, RuleId r, Position x,
                                 QueryStats* stats = nullptr);

// Trace for position x of expand(r): light children entered, ending with a
// terminal rule. Satisfies sum(start - 1) + 1 == x.
std::vector<Triplet> triplet_search(const HeavyForest& f, RuleId r, Position x,
                                    QueryStats* stats = nullptr);

}  // namespace gcs

#endif  // GCS_HEAVY_PATH_HPP
