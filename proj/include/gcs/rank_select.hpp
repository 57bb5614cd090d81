#ifndef GCS_RANK_SELECT_HPP
#define GCS_RANK_SELECT_HPP

#include <memory>
#include <vector>

#include "gcs/heavy_path.hpp"
#include "gcs/packed.hpp"

namespace gcs {

// Per rule and character: v(r, c) = occurrences of c in expand(r)[1..center(r)]
// and total(r, c) = occurrences in all of expand(r).
class RankIndex {
 public:
  RankIndex() = default;
  explicit RankIndex(std::shared_ptr<const HeavyForest> forest);

  const HeavyForest& forest() const { return *forest_; }
  const Grammar& grammar() const { return forest_->grammar(); }

  Length v(RuleId r, Symbol c) const { return v_[slot(r, c)]; }
  Length total(RuleId r, Symbol c) const { return total_[slot(r, c)]; }

  // Occurrences of c in S[1..i]; 0 <= i <= N.
  Length rank(Symbol c, Position i, QueryStats* stats = nullptr) const;
  // Same, inside expand(r).
  Length rank_in(RuleId r, Symbol c, Position i, QueryStats* stats = nullptr) const;

  std::size_t size_in_bytes() const { return v_.size_in_bytes() + total_.size_in_bytes(); }
  void save(BinaryWriter& out) const;
  static RankIndex load(BinaryReader& in, std::shared_ptr<const HeavyForest> forest);

 private:
  std::size_t slot(RuleId r, Symbol c) const { return std::size_t{r} * grammar().sigma + (c - 1); }

  std::shared_ptr<const HeavyForest> forest_;
  PackedArray v_, total_;
};

// Occurrence counts and center positions of one character for every rule,
// after dropping rules whose expansion lacks it.
struct CharCounters {
  std::vector<Length> occ;       // occurrences of c in expand(r)
  std::vector<Position> center;  // position in expand(r) of its center occurrence; 0 if occ = 0
};
CharCounters char_counters(const Grammar& g, Symbol c);

// Select via one occurrence-weighted DAG per character. Rules with a single
// c-bearing child are bypassed (mapped to that child plus a position shift),
// so every kept internal node has c in both children and the c-light child
// holds at most half the occurrences.
class SelectIndex {
 public:
  SelectIndex() = default;
  explicit SelectIndex(std::shared_ptr<const Grammar> g);

  const Grammar& grammar() const { return *grammar_; }
  Length count(Symbol c) const;
  // Nodes kept for character c.
  std::size_t dag_size(Symbol c) const { return begin_[c] - begin_[c - 1]; }

  // Position of the k-th occurrence of c in S.
  Position select(Symbol c, Length k, QueryStats* stats = nullptr) const;

  std::size_t size_in_bytes() const;
  void save(BinaryWriter& out) const;
  static SelectIndex load(BinaryReader& in, std::shared_ptr<const Grammar> g);

 private:
  struct Edge {
    RuleId node;
    Length shift;  // offset of the target's expansion inside the parent's
  };

  std::shared_ptr<const Grammar> grammar_;
  // Nodes of character c occupy ids [begin_[c-1], begin_[c]); each block is
  // topologically ordered.
  std::vector<std::uint64_t> begin_;
  std::vector<RuleId> root_;   // per character; kNoRule if absent
  std::vector<Length> root_shift_;
  std::vector<Length> occ_;
  std::vector<RuleId> left_, right_;  // kNoRule for leaves
  std::vector<Length> left_shift_, right_shift_;
  std::vector<std::uint8_t> heavy_left_;
  std::vector<Length> center_;  // occurrence number of the heavy-path leaf
  std::vector<Position> u_;     // its position
  HeavyPathJumps jumps_;
};

class RankSelectIndex {
 public:
  RankSelectIndex() = default;
  explicit RankSelectIndex(std::shared_ptr<const HeavyForest> forest);

  const RankIndex& ranks() const { return rank_; }
  const SelectIndex& selects() const { return select_; }

  Length rank(Symbol c, Position i, QueryStats* stats = nullptr) const { return rank_.rank(c, i, stats); }
  Position select(Symbol c, Length k, QueryStats* stats = nullptr) const { return select_.select(c, k, stats); }

  std::size_t size_in_bytes() const { return rank_.size_in_bytes() + select_.size_in_bytes(); }
  void save(BinaryWriter& out) const;
  static RankSelectIndex load(BinaryReader& in, std::shared_ptr<const HeavyForest> forest);

 private:
  RankIndex rank_;
  SelectIndex select_;
};

}  // namespace gcs

#endif  // GCS_RANK_SELECT_HPP
