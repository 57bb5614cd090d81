#ifndef GCS_BALANCED_HPP
#define GCS_BALANCED_HPP

#include <memory>
#include <vector>

#include "gcs/grammar.hpp"
#include "gcs/packed.hpp"

namespace gcs {

// Expansion depth d = max(1, floor(eps * log2 log2 N)).
std::uint32_t expansion_depth(Length text_length, double epsilon);
// Long fringe length: w * ceil(log2(N)^eps).
Length long_fringe_width(Length text_length, std::uint32_t sigma, double epsilon);

// Every pair rule has min(|Y|, |Z|) / max(|Y|, |Z|) >= 1/4.
bool is_weight_balanced(const Grammar& g);

// Shallow-tree engine. Each rule is replaced by the rules found d levels
// below it (at most 2^d <= log^eps N of them) together with exclusive prefix
// sums of their lengths and, per character, of their occurrence counts. A
// query descends d grammar levels per step by predecessor search over those
// sums. Items of length <= w are answered from the packed fringes.
class BalancedIndex {
 public:
  BalancedIndex() = default;
  explicit BalancedIndex(std::shared_ptr<const Grammar> g, double epsilon = 0.5);
  // Fixed expansion depth instead of the one derived from epsilon.
  BalancedIndex(std::shared_ptr<const Grammar> g, double epsilon, std::uint32_t depth);

  const Grammar& grammar() const { return *grammar_; }
  double epsilon() const { return epsilon_; }
  std::uint32_t depth() const { return depth_; }
  Length chunk() const { return w_; }
  Length fringe_width() const { return fringe_w_; }

  std::vector<RuleId> vars(RuleId r) const;
  // Exclusive prefix sums: entry i covers items [0, i).
  std::vector<Length> prefix_len(RuleId r) const;
  std::vector<Length> prefix_count(RuleId r, Symbol c) const;
  bool inlined(RuleId item) const { return grammar().length(item) <= w_; }
  Length count(Symbol c) const;

  Symbol access(Position i, QueryStats* stats = nullptr) const;
  std::vector<Symbol> extract(Position i, Position j, QueryStats* stats = nullptr) const;
  std::vector<Symbol> decompress_rule(RuleId r, QueryStats* stats = nullptr) const;
  Length rank(Symbol c, Position i, QueryStats* stats = nullptr) const;
  Position select(Symbol c, Length k, QueryStats* stats = nullptr) const;

  std::size_t size_in_bytes() const;
  void save(BinaryWriter& out) const;
  static BalancedIndex load(BinaryReader& in, std::shared_ptr<const Grammar> g);

 private:
  friend class BalancedExtractor;

  std::size_t items(RuleId r) const { return begin_[r + 1] - begin_[r]; }
  std::size_t count_slot(RuleId r, Symbol c, std::size_t i) const {
    return begin_[r] * grammar().sigma + (c - 1) * items(r) + i;
  }
  // Largest i with prefix_[begin + i] < x.
  std::size_t find_position(RuleId r, Position x) const;
  std::size_t find_occurrence(RuleId r, Symbol c, Length k) const;
  Symbol fringe_symbol(RuleId r, bool right, Length k) const {
    return static_cast<Symbol>(fringes_[(2 * std::size_t{r} + right) * fringe_w_ + k]) + 1;
  }
  // Symbol at 1-based position x of a rule no longer than the fringe width.
  Symbol short_symbol(RuleId r, Position x) const { return fringe_symbol(r, false, x - 1); }
  void build_items();
  void build_fringes();
  void check_symbol(Symbol c) const;

  std::shared_ptr<const Grammar> grammar_;
  double epsilon_ = 0.5;
  std::uint32_t depth_ = 1;
  Length w_ = 1, fringe_w_ = 1;
  std::vector<std::uint64_t> begin_;  // item range per rule, size n + 1
  std::vector<RuleId> item_;
  std::vector<Length> prefix_;
  PackedArray counts_;  // exclusive per-character prefix counts
  PackedArray totals_;  // occurrences per rule and character
  PackedArray fringes_;
};

}  // namespace gcs

#endif  // GCS_BALANCED_HPP
