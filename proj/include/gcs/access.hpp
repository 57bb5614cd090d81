#ifndef GCS_ACCESS_HPP
#define GCS_ACCESS_HPP

#include <memory>
#include <optional>
#include <vector>

#include "gcs/heavy_path.hpp"
#include "gcs/packed.hpp"

namespace gcs {

// A rule reachable from some rule X together with the 1-based position where
// its expansion starts inside expand(X).
struct JumpPointer {
  RuleId rule;
  Position start;
  friend bool operator==(const JumpPointer&, const JumpPointer&) = default;
};

// Symbols per machine word: max(1, floor(log_sigma N)).
Length chunk_width(Length text_length, std::uint32_t sigma);

// Random access and substring extraction in O(log N + m / log_sigma N)
// heavy-path steps plus word copies. Every rule carries its first and last w
// symbols (packed) and up to three jump pointers:
//   central: skips a run of short hanging children on both sides so that
//            decompressing a rule costs O(1 + |rule| / w) nodes;
//   left/right: skip along the heavy path past at most w symbols of
//            left-hanging (right-hanging) children.
class AccessIndex {
 public:
  AccessIndex() = default;
  explicit AccessIndex(std::shared_ptr<const HeavyForest> forest);

  const HeavyForest& forest() const { return *forest_; }
  const std::shared_ptr<const HeavyForest>& forest_ptr() const { return forest_; }
  const Grammar& grammar() const { return forest_->grammar(); }
  Length chunk() const { return w_; }

  std::vector<Symbol> left_fringe(RuleId r) const;
  std::vector<Symbol> right_fringe(RuleId r) const;
  std::optional<JumpPointer> central(RuleId r) const { return pointer(central_rule_, central_start_, r); }
  std::optional<JumpPointer> left_jump(RuleId r) const { return pointer(left_rule_, left_start_, r); }
  std::optional<JumpPointer> right_jump(RuleId r) const { return pointer(right_rule_, right_start_, r); }

  // expand(r), walking the virtual decompression tree.
  std::vector<Symbol> decompress_rule(RuleId r, QueryStats* stats = nullptr) const;
  // Node count of that tree without producing output.
  std::uint64_t decompression_nodes(RuleId r) const;

  // S[i..j], 1-based inclusive.
  std::vector<Symbol> extract(Position i, Position j, QueryStats* stats = nullptr) const;
  Symbol access(Position i, QueryStats* stats = nullptr) const;

  std::size_t size_in_bytes() const;
  void save(BinaryWriter& out) const;
  static AccessIndex load(BinaryReader& in, std::shared_ptr<const HeavyForest> forest);

 private:
  friend class Extractor;

  static std::optional<JumpPointer> pointer(const std::vector<RuleId>& rules,
                                            const std::vector<Position>& starts, RuleId r) {
    if (rules[r] == kNoRule) return std::nullopt;
    return JumpPointer{rules[r], starts[r]};
  }
  Symbol fringe_symbol(RuleId r, bool right, Length k) const {
    return static_cast<Symbol>(fringes_[(2 * std::size_t{r} + right) * w_ + k]) + 1;
  }
  void build_fringes();
  void build_central();
  void build_jumps();

  std::shared_ptr<const HeavyForest> forest_;
  Length w_ = 1;
  // Slot 2r holds the first min(w, |r|) symbols, slot 2r+1 the last ones.
  PackedArray fringes_;
  std::vector<RuleId> central_rule_, left_rule_, right_rule_;
  std::vector<Position> central_start_, left_start_, right_start_;
};

}  // namespace gcs

#endif  // GCS_ACCESS_HPP
