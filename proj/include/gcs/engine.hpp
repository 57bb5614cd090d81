#ifndef GCS_ENGINE_HPP
#define GCS_ENGINE_HPP

#include <memory>
#include <string>
#include <vector>

#include "gcs/access.hpp"
#include "gcs/balanced.hpp"
#include "gcs/path_count.hpp"
#include "gcs/rank_select.hpp"

namespace gcs {

// Common query surface of the two string engines.
class TextIndex {
 public:
  virtual ~TextIndex() = default;

  virtual EngineKind kind() const = 0;
  virtual const Grammar& grammar() const = 0;
  Length length() const { return grammar().text_length(); }
  std::uint32_t sigma() const { return grammar().sigma; }

  virtual Symbol access(Position i, QueryStats* stats = nullptr) const = 0;
  virtual std::vector<Symbol> extract(Position i, Position j, QueryStats* stats = nullptr) const = 0;
  virtual Length rank(Symbol c, Position i, QueryStats* stats = nullptr) const = 0;
  virtual Position select(Symbol c, Length k, QueryStats* stats = nullptr) const = 0;

  virtual std::size_t size_in_bytes() const = 0;
  // Everything after the grammar.
  virtual void save(BinaryWriter& out) const = 0;
};

class UnbalancedIndex : public TextIndex {
 public:
  explicit UnbalancedIndex(std::shared_ptr<const Grammar> g);
  UnbalancedIndex(std::shared_ptr<const HeavyForest> forest, AccessIndex access, RankSelectIndex rs);

  EngineKind kind() const override { return EngineKind::kUnbalanced; }
  const Grammar& grammar() const override { return forest_->grammar(); }
  const HeavyForest& forest() const { return *forest_; }
  const AccessIndex& access_index() const { return access_; }
  const RankSelectIndex& rank_select() const { return rs_; }

  Symbol access(Position i, QueryStats* stats = nullptr) const override { return access_.access(i, stats); }
  std::vector<Symbol> extract(Position i, Position j, QueryStats* stats = nullptr) const override {
    return access_.extract(i, j, stats);
  }
  Length rank(Symbol c, Position i, QueryStats* stats = nullptr) const override { return rs_.rank(c, i, stats); }
  Position select(Symbol c, Length k, QueryStats* stats = nullptr) const override { return rs_.select(c, k, stats); }

  std::size_t size_in_bytes() const override;
  void save(BinaryWriter& out) const override;
  static std::unique_ptr<UnbalancedIndex> load(BinaryReader& in, std::shared_ptr<const Grammar> g);

 private:
  std::shared_ptr<const HeavyForest> forest_;
  AccessIndex access_;
  RankSelectIndex rs_;
};

class BalancedEngine : public TextIndex {
 public:
  explicit BalancedEngine(BalancedIndex ix) : ix_(std::move(ix)) {}
  BalancedEngine(std::shared_ptr<const Grammar> g, double epsilon) : ix_(std::move(g), epsilon) {}

  EngineKind kind() const override { return EngineKind::kBalanced; }
  const Grammar& grammar() const override { return ix_.grammar(); }
  const BalancedIndex& index() const { return ix_; }

  Symbol access(Position i, QueryStats* stats = nullptr) const override { return ix_.access(i, stats); }
  std::vector<Symbol> extract(Position i, Position j, QueryStats* stats = nullptr) const override {
    return ix_.extract(i, j, stats);
  }
  Length rank(Symbol c, Position i, QueryStats* stats = nullptr) const override { return ix_.rank(c, i, stats); }
  Position select(Symbol c, Length k, QueryStats* stats = nullptr) const override { return ix_.select(c, k, stats); }

  std::size_t size_in_bytes() const override { return ix_.size_in_bytes(); }
  void save(BinaryWriter& out) const override { ix_.save(out); }

 private:
  BalancedIndex ix_;
};

std::unique_ptr<TextIndex> build_index(std::shared_ptr<const Grammar> g, EngineKind kind, double epsilon = 0.5);

// Contents of an index file. Exactly one of `text` and `paths` is set.
struct IndexFile {
  EngineKind kind = EngineKind::kUnbalanced;
  // Byte for each symbol code (code k is alphabet[k - 1]); empty when
  // symbols are plain decimal codes.
  std::string alphabet;
  std::shared_ptr<const TextIndex> text;
  std::shared_ptr<const PathCountIndex> paths;

  const Grammar& grammar() const { return text ? text->grammar() : paths->grammar(); }
};

std::string serialize_index(const IndexFile& f);
// Verifies the checksum before decoding anything else.
IndexFile deserialize_index(const std::string& bytes);
void save_index(const IndexFile& f, const std::string& path);
IndexFile load_index(const std::string& path);

std::string_view engine_name(EngineKind kind);

}  // namespace gcs

#endif  // GCS_ENGINE_HPP
