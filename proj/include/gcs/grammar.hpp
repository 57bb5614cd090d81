#ifndef GCS_GRAMMAR_HPP
#define GCS_GRAMMAR_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcs/error.hpp"
#include "gcs/types.hpp"

namespace gcs {

class BinaryWriter;
class BinaryReader;

enum class RuleKind : std::uint8_t { kTerminal = 0, kPair = 1 };

// A CNF rule: either R -> c or R -> left right. `length` is |R|, the size of
// the expansion; it is stored so that it can be checked.
struct Rule {
  RuleKind kind = RuleKind::kTerminal;
  RuleId left = kNoRule;
  RuleId right = kNoRule;
  Symbol symbol = 0;
  Length length = 1;

  static Rule terminal(Symbol c) { return Rule{RuleKind::kTerminal, kNoRule, kNoRule, c, 1}; }
  static Rule pair(RuleId l, RuleId r, Length len) { return Rule{RuleKind::kPair, l, r, 0, len}; }

  bool is_terminal() const { return kind == RuleKind::kTerminal; }
  friend bool operator==(const Rule&, const Rule&) = default;
};

// Straight-line program in Chomsky normal form. Terminal and pair rules share
// one id space; ids are positions in `rules`, which must be a topological
// order (children before parents). Grammars produced by the builders place
// the terminal rules first.
struct Grammar {
  std::vector<Rule> rules;
  RuleId root = 0;
  std::uint32_t sigma = 1;

  std::size_t size() const { return rules.size(); }
  const Rule& operator[](RuleId r) const { return rules[r]; }
  Length length(RuleId r) const { return rules[r].length; }
  Length text_length() const { return rules.empty() ? 0 : rules[root].length; }
  // Longest expansion of any rule, reachable or not.
  Length max_length() const;

  void save(BinaryWriter& out) const;
  static Grammar load(BinaryReader& in);

  friend bool operator==(const Grammar&, const Grammar&) = default;
};

// Builds a grammar from rules whose lengths are filled in here; throws on
// an invalid result.
Grammar make_grammar(std::vector<Rule> rules, RuleId root, std::uint32_t sigma);

struct ValidationError {
  ErrorCode code;
  RuleId rule;
  std::string message;
};

// Checks topological order, CNF shape, stored lengths and (optionally)
// reachability from the root. Returns the first violation found.
std::optional<ValidationError> validate(const Grammar& g, bool require_reachable = true);

// Throws Error with the first violation.
void require_valid(const Grammar& g, bool require_reachable = false);

// Full expansion of r by substitution. Iterative; used as a reference.
std::vector<Symbol> expand_naive(const Grammar& g, RuleId r);
inline std::vector<Symbol> expand_naive(const Grammar& g) { return expand_naive(g, g.root); }

// Drops rules unreachable from the root, keeping the relative order.
Grammar prune(const Grammar& g);

// Longest root-to-terminal distance, in edges.
std::uint32_t height(const Grammar& g);

// A general (non-CNF) grammar: every rule has a right-hand side of any
// positive length over terminals and rule references. No ordering required.
struct GeneralSymbol {
  bool terminal = false;
  std::uint32_t value = 0;  // symbol code or rule index

  static GeneralSymbol term(Symbol c) { return {true, c}; }
  static GeneralSymbol ref(std::uint32_t r) { return {false, r}; }
};

struct GeneralGrammar {
  std::vector<std::vector<GeneralSymbol>> rules;
  std::uint32_t root = 0;
  std::uint32_t sigma = 1;
};

// Binarizes right-hand sides as X -> A X', X' -> B C ...; single-symbol rules
// become aliases of their symbol. Output size is at most twice the total
// right-hand-side length.
Grammar cnf_normalize(const GeneralGrammar& g);

// Iterated most-frequent-pair replacement until no pair repeats, then a
// balanced binarization of what remains. sigma = 0 means max symbol in text.
Grammar build_grammar(std::span<const Symbol> text, std::uint32_t sigma = 0);

// Halving builder with shared identical subtrees: weight-balanced, height
// ceil(log2 N). Handy for exercising the balanced engine.
Grammar build_balanced_tree_grammar(std::span<const Symbol> text, std::uint32_t sigma = 0);

}  // namespace gcs

#endif  // GCS_GRAMMAR_HPP
