#include <algorithm>
#include <map>
#include <queue>
#include <unordered_map>
#include <utility>

#include "gcs/grammar.hpp"

namespace gcs {

namespace {

using PairKey = std::uint64_t;

PairKey key_of(RuleId a, RuleId b) { return (std::uint64_t(a) << 32) | b; }

std::uint32_t check_text(std::span<const Symbol> text, std::uint32_t sigma) {
  if (text.empty()) throw Error(ErrorCode::kEmptyInput, "cannot build a grammar for an empty text");
  const Symbol max_sym = *std::max_element(text.begin(), text.end());
  if (sigma == 0) sigma = max_sym;
  if (*std::min_element(text.begin(), text.end()) < 1 || max_sym > sigma)
    throw Error(ErrorCode::kInvalidSymbol, "text symbol outside [1..sigma]");
  return sigma;
}

// Pair rules are deduplicated so equal right-hand sides share one id.
class RuleTable {
 public:
  explicit RuleTable(std::vector<Rule>& rules) : rules_(rules) {}

  RuleId pair(RuleId l, RuleId r) {
    auto [it, inserted] = index_.try_emplace(key_of(l, r), static_cast<RuleId>(rules_.size()));
    if (inserted) rules_.push_back(Rule::pair(l, r, rules_[l].length + rules_[r].length));
    return it->second;
  }

 private:
  std::vector<Rule>& rules_;
  std::unordered_map<PairKey, RuleId> index_;
};

// Terminal rules first, one per symbol present, in symbol order.
std::vector<RuleId> add_terminals(std::span<const Symbol> text, std::uint32_t sigma,
                                  std::vector<Rule>& rules) {
  std::vector<RuleId> id(static_cast<std::size_t>(sigma) + 1, kNoRule);
  for (Symbol c : text) id[c] = 0;
  for (Symbol c = 1; c <= sigma; ++c) {
    if (id[c] == kNoRule) continue;
    id[c] = static_cast<RuleId>(rules.size());
    rules.push_back(Rule::terminal(c));
  }
  return id;
}

}  // namespace

Grammar build_grammar(std::span<const Symbol> text, std::uint32_t sigma) {
  sigma = check_text(text, sigma);
  std::vector<Rule> rules;
  const std::vector<RuleId> term = add_terminals(text, sigma, rules);

  const std::size_t len = text.size();
  constexpr std::uint32_t kNil = 0xffffffffu;
  std::vector<RuleId> seq(len);
  std::vector<std::uint32_t> prev(len), next(len);
  std::vector<char> alive(len, 1);
  for (std::size_t i = 0; i < len; ++i) {
    seq[i] = term[text[i]];
    prev[i] = i == 0 ? kNil : static_cast<std::uint32_t>(i - 1);
    next[i] = i + 1 == len ? kNil : static_cast<std::uint32_t>(i + 1);
  }

  // count = number of adjacent live positions holding the pair (overlaps
  // included); occurrences may hold stale positions, validated on use.
  std::unordered_map<PairKey, std::uint64_t> count;
  std::unordered_map<PairKey, std::vector<std::uint32_t>> occurrences;
  using Entry = std::pair<std::uint64_t, PairKey>;
  auto cmp = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);

  auto add = [&](std::uint32_t p) {
    const PairKey k = key_of(seq[p], seq[next[p]]);
    const std::uint64_t c = ++count[k];
    occurrences[k].push_back(p);
    if (c >= 2) heap.emplace(c, k);
  };
  auto remove = [&](std::uint32_t p) {
    const PairKey k = key_of(seq[p], seq[next[p]]);
    auto it = count.find(k);
    if (--it->second >= 2) heap.emplace(it->second, k);
  };

  for (std::uint32_t p = 0; p + 1 < len; ++p) add(p);

  RuleTable table(rules);
  while (!heap.empty()) {
    const auto [c, k] = heap.top();
    heap.pop();
    auto cit = count.find(k);
    if (cit == count.end() || cit->second != c || c < 2) continue;

    const RuleId a = static_cast<RuleId>(k >> 32);
    const RuleId b = static_cast<RuleId>(k & 0xffffffffu);
    std::vector<std::uint32_t> where = std::move(occurrences[k]);
    occurrences.erase(k);
    std::sort(where.begin(), where.end());
    const RuleId x = table.pair(a, b);
    for (std::uint32_t p : where) {
      if (!alive[p] || seq[p] != a) continue;
      const std::uint32_t q = next[p];
      if (q == kNil || seq[q] != b) continue;
      if (prev[p] != kNil) remove(prev[p]);
      remove(p);
      if (next[q] != kNil) remove(q);
      seq[p] = x;
      alive[q] = 0;
      next[p] = next[q];
      if (next[q] != kNil) prev[next[q]] = p;
      if (prev[p] != kNil) add(prev[p]);
      if (next[p] != kNil) add(p);
    }
    count.erase(k);
  }

  std::vector<RuleId> level;
  for (std::uint32_t p = 0; p != kNil; p = next[p]) level.push_back(seq[p]);
  while (level.size() > 1) {
    std::vector<RuleId> up;
    up.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) up.push_back(table.pair(level[i], level[i + 1]));
    if (level.size() % 2) up.push_back(level.back());
    level = std::move(up);
  }
  return make_grammar(std::move(rules), level.front(), sigma);
}

Grammar build_balanced_tree_grammar(std::span<const Symbol> text, std::uint32_t sigma) {
  sigma = check_text(text, sigma);
  std::vector<Rule> rules;
  const std::vector<RuleId> term = add_terminals(text, sigma, rules);
  RuleTable table(rules);

  // Bottom-up over the implicit halving tree: a range [lo, hi) splits at
  // lo + (hi - lo) / 2. Explicit stack, post-order.
  struct Frame {
    std::size_t lo, hi;
    bool expanded;
  };
  std::vector<Frame> stack{{0, text.size(), false}};
  std::vector<RuleId> results;
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.hi - f.lo == 1) {
      results.push_back(term[text[f.lo]]);
    } else if (!f.expanded) {
      const std::size_t mid = f.lo + (f.hi - f.lo) / 2;
      stack.push_back({f.lo, f.hi, true});
      stack.push_back({mid, f.hi, false});
      stack.push_back({f.lo, mid, false});
    } else {
      const RuleId r = results.back();
      results.pop_back();
      const RuleId l = results.back();
      results.pop_back();
      results.push_back(table.pair(l, r));
    }
  }
  return make_grammar(std::move(rules), results.front(), sigma);
}

}  // namespace gcs
