#include "gcs/balanced.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gcs/access.hpp"
#include "gcs/serialize.hpp"

namespace gcs {

std::uint32_t expansion_depth(Length text_length, double epsilon) {
  if (text_length < 4) return 1;
  const double d = std::floor(epsilon * std::log2(std::log2(static_cast<double>(text_length))));
  return d < 1 ? 1 : static_cast<std::uint32_t>(std::min(d, 16.0));
}

Length long_fringe_width(Length text_length, std::uint32_t sigma, double epsilon) {
  const Length w = chunk_width(text_length, sigma);
  if (text_length < 2) return w;
  const double f = std::ceil(std::pow(std::log2(static_cast<double>(text_length)), epsilon));
  return w * std::max<Length>(1, static_cast<Length>(f));
}

bool is_weight_balanced(const Grammar& g) {
  for (const Rule& r : g.rules) {
    if (r.is_terminal()) continue;
    const Length a = g.length(r.left), b = g.length(r.right);
    if (4 * std::min(a, b) < std::max(a, b)) return false;
  }
  return true;
}

BalancedIndex::BalancedIndex(std::shared_ptr<const Grammar> g, double epsilon)
    : BalancedIndex(g, epsilon, expansion_depth(g->text_length(), epsilon)) {}

BalancedIndex::BalancedIndex(std::shared_ptr<const Grammar> g, double epsilon, std::uint32_t depth)
    : grammar_(std::move(g)), epsilon_(epsilon), depth_(depth) {
  require_valid(*grammar_, false);
  if (!(epsilon > 0 && epsilon <= 1)) throw std::invalid_argument("epsilon must be in (0, 1]");
  if (depth < 1 || depth > 16) throw std::invalid_argument("expansion depth must be in [1, 16]");
  const Length n_text = grammar_->text_length();
  w_ = chunk_width(n_text, grammar_->sigma);
  fringe_w_ = long_fringe_width(n_text, grammar_->sigma, epsilon);
  build_items();
  build_fringes();
}

void BalancedIndex::build_items() {
  const Grammar& g = grammar();
  const std::size_t n = g.size(), sigma = g.sigma;
  const unsigned width = bits_for(g.max_length());

  totals_ = PackedArray(n * sigma, width);
  for (RuleId r = 0; r < n; ++r) {
    const Rule& rule = g[r];
    if (rule.is_terminal()) {
      totals_.set(std::size_t{r} * sigma + rule.symbol - 1, 1);
      continue;
    }
    for (std::size_t c = 0; c < sigma; ++c)
      totals_.set(r * sigma + c, totals_[rule.left * sigma + c] + totals_[rule.right * sigma + c]);
  }

  begin_.assign(n + 1, 0);
  std::vector<std::pair<RuleId, std::uint32_t>> stack;
  for (RuleId r = 0; r < n; ++r) {
    begin_[r] = item_.size();
    if (g[r].is_terminal()) continue;
    stack.assign({{r, 0}});
    while (!stack.empty()) {
      const auto [x, level] = stack.back();
      stack.pop_back();
      if (level == depth_ || g[x].is_terminal()) {
        item_.push_back(x);
        continue;
      }
      stack.push_back({g[x].right, level + 1});
      stack.push_back({g[x].left, level + 1});
    }
  }
  begin_[n] = item_.size();

  prefix_.assign(item_.size(), 0);
  counts_ = PackedArray(item_.size() * sigma, width);
  for (RuleId r = 0; r < n; ++r) {
    Length len = 0;
    for (std::size_t i = 0; i < items(r); ++i) {
      prefix_[begin_[r] + i] = len;
      len += g.length(item_[begin_[r] + i]);
    }
    for (Symbol c = 1; c <= sigma; ++c) {
      Length acc = 0;
      for (std::size_t i = 0; i < items(r); ++i) {
        counts_.set(count_slot(r, c, i), acc);
        acc += totals_[std::size_t{item_[begin_[r] + i]} * sigma + c - 1];
      }
    }
  }
}

void BalancedIndex::build_fringes() {
  const Grammar& g = grammar();
  const std::size_t n = g.size();
  const Length fw = fringe_w_;
  fringes_ = PackedArray(2 * n * fw, bits_for(g.sigma - 1));
  auto put = [&](RuleId r, bool right, Length k, Symbol c) {
    fringes_.set((2 * std::size_t{r} + right) * fw + k, c - 1);
  };
  for (RuleId r = 0; r < n; ++r) {
    const Rule& rule = g[r];
    if (rule.is_terminal()) {
      put(r, false, 0, rule.symbol);
      put(r, true, 0, rule.symbol);
      continue;
    }
    const Length fy = std::min(fw, g.length(rule.left)), fz = std::min(fw, g.length(rule.right));
    const Length fx = std::min(fw, rule.length);
    for (Length k = 0; k < fx; ++k)
      put(r, false, k, k < fy ? fringe_symbol(rule.left, false, k) : fringe_symbol(rule.right, false, k - fy));
    const Length from_y = fx > fz ? fx - fz : 0;
    for (Length k = 0; k < from_y; ++k) put(r, true, k, fringe_symbol(rule.left, true, fy - from_y + k));
    for (Length k = 0; k < fx - from_y; ++k)
      put(r, true, from_y + k, fringe_symbol(rule.right, true, fz - (fx - from_y) + k));
  }
}

std::vector<RuleId> BalancedIndex::vars(RuleId r) const {
  return {item_.begin() + begin_[r], item_.begin() + begin_[r + 1]};
}

std::vector<Length> BalancedIndex::prefix_len(RuleId r) const {
  return {prefix_.begin() + begin_[r], prefix_.begin() + begin_[r + 1]};
}

std::vector<Length> BalancedIndex::prefix_count(RuleId r, Symbol c) const {
  check_symbol(c);
  std::vector<Length> out(items(r));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = counts_[count_slot(r, c, i)];
  return out;
}

void BalancedIndex::check_symbol(Symbol c) const {
  if (c < 1 || c > grammar().sigma)
    throw Error(ErrorCode::kInvalidSymbol,
                "symbol " + std::to_string(c) + " outside [1, " + std::to_string(grammar().sigma) + "]");
}

Length BalancedIndex::count(Symbol c) const {
  check_symbol(c);
  return totals_[std::size_t{grammar().root} * grammar().sigma + c - 1];
}

std::size_t BalancedIndex::find_position(RuleId r, Position x) const {
  const auto first = prefix_.begin() + begin_[r], last = prefix_.begin() + begin_[r + 1];
  return std::partition_point(first, last, [x](Length p) { return p < x; }) - first - 1;
}

std::size_t BalancedIndex::find_occurrence(RuleId r, Symbol c, Length k) const {
  std::size_t lo = 0, len = items(r);
  const std::size_t base = count_slot(r, c, 0);
  while (len > 1) {
    const std::size_t half = len / 2;
    if (counts_[base + lo + half] < k) lo += half;
    len -= half;
  }
  return lo;
}

Symbol BalancedIndex::access(Position i, QueryStats* stats) const {
  const Grammar& g = grammar();
  if (i < 1 || i > g.text_length()) throw Error(ErrorCode::kPositionOutOfRange, "position " + std::to_string(i));
  RuleId cur = g.root;
  Position x = i;
  while (true) {
    if (stats) {
      ++stats->nodes_visited;
      ++stats->work;
    }
    if (g.length(cur) <= w_) return short_symbol(cur, x);
    const std::size_t k = find_position(cur, x);
    x -= prefix_[begin_[cur] + k];
    cur = item_[begin_[cur] + k];
  }
}

Length BalancedIndex::rank(Symbol c, Position i, QueryStats* stats) const {
  const Grammar& g = grammar();
  check_symbol(c);
  if (i > g.text_length()) throw Error(ErrorCode::kPositionOutOfRange, "position " + std::to_string(i));
  if (i == 0) return 0;
  const std::size_t sigma = g.sigma;
  RuleId cur = g.root;
  Position x = i;
  Length acc = 0;
  while (true) {
    if (stats) {
      ++stats->nodes_visited;
      ++stats->work;
    }
    if (x == g.length(cur)) return acc + totals_[std::size_t{cur} * sigma + c - 1];
    if (g.length(cur) <= w_) {
      for (Position p = 1; p <= x; ++p) acc += short_symbol(cur, p) == c;
      return acc;
    }
    const std::size_t k = find_position(cur, x);
    acc += counts_[count_slot(cur, c, k)];
    x -= prefix_[begin_[cur] + k];
    cur = item_[begin_[cur] + k];
  }
}

Position BalancedIndex::select(Symbol c, Length k, QueryStats* stats) const {
  const Grammar& g = grammar();
  const Length total = count(c);
  if (k < 1 || k > total)
    throw Error(ErrorCode::kOccurrenceOutOfRange,
                "occurrence " + std::to_string(k) + " of symbol " + std::to_string(c) + " (has " + std::to_string(total) + ")");
  RuleId cur = g.root;
  Position pos = 0;
  while (true) {
    if (stats) {
      ++stats->nodes_visited;
      ++stats->work;
    }
    if (g.length(cur) <= w_) {
      for (Position p = 1;; ++p)
        if (short_symbol(cur, p) == c && --k == 0) return pos + p;
    }
    const std::size_t i = find_occurrence(cur, c, k);
    k -= counts_[count_slot(cur, c, i)];
    pos += prefix_[begin_[cur] + i];
    cur = item_[begin_[cur] + i];
  }
}

class BalancedExtractor {
 public:
  BalancedExtractor(const BalancedIndex& ix, std::vector<Symbol>& out, QueryStats* stats)
      : ix_(ix), g_(ix.grammar()), fw_(ix.fringe_width()), out_(out), stats_(stats) {}

  void full(RuleId r) {
    std::vector<RuleId> stack{r};
    while (!stack.empty()) {
      const RuleId x = stack.back();
      stack.pop_back();
      if (stats_) {
        ++stats_->decompress_nodes;
        ++stats_->work;
      }
      const Length len = g_.length(x);
      if (len <= fw_) {
        for (Length k = 0; k < len; ++k) out_.push_back(ix_.fringe_symbol(x, false, k));
        continue;
      }
      for (std::size_t i = ix_.items(x); i-- > 0;) stack.push_back(ix_.item_[ix_.begin_[x] + i]);
    }
  }

  void range(RuleId cur, Position a, Position b) {
    while (true) {
      const Length len = g_.length(cur);
      if (a == 1 && b == len) return full(cur);
      if (b <= fw_ || len - a + 1 <= fw_) return copy(cur, a, b);
      visit();
      const std::size_t ia = ix_.find_position(cur, a), ib = ix_.find_position(cur, b);
      const std::size_t base = ix_.begin_[cur];
      if (ia == ib) {
        a -= ix_.prefix_[base + ia];
        b -= ix_.prefix_[base + ia];
        cur = ix_.item_[base + ia];
        continue;
      }
      suffix(ix_.item_[base + ia], a - ix_.prefix_[base + ia]);
      for (std::size_t i = ia + 1; i < ib; ++i) full(ix_.item_[base + i]);
      prefix(ix_.item_[base + ib], b - ix_.prefix_[base + ib]);
      return;
    }
  }

 private:
  void visit() {
    if (stats_) {
      ++stats_->nodes_visited;
      ++stats_->work;
    }
  }

  // cur[a..b], where the range lies within one of the long fringes.
  void copy(RuleId cur, Position a, Position b) {
    if (stats_) ++stats_->work;
    const Length len = g_.length(cur);
    if (b <= fw_) {
      for (Position k = a; k <= b; ++k) out_.push_back(ix_.fringe_symbol(cur, false, k - 1));
      return;
    }
    const Position first = len - std::min(fw_, len) + 1;
    for (Position k = a; k <= b; ++k) out_.push_back(ix_.fringe_symbol(cur, true, k - first));
  }

  void prefix(RuleId cur, Position b) {
    while (true) {
      const Length len = g_.length(cur);
      if (b == len) return full(cur);
      if (b <= fw_) return copy(cur, 1, b);
      visit();
      const std::size_t ib = ix_.find_position(cur, b), base = ix_.begin_[cur];
      for (std::size_t i = 0; i < ib; ++i) full(ix_.item_[base + i]);
      b -= ix_.prefix_[base + ib];
      cur = ix_.item_[base + ib];
    }
  }

  void suffix(RuleId cur, Position a) {
    std::vector<RuleId> later;
    while (true) {
      const Length len = g_.length(cur);
      if (a == 1) {
        full(cur);
        break;
      }
      if (len - a + 1 <= fw_) {
        copy(cur, a, len);
        break;
      }
      visit();
      const std::size_t ia = ix_.find_position(cur, a), base = ix_.begin_[cur];
      for (std::size_t i = ix_.items(cur); --i > ia;) later.push_back(ix_.item_[base + i]);
      a -= ix_.prefix_[base + ia];
      cur = ix_.item_[base + ia];
    }
    for (auto it = later.rbegin(); it != later.rend(); ++it) full(*it);
  }

  const BalancedIndex& ix_;
  const Grammar& g_;
  Length fw_;
  std::vector<Symbol>& out_;
  QueryStats* stats_;
};

std::vector<Symbol> BalancedIndex::extract(Position i, Position j, QueryStats* stats) const {
  const Length n = grammar().text_length();
  if (i < 1 || i > j || j > n)
    throw Error(ErrorCode::kPositionOutOfRange,
                "[" + std::to_string(i) + ", " + std::to_string(j) + "] outside [1, " + std::to_string(n) + "]");
  std::vector<Symbol> out;
  out.reserve(j - i + 1);
  BalancedExtractor(*this, out, stats).range(grammar().root, i, j);
  return out;
}

std::vector<Symbol> BalancedIndex::decompress_rule(RuleId r, QueryStats* stats) const {
  std::vector<Symbol> out;
  out.reserve(grammar().length(r));
  BalancedExtractor(*this, out, stats).full(r);
  return out;
}

std::size_t BalancedIndex::size_in_bytes() const {
  return begin_.size() * 8 + item_.size() * sizeof(RuleId) + prefix_.size() * sizeof(Length) +
         counts_.size_in_bytes() + totals_.size_in_bytes() + fringes_.size_in_bytes();
}

void BalancedIndex::save(BinaryWriter& out) const {
  out.u64(std::bit_cast<std::uint64_t>(epsilon_));
  out.u64(depth_);
  out.vec(begin_);
  out.vec(item_);
  out.vec(prefix_);
  counts_.save(out);
  totals_.save(out);
  fringes_.save(out);
}

BalancedIndex BalancedIndex::load(BinaryReader& in, std::shared_ptr<const Grammar> g) {
  BalancedIndex ix;
  ix.grammar_ = std::move(g);
  ix.epsilon_ = std::bit_cast<double>(in.u64());
  if (!(ix.epsilon_ > 0 && ix.epsilon_ <= 1)) throw Error(ErrorCode::kCorruptIndex, "epsilon");
  const Grammar& gr = ix.grammar();
  const Length n_text = gr.text_length();
  ix.depth_ = static_cast<std::uint32_t>(in.u64());
  if (ix.depth_ < 1 || ix.depth_ > 16) throw Error(ErrorCode::kCorruptIndex, "expansion depth");
  ix.w_ = chunk_width(n_text, gr.sigma);
  ix.fringe_w_ = long_fringe_width(n_text, gr.sigma, ix.epsilon_);
  ix.begin_ = in.vec<std::uint64_t>();
  ix.item_ = in.vec<RuleId>();
  ix.prefix_ = in.vec<Length>();
  ix.counts_ = PackedArray::load(in);
  ix.totals_ = PackedArray::load(in);
  ix.fringes_ = PackedArray::load(in);
  const std::size_t n = gr.size(), m = ix.item_.size();
  if (ix.begin_.size() != n + 1 || ix.begin_.front() != 0 || ix.begin_.back() != m || ix.prefix_.size() != m ||
      ix.counts_.size() != m * gr.sigma || ix.totals_.size() != n * gr.sigma ||
      ix.fringes_.size() != 2 * n * ix.fringe_w_)
    throw Error(ErrorCode::kCorruptIndex, "balanced table size");
  for (RuleId r = 0; r < n; ++r) {
    if (ix.begin_[r] > ix.begin_[r + 1]) throw Error(ErrorCode::kCorruptIndex, "balanced item range");
    if (!gr[r].is_terminal() && ix.items(r) == 0) throw Error(ErrorCode::kCorruptIndex, "balanced item range");
    Length len = 0;
    for (std::size_t i = 0; i < ix.items(r); ++i) {
      const RuleId it = ix.item_[ix.begin_[r] + i];
      if (it >= r || ix.prefix_[ix.begin_[r] + i] != len) throw Error(ErrorCode::kCorruptIndex, "balanced item");
      len += gr.length(it);
    }
    if (ix.items(r) && len != gr.length(r)) throw Error(ErrorCode::kCorruptIndex, "balanced item lengths");
  }
  return ix;
}

}  // namespace gcs
