#include "gcs/rank_select.hpp"

#include <string>

#include "gcs/serialize.hpp"

namespace gcs {

namespace {

void check_symbol(const Grammar& g, Symbol c) {
  if (c < 1 || c > g.sigma)
    throw Error(ErrorCode::kInvalidSymbol, "symbol " + std::to_string(c) + " outside [1, " + std::to_string(g.sigma) + "]");
}

}  // namespace

RankIndex::RankIndex(std::shared_ptr<const HeavyForest> forest) : forest_(std::move(forest)) {
  const Grammar& g = grammar();
  const std::size_t n = g.size(), sigma = g.sigma;
  const unsigned width = bits_for(g.max_length());
  v_ = PackedArray(n * sigma, width);
  total_ = PackedArray(n * sigma, width);
  for (RuleId r = 0; r < n; ++r) {
    const Rule& rule = g[r];
    if (rule.is_terminal()) {
      v_.set(slot(r, rule.symbol), 1);
      total_.set(slot(r, rule.symbol), 1);
      continue;
    }
    const bool heavy_left = forest_->heavy_is_left(r);
    for (Symbol c = 1; c <= sigma; ++c) {
      const Length tl = total(rule.left, c), tr = total(rule.right, c);
      total_.set(slot(r, c), tl + tr);
      v_.set(slot(r, c), heavy_left ? v(rule.left, c) : tl + v(rule.right, c));
    }
  }
}

Length RankIndex::rank(Symbol c, Position i, QueryStats* stats) const {
  return rank_in(grammar().root, c, i, stats);
}

Length RankIndex::rank_in(RuleId r, Symbol c, Position i, QueryStats* stats) const {
  const Grammar& g = grammar();
  check_symbol(g, c);
  if (i > g.length(r))
    throw Error(ErrorCode::kPositionOutOfRange, "position " + std::to_string(i) + " beyond " + std::to_string(g.length(r)));
  if (i == 0) return 0;
  const HeavyForest& f = *forest_;
  Length acc = 0;
  RuleId cur = r;
  Position x = i;
  while (x != f.center(cur)) {
    const HeavyExit e = heavy_path_predecessor(f, cur, x, stats);
    // Everything left of the exit node, then the heavy child if it precedes
    // the light one.
    acc += v(cur, c) - v(e.node, c);
    if (!e.light_on_left) acc += total(f.heavy_child(e.node), c);
    if (stats) ++stats->light_transitions;
    cur = e.light;
    x = e.offset_in_light;
  }
  return acc + v(cur, c);
}

void RankIndex::save(BinaryWriter& out) const {
  v_.save(out);
  total_.save(out);
}

RankIndex RankIndex::load(BinaryReader& in, std::shared_ptr<const HeavyForest> forest) {
  RankIndex ix;
  ix.forest_ = std::move(forest);
  ix.v_ = PackedArray::load(in);
  ix.total_ = PackedArray::load(in);
  const std::size_t cells = ix.grammar().size() * ix.grammar().sigma;
  if (ix.v_.size() != cells || ix.total_.size() != cells) throw Error(ErrorCode::kCorruptIndex, "rank table size");
  return ix;
}

CharCounters char_counters(const Grammar& g, Symbol c) {
  const std::size_t n = g.size();
  CharCounters out{std::vector<Length>(n, 0), std::vector<Position>(n, 0)};
  for (RuleId r = 0; r < n; ++r) {
    const Rule& rule = g[r];
    if (rule.is_terminal()) {
      if (rule.symbol == c) out.occ[r] = out.center[r] = 1;
      continue;
    }
    const Length ol = out.occ[rule.left], orr = out.occ[rule.right];
    out.occ[r] = ol + orr;
    if (out.occ[r] == 0) continue;
    const bool take_left = ol > 0 && ol >= orr;
    out.center[r] = take_left ? out.center[rule.left] : g.length(rule.left) + out.center[rule.right];
  }
  return out;
}

SelectIndex::SelectIndex(std::shared_ptr<const Grammar> g) : grammar_(std::move(g)) {
  const Grammar& gr = *grammar_;
  const std::size_t n = gr.size();
  begin_.assign(gr.sigma + 1, 0);
  root_.assign(gr.sigma + 1, kNoRule);
  root_shift_.assign(gr.sigma + 1, 0);

  std::vector<RuleId> target(n);
  std::vector<Length> shift(n), occ(n);
  for (Symbol c = 1; c <= gr.sigma; ++c) {
    for (RuleId r = 0; r < n; ++r) {
      const Rule& rule = gr[r];
      target[r] = kNoRule;
      shift[r] = 0;
      occ[r] = 0;
      if (rule.is_terminal()) {
        if (rule.symbol != c) continue;
        target[r] = static_cast<RuleId>(occ_.size());
        occ[r] = 1;
        occ_.push_back(1);
        left_.push_back(kNoRule);
        right_.push_back(kNoRule);
        left_shift_.push_back(0);
        right_shift_.push_back(0);
        heavy_left_.push_back(1);
        center_.push_back(1);
        u_.push_back(1);
        continue;
      }
      const RuleId a = rule.left, b = rule.right;
      const Length len_a = gr.length(a);
      occ[r] = occ[a] + occ[b];
      if (occ[a] == 0 && occ[b] == 0) continue;
      if (occ[b] == 0) {
        target[r] = target[a];
        shift[r] = shift[a];
        continue;
      }
      if (occ[a] == 0) {
        target[r] = target[b];
        shift[r] = len_a + shift[b];
        continue;
      }
      const RuleId ta = target[a], tb = target[b];
      const Length sa = shift[a], sb = len_a + shift[b];
      const bool heavy_left = occ[a] >= occ[b];
      target[r] = static_cast<RuleId>(occ_.size());
      occ_.push_back(occ[r]);
      left_.push_back(ta);
      right_.push_back(tb);
      left_shift_.push_back(sa);
      right_shift_.push_back(sb);
      heavy_left_.push_back(heavy_left);
      center_.push_back(heavy_left ? center_[ta] : occ[a] + center_[tb]);
      u_.push_back(heavy_left ? sa + u_[ta] : sb + u_[tb]);
    }
    begin_[c] = occ_.size();
    root_[c] = target[gr.root];
    root_shift_[c] = shift[gr.root];
  }

  const std::size_t m = occ_.size();
  std::vector<RuleId> heavy(m, kNoRule);
  std::vector<Length> hang(m, 0), pos(m, 0);
  for (std::size_t v = 0; v < m; ++v) {
    if (left_[v] == kNoRule) continue;
    heavy[v] = heavy_left_[v] ? left_[v] : right_[v];
    hang[v] = heavy_left_[v] ? 0 : occ_[left_[v]];
    pos[v] = heavy_left_[v] ? left_shift_[v] : right_shift_[v];
  }
  jumps_ = HeavyPathJumps(heavy, hang, pos);
}

Length SelectIndex::count(Symbol c) const {
  check_symbol(grammar(), c);
  return root_[c] == kNoRule ? 0 : occ_[root_[c]];
}

Position SelectIndex::select(Symbol c, Length k, QueryStats* stats) const {
  const Length total = count(c);
  if (k < 1 || k > total)
    throw Error(ErrorCode::kOccurrenceOutOfRange,
                "occurrence " + std::to_string(k) + " of symbol " + std::to_string(c) + " (has " + std::to_string(total) + ")");
  RuleId cur = root_[c];
  Position pos = root_shift_[c];
  while (true) {
    if (k == center_[cur]) return pos + u_[cur];
    const auto stop = jumps_.descend(
        cur, [&](RuleId v, Length h) { return h < k && k <= h + occ_[v]; }, stats);
    cur = stop.node;
    k -= stop.hang;
    pos += stop.shift;
    if (k == center_[cur]) return pos + u_[cur];
    if (stats) ++stats->light_transitions;
    if (heavy_left_[cur]) {
      k -= occ_[left_[cur]];
      pos += right_shift_[cur];
      cur = right_[cur];
    } else {
      pos += left_shift_[cur];
      cur = left_[cur];
    }
  }
}

std::size_t SelectIndex::size_in_bytes() const {
  return (begin_.size() + root_.size() + root_shift_.size()) * 8 +
         occ_.size() * (sizeof(Length) * 5 + sizeof(RuleId) * 2 + 1) + jumps_.size_in_bytes();
}

void SelectIndex::save(BinaryWriter& out) const {
  out.vec(begin_);
  out.vec(root_);
  out.vec(root_shift_);
  out.vec(occ_);
  out.vec(left_);
  out.vec(right_);
  out.vec(left_shift_);
  out.vec(right_shift_);
  out.vec(heavy_left_);
  out.vec(center_);
  out.vec(u_);
  jumps_.save(out);
}

SelectIndex SelectIndex::load(BinaryReader& in, std::shared_ptr<const Grammar> g) {
  SelectIndex ix;
  ix.grammar_ = std::move(g);
  ix.begin_ = in.vec<std::uint64_t>();
  ix.root_ = in.vec<RuleId>();
  ix.root_shift_ = in.vec<Length>();
  ix.occ_ = in.vec<Length>();
  ix.left_ = in.vec<RuleId>();
  ix.right_ = in.vec<RuleId>();
  ix.left_shift_ = in.vec<Length>();
  ix.right_shift_ = in.vec<Length>();
  ix.heavy_left_ = in.vec<std::uint8_t>();
  ix.center_ = in.vec<Length>();
  ix.u_ = in.vec<Position>();
  ix.jumps_ = HeavyPathJumps::load(in);
  const std::size_t m = ix.occ_.size(), slots = ix.grammar_->sigma + std::size_t{1};
  const Length n_text = ix.grammar_->text_length();
  if (ix.begin_.size() != slots || ix.root_.size() != slots || ix.root_shift_.size() != slots ||
      ix.begin_.back() != m || ix.jumps_.size() != m)
    throw Error(ErrorCode::kCorruptIndex, "select table size");
  for (const auto* v : {&ix.left_shift_, &ix.right_shift_, &ix.center_, &ix.u_})
    if (v->size() != m) throw Error(ErrorCode::kCorruptIndex, "select table size");
  if (ix.left_.size() != m || ix.right_.size() != m || ix.heavy_left_.size() != m)
    throw Error(ErrorCode::kCorruptIndex, "select table size");
  for (std::size_t c = 1; c < slots; ++c) {
    if (ix.begin_[c] < ix.begin_[c - 1]) throw Error(ErrorCode::kCorruptIndex, "select block order");
    if (ix.root_[c] != kNoRule && (ix.root_[c] < ix.begin_[c - 1] || ix.root_[c] >= ix.begin_[c]))
      throw Error(ErrorCode::kCorruptIndex, "select root");
  }
  for (std::size_t v = 0; v < m; ++v) {
    const bool leaf = ix.left_[v] == kNoRule;
    if (leaf != (ix.right_[v] == kNoRule) || (!leaf && (ix.left_[v] >= v || ix.right_[v] >= v)) ||
        ix.occ_[v] == 0 || ix.occ_[v] > n_text || ix.center_[v] < 1 || ix.center_[v] > ix.occ_[v] ||
        ix.u_[v] < 1 || ix.u_[v] > n_text)
      throw Error(ErrorCode::kCorruptIndex, "select node");
    if (!leaf && ix.occ_[v] != ix.occ_[ix.left_[v]] + ix.occ_[ix.right_[v]])
      throw Error(ErrorCode::kCorruptIndex, "select node weight");
  }
  return ix;
}

RankSelectIndex::RankSelectIndex(std::shared_ptr<const HeavyForest> forest)
    : rank_(forest), select_(forest->grammar_ptr()) {}

void RankSelectIndex::save(BinaryWriter& out) const {
  rank_.save(out);
  select_.save(out);
}

RankSelectIndex RankSelectIndex::load(BinaryReader& in, std::shared_ptr<const HeavyForest> forest) {
  RankSelectIndex ix;
  ix.rank_ = RankIndex::load(in, forest);
  ix.select_ = SelectIndex::load(in, forest->grammar_ptr());
  return ix;
}

}  // namespace gcs
