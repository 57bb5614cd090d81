#include "gcs/access.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "gcs/serialize.hpp"

namespace gcs {

Length chunk_width(Length text_length, std::uint32_t sigma) {
  if (text_length < 2) return 1;
  if (sigma <= 2) return static_cast<Length>(std::bit_width(text_length) - 1);
  Length w = 0;
  for (unsigned __int128 p = sigma; p <= text_length; p *= sigma) ++w;
  return std::max<Length>(1, w);
}

AccessIndex::AccessIndex(std::shared_ptr<const HeavyForest> forest) : forest_(std::move(forest)) {
  w_ = chunk_width(grammar().text_length(), grammar().sigma);
  build_fringes();
  build_central();
  build_jumps();
}

void AccessIndex::build_fringes() {
  const Grammar& g = grammar();
  const std::size_t n = g.size();
  fringes_ = PackedArray(2 * n * w_, bits_for(g.sigma - 1));
  auto put = [&](RuleId r, bool right, Length k, Symbol c) {
    fringes_.set((2 * std::size_t{r} + right) * w_ + k, c - 1);
  };
  for (RuleId r = 0; r < n; ++r) {
    const Rule& rule = g[r];
    if (rule.is_terminal()) {
      put(r, false, 0, rule.symbol);
      put(r, true, 0, rule.symbol);
      continue;
    }
    const Length ly = g.length(rule.left), lz = g.length(rule.right);
    const Length fy = std::min(w_, ly), fz = std::min(w_, lz);
    const Length fx = std::min(w_, rule.length);
    // Left fringe: prefix of Y, then prefix of Z when Y is short.
    for (Length k = 0; k < fx; ++k)
      put(r, false, k, k < fy ? fringe_symbol(rule.left, false, k) : fringe_symbol(rule.right, false, k - fy));
    // Right fringe: suffix of Y (when Z is short), then suffix of Z.
    const Length from_y = fx > fz ? fx - fz : 0;
    for (Length k = 0; k < from_y; ++k) put(r, true, k, fringe_symbol(rule.left, true, fy - from_y + k));
    for (Length k = 0; k < fx - from_y; ++k)
      put(r, true, from_y + k, fringe_symbol(rule.right, true, fz - (fx - from_y) + k));
  }
}

void AccessIndex::build_central() {
  const Grammar& g = grammar();
  const std::size_t n = g.size();
  central_rule_.assign(n, kNoRule);
  central_start_.assign(n, 0);
  for (RuleId r = 0; r < n; ++r) {
    const Rule& rule = g[r];
    if (rule.is_terminal() || rule.length < 2 * w_) continue;
    const Length ly = g.length(rule.left), lz = g.length(rule.right);
    if (ly >= w_ && lz >= w_) continue;
    Length cl = ly < w_ ? ly : 0;
    Length cr = lz < w_ ? lz : 0;
    RuleId cur = ly >= w_ ? rule.left : rule.right;
    while (!g[cur].is_terminal()) {
      const RuleId u = g[cur].left, v = g[cur].right;
      const Length lu = g.length(u), lv = g.length(v);
      if (lu >= w_ && lv >= w_) break;
      if (lu < w_ && cl + lu <= w_) {
        cl += lu;
        cur = v;
      } else if (lv < w_ && cr + lv <= w_) {
        cr += lv;
        cur = u;
      } else {
        break;
      }
    }
    central_rule_[r] = cur;
    central_start_[r] = cl + 1;
  }
}

void AccessIndex::build_jumps() {
  const Grammar& g = grammar();
  const HeavyForest& f = *forest_;
  const std::size_t n = g.size();
  // next_hang[side][x]: first node on x's heavy path (x included) whose light
  // child hangs on that side; lets the walks below skip the other side.
  std::vector<RuleId> next_hang[2] = {std::vector<RuleId>(n, kNoRule), std::vector<RuleId>(n, kNoRule)};
  for (RuleId r = 0; r < n; ++r) {
    if (g[r].is_terminal()) continue;
    const bool light_left = !f.heavy_is_left(r);
    const RuleId h = f.heavy_child(r);
    next_hang[0][r] = light_left ? r : next_hang[0][h];
    next_hang[1][r] = light_left ? next_hang[1][h] : r;
  }

  left_rule_.assign(n, kNoRule);
  right_rule_.assign(n, kNoRule);
  left_start_.assign(n, 0);
  right_start_.assign(n, 0);
  for (int side = 0; side < 2; ++side) {
    for (RuleId r = 0; r < n; ++r) {
      if (g[r].is_terminal()) continue;
      Length c = 0;
      RuleId stop = kNoRule;
      for (RuleId x = next_hang[side][r]; x != kNoRule; x = next_hang[side][f.heavy_child(x)]) {
        const Length q = g.length(f.light_child(x));
        if (c + q > w_) {
          stop = x;
          break;
        }
        c += q;
      }
      if (stop == kNoRule || stop == r) continue;
      if (side == 0) {
        left_rule_[r] = stop;
        left_start_[r] = c + 1;
      } else {
        right_rule_[r] = stop;
        right_start_[r] = g.length(r) - c - g.length(stop) + 1;
      }
    }
  }
}

std::vector<Symbol> AccessIndex::left_fringe(RuleId r) const {
  std::vector<Symbol> out(std::min(w_, grammar().length(r)));
  for (Length k = 0; k < out.size(); ++k) out[k] = fringe_symbol(r, false, k);
  return out;
}

std::vector<Symbol> AccessIndex::right_fringe(RuleId r) const {
  std::vector<Symbol> out(std::min(w_, grammar().length(r)));
  for (Length k = 0; k < out.size(); ++k) out[k] = fringe_symbol(r, true, k);
  return out;
}

// Emits pieces of expansions into `out` (or only counts when out is null).
class Extractor {
 public:
  Extractor(const AccessIndex& ix, std::vector<Symbol>* out, QueryStats* stats)
      : ix_(ix), g_(ix.grammar()), f_(ix.forest()), w_(ix.chunk()), out_(out), stats_(stats) {}

  std::uint64_t nodes() const { return nodes_; }

  // r[a..b] with b <= min(w, |r|).
  void copy_left(RuleId r, Position a, Position b) {
    unit();
    if (out_)
      for (Position k = a; k <= b; ++k) out_->push_back(ix_.fringe_symbol(r, false, k - 1));
  }

  // r[a..b] with |r| - a < w.
  void copy_right(RuleId r, Position a, Position b) {
    unit();
    const Length len = g_.length(r);
    const Position first = len - std::min(w_, len) + 1;
    if (out_)
      for (Position k = a; k <= b; ++k) out_->push_back(ix_.fringe_symbol(r, true, k - first));
  }

  void emit_symbol(RuleId terminal) {
    unit();
    if (out_) out_->push_back(g_[terminal].symbol);
  }

  void full(RuleId r) {
    struct Item {
      RuleId rule;
      Length suffix;  // > 0: copy the last `suffix` symbols of `rule` instead
    };
    std::vector<Item> stack{{r, 0}};
    while (!stack.empty()) {
      const Item it = stack.back();
      stack.pop_back();
      const Length len = g_.length(it.rule);
      if (it.suffix) {
        emit_fringe_right(it.rule, len - it.suffix + 1, len);
        continue;
      }
      ++nodes_;
      if (stats_) {
        ++stats_->decompress_nodes;
        ++stats_->work;
      }
      if (len <= 2 * w_) {
        emit_fringe(it.rule, 1, std::min(w_, len));
        if (len > w_) emit_fringe_right(it.rule, w_ + 1, len);
        continue;
      }
      if (auto c = ix_.central(it.rule)) {
        const Length after = len - (c->start - 1) - g_.length(c->rule);
        if (after) stack.push_back({it.rule, after});
        stack.push_back({c->rule, 0});
        if (c->start > 1) emit_fringe(it.rule, 1, c->start - 1);
        continue;
      }
      stack.push_back({g_[it.rule].right, 0});
      stack.push_back({g_[it.rule].left, 0});
    }
  }

  // r[1..b]; returns light transitions taken.
  std::uint64_t prefix(RuleId cur, Position b) {
    std::uint64_t t = 0;
    while (true) {
      const Length len = g_.length(cur);
      if (b == len) {
        full(cur);
        return t;
      }
      if (b <= w_) {
        copy_left(cur, 1, b);
        return t;
      }
      const auto stop = f_.deepest_covering(cur, b, b, stats_);
      walk_left(cur, stop.hang);
      const RuleId p = stop.node;
      if (g_[p].is_terminal()) {
        emit_symbol(p);
        return t;
      }
      const Position bp = b - stop.hang;
      const Length ly = g_.length(g_[p].left);
      ++t;
      if (bp <= ly) {
        cur = g_[p].left;
        b = bp;
      } else {
        full(g_[p].left);
        cur = g_[p].right;
        b = bp - ly;
      }
    }
  }

  // r[a..|r|]; returns light transitions taken.
  std::uint64_t suffix(RuleId cur, Position a) {
    std::uint64_t t = 0;
    std::vector<Deferred> later;
    while (true) {
      const Length len = g_.length(cur);
      if (a == 1) {
        full(cur);
        break;
      }
      if (len - a + 1 <= w_) {
        copy_right(cur, a, len);
        break;
      }
      const auto stop = f_.deepest_covering(cur, a, a, stats_);
      const RuleId p = stop.node;
      walk_right(cur, len - stop.hang - g_.length(p), later);
      if (g_[p].is_terminal()) {
        emit_symbol(p);
        break;
      }
      const Position ap = a - stop.hang;
      const Length ly = g_.length(g_[p].left);
      ++t;
      if (ap <= ly) {
        later.push_back({g_[p].right, 0});
        cur = g_[p].left;
        a = ap;
      } else {
        cur = g_[p].right;
        a = ap - ly;
      }
    }
    for (auto it = later.rbegin(); it != later.rend(); ++it) {
      if (it->suffix) {
        const Length len = g_.length(it->rule);
        copy_right(it->rule, len - it->suffix + 1, len);
      } else {
        full(it->rule);
      }
    }
    return t;
  }

  void range(RuleId cur, Position a, Position b) {
    std::uint64_t common = 0, left = 0, right = 0;
    while (true) {
      const Length len = g_.length(cur);
      if (a == 1 && b == len) {
        full(cur);
        break;
      }
      if (b <= w_) {
        copy_left(cur, a, b);
        break;
      }
      if (len - a + 1 <= w_) {
        copy_right(cur, a, b);
        break;
      }
      const auto stop = f_.deepest_covering(cur, a, b, stats_);
      const RuleId p = stop.node;
      if (g_[p].is_terminal()) {
        emit_symbol(p);
        break;
      }
      const Position ap = a - stop.hang, bp = b - stop.hang;
      const RuleId y = g_[p].left, z = g_[p].right;
      const Length ly = g_.length(y);
      if (bp <= ly || ap > ly) {
        ++common;
        const bool into_left = bp <= ly;
        cur = into_left ? y : z;
        a = into_left ? ap : ap - ly;
        b = into_left ? bp : bp - ly;
        continue;
      }
      const bool heavy_left = f_.heavy_is_left(p);
      left = !heavy_left + suffix(y, ap);
      right = heavy_left + prefix(z, bp - ly);
      break;
    }
    if (stats_) stats_->light_transitions = std::max(stats_->light_transitions, common + std::max(left, right));
  }

 private:
  struct Deferred {
    RuleId rule;
    Length suffix;  // > 0: last `suffix` symbols of `rule`; 0: all of it
  };

  void unit() {
    if (stats_) ++stats_->work;
  }

  // Part of a decompression node: not counted separately.
  void emit_fringe(RuleId r, Position a, Position b) {
    if (out_)
      for (Position k = a; k <= b; ++k) out_->push_back(ix_.fringe_symbol(r, false, k - 1));
  }
  void emit_fringe_right(RuleId r, Position a, Position b) {
    if (!out_) return;
    const Length len = g_.length(r);
    const Position first = len - std::min(w_, len) + 1;
    for (Position k = a; k <= b; ++k) out_->push_back(ix_.fringe_symbol(r, true, k - first));
  }

  // Emits x[1..target], where target is the offset of a node on x's heavy
  // path, i.e. everything hanging to the left of the path down to it.
  void walk_left(RuleId x, Length target) {
    Length done = 0;
    while (done < target) {
      const Length rem = target - done;
      if (rem <= w_) {
        copy_left(x, 1, rem);
        return;
      }
      if (auto j = ix_.left_jump(x)) {
        unit();
        if (j->start > 1) copy_left(x, 1, j->start - 1);
        done += j->start - 1;
        x = j->rule;
        continue;
      }
      // No pointer and more than w symbols to go: x = Q H with |Q| > w.
      if (f_.heavy_is_left(x) || g_.length(g_[x].left) <= w_)
        throw std::logic_error("left walk: missing jump pointer");
      full(g_[x].left);
      done += g_.length(g_[x].left);
      x = g_[x].right;
    }
  }

  // Mirror of walk_left for the last `target` symbols of x; pieces are
  // queued top-down and emitted later in reverse.
  void walk_right(RuleId x, Length target, std::vector<Deferred>& later) {
    Length done = 0;
    while (done < target) {
      const Length rem = target - done;
      if (rem <= w_) {
        later.push_back({x, rem});
        return;
      }
      if (auto j = ix_.right_jump(x)) {
        unit();
        const Length after = g_.length(x) - (j->start - 1) - g_.length(j->rule);
        if (after) later.push_back({x, after});
        done += after;
        x = j->rule;
        continue;
      }
      if (!f_.heavy_is_left(x) || g_.length(g_[x].right) <= w_)
        throw std::logic_error("right walk: missing jump pointer");
      later.push_back({g_[x].right, 0});
      done += g_.length(g_[x].right);
      x = g_[x].left;
    }
  }

  const AccessIndex& ix_;
  const Grammar& g_;
  const HeavyForest& f_;
  Length w_;
  std::vector<Symbol>* out_;
  QueryStats* stats_;
  std::uint64_t nodes_ = 0;
};

std::vector<Symbol> AccessIndex::decompress_rule(RuleId r, QueryStats* stats) const {
  std::vector<Symbol> out;
  out.reserve(grammar().length(r));
  Extractor(*this, &out, stats).full(r);
  return out;
}

std::uint64_t AccessIndex::decompression_nodes(RuleId r) const {
  Extractor e(*this, nullptr, nullptr);
  e.full(r);
  return e.nodes();
}

std::vector<Symbol> AccessIndex::extract(Position i, Position j, QueryStats* stats) const {
  const Length n = grammar().text_length();
  if (i < 1 || i > j || j > n)
    throw Error(ErrorCode::kPositionOutOfRange,
                "[" + std::to_string(i) + ", " + std::to_string(j) + "] outside [1, " + std::to_string(n) + "]");
  std::vector<Symbol> out;
  out.reserve(j - i + 1);
  Extractor(*this, &out, stats).range(grammar().root, i, j);
  return out;
}

Symbol AccessIndex::access(Position i, QueryStats* stats) const {
  const auto trace = triplet_search(forest(), grammar().root, i, stats);
  if (stats) ++stats->work;
  return grammar()[trace.back().rule].symbol;
}

std::size_t AccessIndex::size_in_bytes() const {
  return fringes_.size_in_bytes() +
         (central_rule_.size() + left_rule_.size() + right_rule_.size()) * (sizeof(RuleId) + sizeof(Position));
}

void AccessIndex::save(BinaryWriter& out) const {
  out.u64(w_);
  fringes_.save(out);
  out.vec(central_rule_);
  out.vec(central_start_);
  out.vec(left_rule_);
  out.vec(left_start_);
  out.vec(right_rule_);
  out.vec(right_start_);
}

AccessIndex AccessIndex::load(BinaryReader& in, std::shared_ptr<const HeavyForest> forest) {
  AccessIndex ix;
  ix.forest_ = std::move(forest);
  ix.w_ = in.u64();
  ix.fringes_ = PackedArray::load(in);
  ix.central_rule_ = in.vec<RuleId>();
  ix.central_start_ = in.vec<Position>();
  ix.left_rule_ = in.vec<RuleId>();
  ix.left_start_ = in.vec<Position>();
  ix.right_rule_ = in.vec<RuleId>();
  ix.right_start_ = in.vec<Position>();
  const Grammar& g = ix.grammar();
  const std::size_t n = g.size();
  if (ix.w_ != chunk_width(g.text_length(), g.sigma) || ix.fringes_.size() != 2 * n * ix.w_)
    throw Error(ErrorCode::kCorruptIndex, "fringe shape");
  for (const auto* v : {&ix.central_rule_, &ix.left_rule_, &ix.right_rule_})
    if (v->size() != n) throw Error(ErrorCode::kCorruptIndex, "pointer table size");
  for (const auto* v : {&ix.central_start_, &ix.left_start_, &ix.right_start_})
    if (v->size() != n) throw Error(ErrorCode::kCorruptIndex, "pointer table size");
  for (RuleId r = 0; r < n; ++r) {
    for (auto [rule, start] : {std::pair{ix.central_rule_[r], ix.central_start_[r]},
                               std::pair{ix.left_rule_[r], ix.left_start_[r]},
                               std::pair{ix.right_rule_[r], ix.right_start_[r]}}) {
      if (rule == kNoRule) continue;
      if (rule >= r || start < 1 || start - 1 + g.length(rule) > g.length(r))
        throw Error(ErrorCode::kCorruptIndex, "jump pointer");
    }
  }
  return ix;
}

}  // namespace gcs
