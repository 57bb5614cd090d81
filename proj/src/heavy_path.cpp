#include "gcs/heavy_path.hpp"

#include <algorithm>

#include "gcs/serialize.hpp"

namespace gcs {

HeavyPathJumps::HeavyPathJumps(const std::vector<RuleId>& heavy, const std::vector<Length>& hang,
                               const std::vector<Length>& shift) {
  const std::size_t n = heavy.size();
  depth_.assign(n, 0);
  std::uint32_t max_depth = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (heavy[v] == kNoRule) continue;
    depth_[v] = depth_[heavy[v]] + 1;
    max_depth = std::max(max_depth, depth_[v]);
  }
  levels_ = static_cast<std::uint32_t>(std::bit_width(max_depth));
  anc_.assign(levels_ * n, kNoRule);
  hang_.assign(levels_ * n, 0);
  if (!shift.empty()) shift_.assign(levels_ * n, 0);
  if (levels_ == 0) return;

  for (std::size_t v = 0; v < n; ++v) {
    anc_[v] = heavy[v];
    hang_[v] = heavy[v] == kNoRule ? 0 : hang[v];
    if (!shift_.empty()) shift_[v] = heavy[v] == kNoRule ? 0 : shift[v];
  }
  for (std::uint32_t k = 1; k < levels_; ++k) {
    const std::size_t cur = k * n, prev = (k - 1) * n;
    for (std::size_t v = 0; v < n; ++v) {
      if (depth_[v] < (std::uint32_t{1} << k)) continue;
      const RuleId mid = anc_[prev + v];
      anc_[cur + v] = anc_[prev + mid];
      hang_[cur + v] = hang_[prev + v] + hang_[prev + mid];
      if (!shift_.empty()) shift_[cur + v] = shift_[prev + v] + shift_[prev + mid];
    }
  }
}

std::size_t HeavyPathJumps::size_in_bytes() const {
  return depth_.size() * sizeof(std::uint32_t) + anc_.size() * sizeof(RuleId) +
         (hang_.size() + shift_.size()) * sizeof(Length);
}

void HeavyPathJumps::save(BinaryWriter& out) const {
  out.u64(levels_);
  out.vec(depth_);
  out.vec(anc_);
  out.vec(hang_);
  out.vec(shift_);
}

HeavyPathJumps HeavyPathJumps::load(BinaryReader& in) {
  HeavyPathJumps j;
  j.levels_ = static_cast<std::uint32_t>(in.u64());
  j.depth_ = in.vec<std::uint32_t>();
  j.anc_ = in.vec<RuleId>();
  j.hang_ = in.vec<Length>();
  j.shift_ = in.vec<Length>();
  const std::size_t n = j.depth_.size();
  if (j.levels_ > 32 || j.anc_.size() != j.levels_ * n || j.hang_.size() != j.anc_.size() ||
      (!j.shift_.empty() && j.shift_.size() != j.anc_.size()))
    throw Error(ErrorCode::kCorruptIndex, "jump table shape");
  for (std::size_t v = 0; v < n; ++v) {
    if (j.depth_[v] != 0 && (j.levels_ == 0 || j.anc_[v] >= v))
      throw Error(ErrorCode::kCorruptIndex, "jump table order");
    if (j.depth_[v] != 0 && j.depth_[v] >= (std::uint64_t{1} << j.levels_))
      throw Error(ErrorCode::kCorruptIndex, "jump table depth");
  }
  for (std::uint32_t k = 0; k < j.levels_; ++k)
    for (std::size_t v = 0; v < n; ++v)
      if (j.depth_[v] >= (std::uint64_t{1} << k) && j.anc_[k * n + v] >= n)
        throw Error(ErrorCode::kCorruptIndex, "jump table entry");
  return j;
}

HeavyForest::HeavyForest(std::shared_ptr<const Grammar> g) : grammar_(std::move(g)) {
  const Grammar& gr = *grammar_;
  require_valid(gr, false);
  const std::size_t n = gr.size();
  heavy_left_.assign(n, 1);
  center_.assign(n, 1);
  leaf_.assign(n, kNoRule);
  std::vector<RuleId> heavy(n, kNoRule);
  std::vector<Length> hang(n, 0);
  for (RuleId r = 0; r < n; ++r) {
    const Rule& rule = gr[r];
    if (rule.is_terminal()) {
      leaf_[r] = r;
      continue;
    }
    const Length l = gr.length(rule.left);
    const bool left = l >= gr.length(rule.right);
    heavy_left_[r] = left;
    heavy[r] = left ? rule.left : rule.right;
    hang[r] = left ? 0 : l;
    center_[r] = hang[r] + center_[heavy[r]];
    leaf_[r] = leaf_[heavy[r]];
  }
  jumps_ = HeavyPathJumps(heavy, hang);
}

HeavyPathJumps::Stop HeavyForest::deepest_covering(RuleId r, Position a, Position b,
                                                   QueryStats* stats) const {
  const Grammar& g = *grammar_;
  return jumps_.descend(
      r, [&](RuleId u, Length off) { return off < a && b <= off + g.length(u); }, stats);
}

std::size_t HeavyForest::size_in_bytes() const {
  return heavy_left_.size() + center_.size() * sizeof(Position) + leaf_.size() * sizeof(RuleId) +
         jumps_.size_in_bytes();
}

void HeavyForest::save(BinaryWriter& out) const {
  out.vec(heavy_left_);
  out.vec(center_);
  out.vec(leaf_);
  jumps_.save(out);
}

HeavyForest HeavyForest::load(BinaryReader& in, std::shared_ptr<const Grammar> g) {
  HeavyForest f;
  f.grammar_ = std::move(g);
  f.heavy_left_ = in.vec<std::uint8_t>();
  f.center_ = in.vec<Position>();
  f.leaf_ = in.vec<RuleId>();
  f.jumps_ = HeavyPathJumps::load(in);
  const std::size_t n = f.grammar_->size();
  if (f.heavy_left_.size() != n || f.center_.size() != n || f.leaf_.size() != n ||
      f.jumps_.size() != n)
    throw Error(ErrorCode::kCorruptIndex, "heavy forest size");
  for (RuleId r = 0; r < n; ++r) {
    if (f.leaf_[r] >= n || f.center_[r] < 1 || f.center_[r] > f.grammar_->length(r))
      throw Error(ErrorCode::kCorruptIndex, "heavy forest entry");
  }
  return f;
}

HeavyExit heavy_path_predecessor(const HeavyForest& f, RuleId r, Position x, QueryStats* stats) {
  const Grammar& g = f.grammar();
  const auto stop = f.deepest_covering(r, x, x, stats);
  const RuleId p = stop.node;
  const Rule& rule = g[p];
  HeavyExit e{};
  e.step = f.jumps().depth(r) - f.jumps().depth(p);
  e.node = p;
  e.node_offset = stop.hang;
  e.light_on_left = !f.heavy_is_left(p);
  e.light = f.light_child(p);
  e.light_start = stop.hang + 1 + (e.light_on_left ? 0 : g.length(rule.left));
  e.offset_in_light = x - e.light_start + 1;
  return e;
}

std::vector<Triplet> triplet_search(const HeavyForest& f, RuleId r, Position x, QueryStats* stats) {
  const Grammar& g = f.grammar();
  if (x < 1 || x > g.length(r))
    throw Error(ErrorCode::kPositionOutOfRange, "position " + std::to_string(x));
  std::vector<Triplet> out;
  RuleId cur = r;
  while (x != f.center(cur)) {
    const HeavyExit e = heavy_path_predecessor(f, cur, x, stats);
    out.push_back({e.light, e.light_start, e.light_start + g.length(e.light) - 1});
    if (stats) ++stats->light_transitions;
    cur = e.light;
    x = e.offset_in_light;
  }
  if (!g[cur].is_terminal() || out.empty()) out.push_back({f.leaf(cur), x, x});
  return out;
}

}  // namespace gcs
