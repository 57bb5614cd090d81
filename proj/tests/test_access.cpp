#include <doctest.h>

#include <bit>
#include <cmath>

#include "corpus.hpp"
#include "gcs/access.hpp"
#include "gcs/serialize.hpp"

using namespace gcs;

namespace {

AccessIndex index_of(Grammar g) {
  return AccessIndex(std::make_shared<const HeavyForest>(std::make_shared<const Grammar>(std::move(g))));
}

std::vector<Symbol> slice(const std::vector<Symbol>& t, Position a, Position b) {
  return {t.begin() + (a - 1), t.begin() + b};
}

// Offset of `target` on the heavy path of r, or -1.
long long heavy_offset(const HeavyForest& f, RuleId r, RuleId target) {
  const Grammar& g = f.grammar();
  long long off = 0;
  for (RuleId cur = r;; cur = f.heavy_child(cur)) {
    if (cur == target) return off;
    if (g[cur].is_terminal()) return -1;
    if (!f.heavy_is_left(cur)) off += static_cast<long long>(g.length(g[cur].left));
  }
}

}  // namespace

TEST_CASE("chunk width") {
  CHECK(chunk_width(16, 2) == 4);
  CHECK(chunk_width(1'000'000, 4) == 9);
  CHECK(chunk_width(1'000'000, 26) == 4);
  CHECK(chunk_width(1000, 1) == 9);
  CHECK(chunk_width(1, 2) == 1);
  CHECK(chunk_width(3, 26) == 1);
  CHECK(chunk_width(26, 26) == 1);
  CHECK(chunk_width(676, 26) == 2);
  CHECK(chunk_width(675, 26) == 1);
}

TEST_CASE("fringes and pointers satisfy their definitions") {
  testing::Rng rng(12);
  for (int t = 0; t < 40; ++t) {
    const auto ix = index_of(t % 2 ? testing::random_grammar(1 + t % 3, 70, rng)
                                   : build_grammar(testing::versioned_text(40, 6, 2 + t % 3, 2, rng)));
    const Grammar& g = ix.grammar();
    const Length w = ix.chunk();
    for (RuleId r = 0; r < g.size(); ++r) {
      const auto text = expand_naive(g, r);
      const Length len = text.size(), k = std::min(w, len);
      REQUIRE(ix.left_fringe(r) == slice(text, 1, k));
      REQUIRE(ix.right_fringe(r) == slice(text, len - k + 1, len));

      if (auto c = ix.central(r)) {
        REQUIRE(len >= 2 * w);
        const Length wl = g.length(c->rule);
        REQUIRE(c->rule < r);
        REQUIRE(c->start - 1 <= w);
        REQUIRE(len - (c->start - 1) - wl <= w);
        REQUIRE(slice(text, c->start, c->start + wl - 1) == expand_naive(g, c->rule));
      }
      if (auto j = ix.left_jump(r)) {
        REQUIRE(j->start - 1 <= w);
        REQUIRE(heavy_offset(ix.forest(), r, j->rule) == static_cast<long long>(j->start - 1));
        REQUIRE_FALSE(ix.forest().heavy_is_left(j->rule));
        REQUIRE(j->start - 1 + g.length(g[j->rule].left) > w);
      }
      if (auto j = ix.right_jump(r)) {
        const Length after = len - (j->start - 1) - g.length(j->rule);
        REQUIRE(after <= w);
        REQUIRE(heavy_offset(ix.forest(), r, j->rule) == static_cast<long long>(j->start - 1));
        REQUIRE(ix.forest().heavy_is_left(j->rule));
        REQUIRE(after + g.length(g[j->rule].right) > w);
      }
    }
  }
}

TEST_CASE("rule decompression: output and node bound") {
  testing::Rng rng(13);
  for (const auto& s : testing::small_corpus(31, 400)) {
    const auto ix = index_of(build_grammar(s.text, s.sigma));
    const Grammar& g = ix.grammar();
    for (RuleId r = 0; r < g.size(); ++r) {
      QueryStats st;
      REQUIRE(ix.decompress_rule(r, &st) == expand_naive(g, r));
      const double bound = 8.0 * (1.0 + static_cast<double>(g.length(r)) / static_cast<double>(ix.chunk()));
      REQUIRE(static_cast<double>(st.decompress_nodes) <= bound);
      REQUIRE(ix.decompression_nodes(r) == st.decompress_nodes);
    }
  }
}

TEST_CASE("extract and access agree with the text") {
  const auto abra = testing::from_string("abracadabra");
  const auto ix = index_of(build_grammar(abra));
  CHECK(ix.extract(3, 5) == testing::from_string("rac"));
  CHECK(ix.extract(1, 11) == abra);
  CHECK(ix.access(5) == 3);

  for (const auto& s : testing::small_corpus(41, 120)) {
    const auto ux = index_of(build_grammar(s.text, s.sigma));
    const Length n = s.text.size();
    const double lg = std::log2(static_cast<double>(std::max<Length>(n, 2)));
    const double ln = std::log2(static_cast<double>(std::max<std::size_t>(ux.grammar().size(), 2)));
    for (Position i = 1; i <= n; ++i) {
      REQUIRE(ux.access(i) == s.text[i - 1]);
      for (Position j = i; j <= n; ++j) {
        QueryStats st;
        REQUIRE(ux.extract(i, j, &st) == slice(s.text, i, j));
        const double m = static_cast<double>(j - i + 1);
        REQUIRE(static_cast<double>(st.work) <= 8.0 * (lg * ln + m / static_cast<double>(ux.chunk()) + 1.0));
        REQUIRE(st.light_transitions <= static_cast<std::uint64_t>(std::bit_width(n) - 1));
      }
    }
  }
}

TEST_CASE("extract on deep grammars") {
  testing::Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const auto ix = index_of(testing::random_grammar(2 + t % 3, 200, rng));
    const auto text = expand_naive(ix.grammar());
    const Length n = text.size();
    for (int q = 0; q < 300; ++q) {
      Position i = testing::uniform(rng, 1, n), j = testing::uniform(rng, 1, n);
      if (i > j) std::swap(i, j);
      REQUIRE(ix.extract(i, j) == slice(text, i, j));
    }
  }
}

TEST_CASE("range errors") {
  const auto ix = index_of(build_grammar(testing::from_string("abc")));
  auto code = [&](Position i, Position j) {
    try {
      ix.extract(i, j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  CHECK(code(0, 1) == ErrorCode::kPositionOutOfRange);
  CHECK(code(2, 1) == ErrorCode::kPositionOutOfRange);
  CHECK(code(1, 4) == ErrorCode::kPositionOutOfRange);
  CHECK_THROWS_AS(ix.access(4), Error);
}

TEST_CASE("access index round trip") {
  testing::Rng rng(15);
  auto g = std::make_shared<const Grammar>(build_grammar(testing::versioned_text(50, 10, 4, 3, rng)));
  auto f = std::make_shared<const HeavyForest>(g);
  AccessIndex ix(f);
  BinaryWriter w;
  ix.save(w);
  const std::string bytes = w.take();
  BinaryReader r(bytes.data(), bytes.size());
  const AccessIndex back = AccessIndex::load(r, f);
  CHECK(r.at_end());
  const Length n = g->text_length();
  CHECK(back.extract(1, n) == ix.extract(1, n));
  for (RuleId x = 0; x < g->size(); ++x) {
    REQUIRE(back.central(x) == ix.central(x));
    REQUIRE(back.left_jump(x) == ix.left_jump(x));
    REQUIRE(back.right_jump(x) == ix.right_jump(x));
  }
}
