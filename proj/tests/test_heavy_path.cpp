#include <doctest.h>

#include <bit>

#include "corpus.hpp"
#include "gcs/heavy_path.hpp"
#include "gcs/serialize.hpp"

using namespace gcs;

namespace {

std::shared_ptr<const HeavyForest> forest_of(Grammar g) {
  return std::make_shared<const HeavyForest>(std::make_shared<const Grammar>(std::move(g)));
}

// Walks the heavy path one step at a time.
RuleId slow_deepest(const Grammar& g, const HeavyForest& f, RuleId r, Position a, Position b, Length& off) {
  off = 0;
  RuleId cur = r;
  while (!g[cur].is_terminal()) {
    const RuleId h = f.heavy_child(cur);
    const Length shift = f.heavy_is_left(cur) ? 0 : g.length(g[cur].left);
    if (!(off + shift < a && b <= off + shift + g.length(h))) break;
    off += shift;
    cur = h;
  }
  return cur;
}

}  // namespace

TEST_CASE("heavy child, center and leaf on a small grammar") {
  // {A->a, B->b, X->AB, Y->XX}: ties go left, so center(Y) = 1.
  auto f = forest_of(make_grammar({Rule::terminal(1), Rule::terminal(2), Rule::pair(0, 1, 0), Rule::pair(2, 2, 0)}, 3, 2));
  CHECK(f->heavy_is_left(3));
  CHECK(f->heavy_child(2) == 0);
  CHECK(f->light_child(2) == 1);
  CHECK(f->center(3) == 1);
  CHECK(f->leaf(3) == 0);

  // Z -> B X: the heavy child is X on the right, center(Z) = 1 + center(X).
  auto f2 = forest_of(make_grammar({Rule::terminal(1), Rule::terminal(2), Rule::pair(0, 1, 0), Rule::pair(1, 2, 0)}, 3, 2));
  CHECK_FALSE(f2->heavy_is_left(3));
  CHECK(f2->center(3) == 2);
}

TEST_CASE("structural invariants on random grammars") {
  testing::Rng rng(3);
  for (int t = 0; t < 60; ++t) {
    auto f = forest_of(testing::random_grammar(1 + t % 4, 60, rng));
    const Grammar& g = f->grammar();
    const auto text_of = [&](RuleId r) { return expand_naive(g, r); };
    for (RuleId r = 0; r < g.size(); ++r) {
      const Rule& rule = g[r];
      REQUIRE(g[f->leaf(r)].is_terminal());
      REQUIRE(text_of(r)[f->center(r) - 1] == g[f->leaf(r)].symbol);
      if (rule.is_terminal()) continue;
      REQUIRE(2 * g.length(f->light_child(r)) <= g.length(r));
      REQUIRE(g.length(f->heavy_child(r)) >= g.length(f->light_child(r)));
    }
  }
}

TEST_CASE("jump-table search agrees with a step-by-step walk") {
  testing::Rng rng(4);
  for (int t = 0; t < 40; ++t) {
    auto f = forest_of(testing::random_grammar(2, 80, rng));
    const Grammar& g = f->grammar();
    for (int q = 0; q < 200; ++q) {
      const auto r = static_cast<RuleId>(testing::uniform(rng, 0, g.size() - 1));
      Position a = testing::uniform(rng, 1, g.length(r)), b = testing::uniform(rng, 1, g.length(r));
      if (a > b) std::swap(a, b);
      Length off = 0;
      const RuleId expect = slow_deepest(g, *f, r, a, b, off);
      const auto stop = f->deepest_covering(r, a, b);
      REQUIRE(stop.node == expect);
      REQUIRE(stop.hang == off);
    }
  }
}

TEST_CASE("triplet search identity and light-transition bound") {
  testing::Rng rng(8);
  for (const auto& s : testing::small_corpus(21, 256)) {
    auto f = forest_of(build_grammar(s.text, s.sigma));
    const Grammar& g = f->grammar();
    const Length n = g.text_length();
    const auto bound = static_cast<std::uint64_t>(std::bit_width(n) - 1);
    for (Position x = 1; x <= n; ++x) {
      QueryStats st;
      const auto trace = triplet_search(*f, g.root, x, &st);
      Position sum = 0;
      for (const auto& tr : trace) sum += tr.start - 1;
      REQUIRE(sum + 1 == x);
      REQUIRE(g[trace.back().rule].is_terminal());
      REQUIRE(g[trace.back().rule].symbol == s.text[x - 1]);
      REQUIRE(st.light_transitions <= bound);
    }
  }
  auto f = forest_of(build_grammar(testing::from_string("abc")));
  CHECK_THROWS_AS(triplet_search(*f, f->grammar().root, 4), Error);
  CHECK_THROWS_AS(triplet_search(*f, f->grammar().root, 0), Error);
}

TEST_CASE("heavy forest round trip") {
  testing::Rng rng(2);
  auto g = std::make_shared<const Grammar>(testing::random_grammar(3, 50, rng));
  HeavyForest f(g);
  BinaryWriter w;
  f.save(w);
  const std::string bytes = w.take();
  BinaryReader r(bytes.data(), bytes.size());
  const HeavyForest back = HeavyForest::load(r, g);
  for (RuleId x = 0; x < g->size(); ++x) {
    REQUIRE(back.center(x) == f.center(x));
    REQUIRE(back.heavy_child(x) == f.heavy_child(x));
    REQUIRE(back.deepest_covering(x, 1, 1).node == f.deepest_covering(x, 1, 1).node);
  }
}
