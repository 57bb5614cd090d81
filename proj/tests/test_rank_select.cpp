#include <doctest.h>

#include <bit>

#include "corpus.hpp"
#include "gcs/rank_select.hpp"
#include "gcs/serialize.hpp"

using namespace gcs;

namespace {

std::shared_ptr<const HeavyForest> forest_of(Grammar g) {
  return std::make_shared<const HeavyForest>(std::make_shared<const Grammar>(std::move(g)));
}

Length count(const std::vector<Symbol>& t, Symbol c, std::size_t upto) {
  Length n = 0;
  for (std::size_t i = 0; i < upto; ++i) n += t[i] == c;
  return n;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoError;
}

}  // namespace

TEST_CASE("rank counters on a small grammar") {
  // {A->a, B->b, X->AB, Y->XX}
  auto f = forest_of(make_grammar({Rule::terminal(1), Rule::terminal(2), Rule::pair(0, 1, 0), Rule::pair(2, 2, 0)}, 3, 2));
  RankIndex rk(f);
  CHECK(rk.v(3, 1) == 1);
  CHECK(rk.v(3, 2) == 0);
  CHECK(rk.v(0, 1) == 1);
  CHECK(rk.v(0, 2) == 0);
  CHECK(rk.total(3, 2) == 2);

  const CharCounters b = char_counters(f->grammar(), 2);
  CHECK(b.occ[3] == 2);
  CHECK(b.occ[2] == 1);
  CHECK(b.center[2] == 2);
}

TEST_CASE("rank counters match naive counts") {
  testing::Rng rng(17);
  for (int t = 0; t < 40; ++t) {
    const std::uint32_t sigma = 1 + t % 5;
    auto f = forest_of(testing::random_grammar(sigma, 50, rng));
    RankIndex rk(f);
    const Grammar& g = f->grammar();
    for (RuleId r = 0; r < g.size(); ++r) {
      const auto text = expand_naive(g, r);
      Length sum = 0;
      for (Symbol c = 1; c <= sigma; ++c) {
        REQUIRE(rk.v(r, c) == count(text, c, f->center(r)));
        REQUIRE(rk.v(r, c) <= rk.total(r, c));
        REQUIRE(rk.total(r, c) == count(text, c, text.size()));
        sum += rk.v(r, c);
      }
      REQUIRE(sum == f->center(r));
    }
  }
}

TEST_CASE("select counters point at the character") {
  testing::Rng rng(18);
  for (int t = 0; t < 40; ++t) {
    const std::uint32_t sigma = 1 + t % 4;
    const Grammar g = testing::random_grammar(sigma, 50, rng);
    for (Symbol c = 1; c <= sigma; ++c) {
      const CharCounters cc = char_counters(g, c);
      for (RuleId r = 0; r < g.size(); ++r) {
        const auto text = expand_naive(g, r);
        REQUIRE(cc.occ[r] == count(text, c, text.size()));
        if (cc.occ[r] == 0) continue;
        REQUIRE(text[cc.center[r] - 1] == c);
      }
    }
  }
}

TEST_CASE("abracadabra") {
  auto f = forest_of(build_grammar(testing::from_string("abracadabra")));
  RankSelectIndex rs(f);
  CHECK(rs.rank(1, 5) == 2);
  CHECK(rs.rank(1, 11) == 5);
  CHECK(rs.rank(1, 0) == 0);
  CHECK(rs.select(1, 1) == 1);
  CHECK(rs.select(1, 3) == 6);
  CHECK(rs.select(1, 5) == 11);
  CHECK(rs.selects().count(1) == 5);
}

TEST_CASE("exhaustive rank/select with inverse laws") {
  for (const auto& s : testing::small_corpus(51, 300)) {
    CAPTURE(s.name);
    auto f = forest_of(s.name == "versioned" ? build_grammar(s.text, s.sigma) : build_balanced_tree_grammar(s.text, s.sigma));
    RankSelectIndex rs(f);
    const Length n = s.text.size();
    const auto bound = static_cast<std::uint64_t>(std::bit_width(n) - 1);
    for (Position i = 0; i <= n; ++i) {
      Length sum = 0;
      for (Symbol c = 1; c <= s.sigma; ++c) {
        QueryStats st;
        const Length r = rs.rank(c, i, &st);
        REQUIRE(r == count(s.text, c, i));
        REQUIRE(st.light_transitions <= bound);
        sum += r;
      }
      REQUIRE(sum == i);
      if (i > 0) REQUIRE(rs.select(s.text[i - 1], rs.rank(s.text[i - 1], i)) == i);
    }
    for (Symbol c = 1; c <= s.sigma; ++c) {
      const Length total = count(s.text, c, n);
      REQUIRE(rs.selects().count(c) == total);
      for (Length k = 1; k <= total; ++k) {
        QueryStats st;
        const Position p = rs.select(c, k, &st);
        REQUIRE(s.text[p - 1] == c);
        REQUIRE(rs.rank(c, p) == k);
        REQUIRE(st.light_transitions <= bound);
      }
      REQUIRE(code_of([&] { rs.select(c, total + 1); }) == ErrorCode::kOccurrenceOutOfRange);
    }
  }
}

TEST_CASE("errors") {
  auto f = forest_of(build_grammar(testing::from_string("abab"), 3));
  RankSelectIndex rs(f);
  CHECK(code_of([&] { rs.rank(1, 5); }) == ErrorCode::kPositionOutOfRange);
  CHECK(code_of([&] { rs.rank(4, 1); }) == ErrorCode::kInvalidSymbol);
  CHECK(code_of([&] { rs.rank(0, 1); }) == ErrorCode::kInvalidSymbol);
  CHECK(code_of([&] { rs.select(3, 1); }) == ErrorCode::kOccurrenceOutOfRange);
  CHECK(code_of([&] { rs.select(1, 0); }) == ErrorCode::kOccurrenceOutOfRange);
  CHECK(rs.selects().dag_size(3) == 0);
}

TEST_CASE("rank/select round trip") {
  testing::Rng rng(19);
  const auto text = testing::versioned_text(60, 8, 4, 3, rng);
  auto f = forest_of(build_grammar(text, 4));
  RankSelectIndex rs(f);
  BinaryWriter w;
  rs.save(w);
  const std::string bytes = w.take();
  BinaryReader r(bytes.data(), bytes.size());
  const RankSelectIndex back = RankSelectIndex::load(r, f);
  CHECK(r.at_end());
  for (Symbol c = 1; c <= 4; ++c) {
    for (Position i = 0; i <= text.size(); i += 7) REQUIRE(back.rank(c, i) == rs.rank(c, i));
    for (Length k = 1; k <= rs.selects().count(c); k += 5) REQUIRE(back.select(c, k) == rs.select(c, k));
  }
}
