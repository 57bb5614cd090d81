#include <doctest.h>

#include <functional>
#include <sstream>

#include "corpus.hpp"
#include "gcs/grammar.hpp"
#include "gcs/grammar_io.hpp"

using namespace gcs;
using testing::from_string;

namespace {

// {A->a, B->b, X->AB, Y->XX}
Grammar abab() {
  return make_grammar({Rule::terminal(1), Rule::terminal(2), Rule::pair(0, 1, 0), Rule::pair(2, 2, 0)}, 3, 2);
}

std::size_t pair_rules(const Grammar& g) {
  std::size_t n = 0;
  for (const Rule& r : g.rules) n += !r.is_terminal();
  return n;
}

// Recursive expansion of a general grammar, written independently of the
// library code.
std::vector<Symbol> expand_general(const GeneralGrammar& g, std::uint32_t r) {
  std::vector<Symbol> out;
  for (const GeneralSymbol& s : g.rules[r]) {
    if (s.terminal) {
      out.push_back(s.value);
    } else {
      const auto sub = expand_general(g, s.value);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  }
  return out;
}

std::optional<ErrorCode> code_of(const Grammar& g) {
  auto err = validate(g);
  if (!err) return std::nullopt;
  return err->code;
}

}  // namespace

TEST_CASE("validate") {
  CHECK_FALSE(validate(make_grammar({Rule::terminal(1), Rule::terminal(2), Rule::pair(0, 1, 0)}, 2, 2)));

  Grammar self{{Rule::terminal(1), Rule::terminal(2), Rule::pair(2, 1, 3)}, 2, 2};
  CHECK(code_of(self) == ErrorCode::kCyclicRule);

  Grammar bad_len{{Rule::terminal(1), Rule::terminal(2), Rule::pair(0, 1, 3)}, 2, 2};
  CHECK(code_of(bad_len) == ErrorCode::kLengthMismatch);

  Grammar dangling{{Rule::terminal(1), Rule::pair(0, 7, 2)}, 1, 1};
  CHECK(code_of(dangling) == ErrorCode::kDanglingReference);

  Grammar bad_symbol{{Rule::terminal(3)}, 0, 2};
  CHECK(code_of(bad_symbol) == ErrorCode::kNotCNF);

  Grammar orphan{{Rule::terminal(1), Rule::terminal(2), Rule::pair(0, 0, 2)}, 2, 2};
  CHECK(code_of(orphan) == ErrorCode::kUnreachable);
  CHECK_FALSE(validate(orphan, false));

  CHECK_THROWS_AS(make_grammar({Rule::terminal(1), Rule::pair(1, 0, 0)}, 1, 1), Error);
}

TEST_CASE("expand_naive") {
  const Grammar g = abab();
  CHECK(expand_naive(g) == from_string("abab"));
  CHECK(expand_naive(g, 0) == from_string("a"));
  CHECK(g.text_length() == 4);
  CHECK(height(g) == 2);
}

TEST_CASE("a terminal root is allowed") {
  const Grammar g = build_grammar(from_string("a"));
  CHECK(g.size() == 1);
  CHECK(g[g.root].is_terminal());
  CHECK(expand_naive(g) == from_string("a"));
}

TEST_CASE("builder round trips") {
  const auto abra = from_string("abracadabra");
  const Grammar g = build_grammar(abra);
  CHECK(expand_naive(g) == abra);
  CHECK_FALSE(validate(g));
  CHECK(prune(g) == g);

  const Grammar ab = build_grammar(from_string("abab"));
  CHECK(expand_naive(ab) == from_string("abab"));
  CHECK(pair_rules(ab) <= 4);

  const Grammar a8 = build_grammar(testing::unary_text(8));
  CHECK(expand_naive(a8) == testing::unary_text(8));
  CHECK(pair_rules(a8) <= 3);

  for (const auto& s : testing::small_corpus(11, 300)) {
    CAPTURE(s.name);
    CAPTURE(s.text.size());
    const Grammar b = build_grammar(s.text, s.sigma);
    REQUIRE(expand_naive(b) == s.text);
    REQUIRE_FALSE(validate(b));
    const Grammar t = build_balanced_tree_grammar(s.text, s.sigma);
    REQUIRE(expand_naive(t) == s.text);
    REQUIRE_FALSE(validate(t));
  }
}

TEST_CASE("builder errors") {
  std::vector<Symbol> empty;
  CHECK_THROWS_AS(build_grammar(empty), Error);
  std::vector<Symbol> zero{1, 0};
  CHECK_THROWS_AS(build_grammar(zero), Error);
  std::vector<Symbol> big{1, 5};
  CHECK_THROWS_AS(build_grammar(big, 3), Error);
}

TEST_CASE("length recurrence holds at every rule") {
  testing::Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Grammar g = testing::random_grammar(3, 40, rng);
    for (const Rule& r : g.rules)
      if (!r.is_terminal()) REQUIRE(r.length == g.length(r.left) + g.length(r.right));
    REQUIRE(expand_naive(g).size() == g.text_length());
  }
}

TEST_CASE("prune") {
  Grammar g{{Rule::terminal(1), Rule::terminal(2), Rule::pair(0, 0, 2), Rule::pair(0, 1, 2)}, 3, 2};
  const Grammar p = prune(g);
  CHECK(p.size() == g.size() - 1);
  CHECK(expand_naive(p) == expand_naive(g));
  CHECK(prune(p) == p);
}

TEST_CASE("cnf_normalize") {
  using S = GeneralSymbol;
  SUBCASE("three-symbol rule becomes a chain") {
    // X -> A B C with A, B, C rules for a, b, c.
    GeneralGrammar gg{{{S::ref(1), S::ref(2), S::ref(3)}, {S::term(1)}, {S::term(2)}, {S::term(3)}}, 0, 3};
    const Grammar g = cnf_normalize(gg);
    CHECK(expand_naive(g) == from_string("abc"));
    const Rule& x = g[g.root];
    REQUIRE_FALSE(x.is_terminal());
    CHECK(g.length(x.left) == 1);
    CHECK(g.length(x.right) == 2);
    CHECK(pair_rules(g) == 2);
  }
  SUBCASE("CNF input is unchanged") {
    GeneralGrammar gg{{{S::ref(1), S::ref(2)}, {S::term(1)}, {S::term(2)}}, 0, 2};
    const Grammar g = cnf_normalize(gg);
    CHECK(expand_naive(g) == from_string("ab"));
    CHECK(g.size() == 3);
  }
  SUBCASE("cycles are rejected") {
    GeneralGrammar gg{{{S::ref(1), S::term(1)}, {S::ref(0)}}, 0, 1};
    try {
      cnf_normalize(gg);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kCyclicRule);
    }
  }
  SUBCASE("random general grammars keep their expansion") {
    testing::Rng rng(99);
    for (int t = 0; t < 200; ++t) {
      const std::uint32_t sigma = 1 + static_cast<std::uint32_t>(testing::uniform(rng, 0, 4));
      GeneralGrammar gg;
      gg.sigma = sigma;
      const std::size_t rules = 5;
      gg.rules.resize(rules);
      // Rule i refers only to rules with larger index, so rule 0 is the root.
      std::size_t total = 0;
      for (std::size_t i = 0; i < rules; ++i) {
        const std::size_t len = testing::uniform(rng, 1, 5);
        total += len;
        for (std::size_t k = 0; k < len; ++k) {
          if (i + 1 < rules && testing::uniform(rng, 0, 1))
            gg.rules[i].push_back(S::ref(static_cast<std::uint32_t>(testing::uniform(rng, i + 1, rules - 1))));
          else
            gg.rules[i].push_back(S::term(static_cast<Symbol>(testing::uniform(rng, 1, sigma))));
        }
      }
      const Grammar g = cnf_normalize(gg);
      REQUIRE(expand_naive(g) == expand_general(gg, 0));
      REQUIRE(g.size() <= 2 * total);
    }
  }
}

TEST_CASE("GCS1 text format") {
  const Grammar g = abab();
  std::stringstream ss;
  write_gcs1(ss, g);
  CHECK(read_gcs1(ss) == g);

  std::istringstream custom("GCS1 2 4 40\nT 7 1\nT 9 2\nP 20 7 9\nP 40 20 20\n");
  CHECK(expand_naive(read_gcs1(custom)) == from_string("abab"));

  auto code = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_gcs1(in);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  CHECK(code("GCS1 2 3 3\nT 1 1\nT 2 2\nP 3 3 2\n") == ErrorCode::kCyclicRule);
  CHECK(code("GCS1 2 3 3\nT 1 1\nT 2 2\nP 3 1 5\n") == ErrorCode::kDanglingReference);
  CHECK(code("GCS2 2 3 3\n") == ErrorCode::kInvalidGrammarFile);
  CHECK(code("GCS1 2 3 3\nT 1 1\nQ 2 2\n") == ErrorCode::kInvalidGrammarFile);
  CHECK_THROWS_AS(read_gcs1_file("/nonexistent/file.gcs"), Error);
}
