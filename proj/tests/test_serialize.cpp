#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "corpus.hpp"
#include "gcs/engine.hpp"

using namespace gcs;

namespace {

IndexFile text_file(const std::vector<Symbol>& text, EngineKind kind) {
  IndexFile f;
  f.kind = kind;
  f.text = build_index(std::make_shared<const Grammar>(build_grammar(text)), kind, 0.5);
  return f;
}

void same_answers(const TextIndex& a, const TextIndex& b, testing::Rng& rng) {
  REQUIRE(a.length() == b.length());
  const Length n = a.length();
  REQUIRE(a.extract(1, n) == b.extract(1, n));
  for (int q = 0; q < 100; ++q) {
    const Position i = testing::uniform(rng, 0, n);
    const auto c = static_cast<Symbol>(testing::uniform(rng, 1, a.sigma()));
    REQUIRE(a.rank(c, i) == b.rank(c, i));
    const Length total = a.rank(c, n);
    if (total) {
      const Length k = testing::uniform(rng, 1, total);
      REQUIRE(a.select(c, k) == b.select(c, k));
    }
  }
}

}  // namespace

TEST_CASE("index files round trip for both engines") {
  testing::Rng rng(59);
  for (EngineKind kind : {EngineKind::kUnbalanced, EngineKind::kBalanced}) {
    for (int t = 0; t < 5; ++t) {
      const auto text = testing::versioned_text(100, 5, 2 + t, 3, rng);
      IndexFile f = text_file(text, kind);
      f.alphabet = t == 0 ? std::string("ab") : std::string();
      const IndexFile back = deserialize_index(serialize_index(f));
      CHECK(back.kind == kind);
      CHECK(back.alphabet == f.alphabet);
      CHECK(back.text->kind() == kind);
      same_answers(*f.text, *back.text, rng);
      CHECK(serialize_index(back) == serialize_index(f));
    }
  }
}

TEST_CASE("path-count files round trip") {
  std::istringstream in("E u v\nE u w\nE v s1\nE w s1\nE w s2\n");
  IndexFile f;
  f.kind = EngineKind::kPathCount;
  f.paths = std::make_shared<const PathCountIndex>(read_dag(in));
  const IndexFile back = deserialize_index(serialize_index(f));
  REQUIRE(back.paths);
  CHECK(back.paths->count_paths("u", "s1") == 2);
  CHECK(back.paths->count_paths("w", "s2") == 1);
  CHECK(back.paths->input_dag().edges == f.paths->input_dag().edges);
}

TEST_CASE("corruption is detected") {
  testing::Rng rng(61);
  const std::string bytes = serialize_index(text_file(testing::versioned_text(100, 5, 4, 3, rng), EngineKind::kUnbalanced));
  for (int t = 0; t < 100; ++t) {
    std::string bad = bytes;
    const std::size_t bit = testing::uniform(rng, 0, bad.size() * 8 - 1);
    bad[bit / 8] = static_cast<char>(bad[bit / 8] ^ (1 << (bit % 8)));
    try {
      deserialize_index(bad);
      FAIL("flipped bit " << bit << " went unnoticed");
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::kCorruptIndex);
    }
  }
  CHECK_THROWS_AS(deserialize_index(bytes.substr(0, bytes.size() - 3)), Error);
  CHECK_THROWS_AS(deserialize_index(std::string(10, 'x')), Error);
}

TEST_CASE("files on disk") {
  const auto path = std::filesystem::temp_directory_path() / "gcs_serialize_test.idx";
  const auto text = testing::from_string("abracadabra");
  save_index(text_file(text, EngineKind::kBalanced), path.string());
  const IndexFile f = load_index(path.string());
  CHECK(f.text->extract(1, 11) == text);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_index(path.string()), Error);
}
