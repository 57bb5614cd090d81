#include <doctest.h>

#include "corpus.hpp"
#include "gcs/packed.hpp"
#include "gcs/serialize.hpp"

using namespace gcs;

TEST_CASE("bits_for") {
  CHECK(bits_for(0) == 1);
  CHECK(bits_for(1) == 1);
  CHECK(bits_for(2) == 2);
  CHECK(bits_for(255) == 8);
  CHECK(bits_for(256) == 9);
  CHECK(bits_for(~std::uint64_t{0}) == 64);
}

TEST_CASE("packed array matches a plain vector for every width") {
  testing::Rng rng(7);
  for (unsigned width = 1; width <= 64; ++width) {
    const std::size_t n = 1 + testing::uniform(rng, 0, 300);
    const std::uint64_t mask = width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
    PackedArray a(n, width);
    std::vector<std::uint64_t> ref(n, 0);
    for (int round = 0; round < 3; ++round)
      for (std::size_t i = 0; i < n; ++i) {
        ref[i] = rng() & mask;
        a.set(i, ref[i]);
      }
    for (std::size_t i = 0; i < n; ++i) REQUIRE(a[i] == ref[i]);
  }
}

TEST_CASE("packed array round trip and truncation") {
  PackedArray a(100, 13);
  for (std::size_t i = 0; i < 100; ++i) a.set(i, (i * 7919) & 0x1fff);
  BinaryWriter w;
  a.save(w);
  const std::string bytes = w.take();
  BinaryReader r(bytes.data(), bytes.size());
  CHECK(PackedArray::load(r) == a);
  CHECK(r.at_end());

  BinaryReader cut(bytes.data(), bytes.size() - 1);
  CHECK_THROWS_AS(PackedArray::load(cut), Error);
}

TEST_CASE("binary reader rejects oversized length fields") {
  BinaryWriter w;
  w.u64(1'000'000);
  const std::string bytes = w.take();
  BinaryReader r(bytes.data(), bytes.size());
  try {
    r.vec<std::uint64_t>();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCorruptIndex);
  }
}
