#include "gcs/packed.hpp"

#include <bit>

#include "gcs/serialize.hpp"

namespace gcs {

unsigned bits_for(std::uint64_t max_value) {
  return max_value == 0 ? 1u : static_cast<unsigned>(std::bit_width(max_value));
}

PackedArray::PackedArray(std::size_t size, unsigned width)
    : size_(size),
      width_(width == 0 ? 1 : width),
      mask_(width_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1),
      words_((size * width_ + 63) / 64 + 1, 0) {}

void PackedArray::set(std::size_t i, std::uint64_t value) {
  value &= mask_;
  const std::size_t bit = i * width_;
  const std::size_t word = bit >> 6;
  const unsigned shift = bit & 63;
  words_[word] = (words_[word] & ~(mask_ << shift)) | (value << shift);
  if (shift + width_ > 64) {
    const unsigned spill = 64 - shift;
    words_[word + 1] = (words_[word + 1] & ~(mask_ >> spill)) | (value >> spill);
  }
}

void PackedArray::save(BinaryWriter& out) const {
  out.u64(size_);
  out.u64(width_);
  out.vec(words_);
}

PackedArray PackedArray::load(BinaryReader& in) {
  const std::uint64_t size = in.u64();
  const std::uint64_t width = in.u64();
  if (width == 0 || width > 64) throw Error(ErrorCode::kCorruptIndex, "bad packed width");
  std::vector<std::uint64_t> words = in.vec<std::uint64_t>();
  if (size > words.size() * 64 / width) throw Error(ErrorCode::kCorruptIndex, "packed size mismatch");
  PackedArray a(static_cast<std::size_t>(size), static_cast<unsigned>(width));
  if (words.size() != a.words_.size()) throw Error(ErrorCode::kCorruptIndex, "packed size mismatch");
  a.words_ = std::move(words);
  return a;
}

}  // namespace gcs
