#ifndef GCS_PACKED_HPP
#define GCS_PACKED_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gcs {

class BinaryWriter;
class BinaryReader;

// Number of bits needed to store values in [0..max_value]; at least 1.
unsigned bits_for(std::uint64_t max_value);

// Fixed-width integer vector. Element i occupies bits [i*width, (i+1)*width)
// of the word stream; lower-order bits hold earlier elements and an element may
// straddle two words.
class PackedArray {
 public:
  PackedArray() = default;
  PackedArray(std::size_t size, unsigned width);

  std::size_t size() const { return size_; }
  unsigned width() const { return width_; }
  std::size_t size_in_bytes() const { return words_.size() * sizeof(std::uint64_t); }

  std::uint64_t get(std::size_t i) const {
    const std::size_t bit = i * width_;
    const std::size_t word = bit >> 6;
    const unsigned shift = bit & 63;
    std::uint64_t value = words_[word] >> shift;
    if (shift + width_ > 64) value |= words_[word + 1] << (64 - shift);
    return value & mask_;
  }

  void set(std::size_t i, std::uint64_t value);

  std::uint64_t operator[](std::size_t i) const { return get(i); }

  void save(BinaryWriter& out) const;
  static PackedArray load(BinaryReader& in);

  friend bool operator==(const PackedArray&, const PackedArray&) = default;

 private:
  std::size_t size_ = 0;
  unsigned width_ = 1;
  std::uint64_t mask_ = 1;
  std::vector<std::uint64_t> words_;
};

}  // namespace gcs

#endif  // GCS_PACKED_HPP
