#ifndef GCS_SERIALIZE_HPP
#define GCS_SERIALIZE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gcs/error.hpp"

namespace gcs {

// Little-endian, fixed 64-bit encoding for every integer.
class BinaryWriter {
 public:
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }

  template <class T>
  void vec(const std::vector<T>& v) {
    u64(v.size());
    for (const auto& x : v) u64(static_cast<std::uint64_t>(x));
  }

  void str(const std::string& s) {
    u64(s.size());
    bytes_.append(s);
  }

  const std::string& bytes() const { return bytes_; }
  std::string take() { return std::move(bytes_); }

 private:
  std::string bytes_;
};

class BinaryReader {
 public:
  BinaryReader(const char* data, std::size_t size) : data_(data), size_(size) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }

  // Reads a length field that must not exceed the remaining payload.
  std::size_t count(std::size_t element_bytes) {
    const std::uint64_t n = u64();
    if (element_bytes != 0 && n > (size_ - pos_) / element_bytes)
      throw Error(ErrorCode::kCorruptIndex, "length field exceeds payload");
    return static_cast<std::size_t>(n);
  }

  template <class T>
  std::vector<T> vec() {
    const std::size_t n = count(8);
    std::vector<T> v(n);
    for (auto& x : v) x = static_cast<T>(u64());
    return v;
  }

  std::string str() {
    const std::size_t n = count(1);
    std::string s(data_ + pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == size_; }

 private:
  void need(std::size_t n) const {
    if (size_ - pos_ < n) throw Error(ErrorCode::kCorruptIndex, "truncated payload");
  }

  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::uint32_t checksum(const char* data, std::size_t size);

}  // namespace gcs

#endif  // GCS_SERIALIZE_HPP
