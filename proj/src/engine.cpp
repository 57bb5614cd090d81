#include "gcs/engine.hpp"

#include <fstream>
#include <iterator>

#include "gcs/serialize.hpp"

namespace gcs {

namespace {

constexpr std::uint64_t kMagic = 0x3158444953434701ull;  // "\x01GCSIDX1" read as LE
constexpr std::uint64_t kVersion = 1;

}  // namespace

UnbalancedIndex::UnbalancedIndex(std::shared_ptr<const Grammar> g)
    : forest_(std::make_shared<const HeavyForest>(std::move(g))), access_(forest_), rs_(forest_) {}

UnbalancedIndex::UnbalancedIndex(std::shared_ptr<const HeavyForest> forest, AccessIndex access, RankSelectIndex rs)
    : forest_(std::move(forest)), access_(std::move(access)), rs_(std::move(rs)) {}

std::size_t UnbalancedIndex::size_in_bytes() const {
  return forest_->size_in_bytes() + access_.size_in_bytes() + rs_.size_in_bytes();
}

void UnbalancedIndex::save(BinaryWriter& out) const {
  forest_->save(out);
  access_.save(out);
  rs_.save(out);
}

std::unique_ptr<UnbalancedIndex> UnbalancedIndex::load(BinaryReader& in, std::shared_ptr<const Grammar> g) {
  auto forest = std::make_shared<const HeavyForest>(HeavyForest::load(in, std::move(g)));
  AccessIndex access = AccessIndex::load(in, forest);
  RankSelectIndex rs = RankSelectIndex::load(in, forest);
  return std::make_unique<UnbalancedIndex>(forest, std::move(access), std::move(rs));
}

std::unique_ptr<TextIndex> build_index(std::shared_ptr<const Grammar> g, EngineKind kind, double epsilon) {
  switch (kind) {
    case EngineKind::kUnbalanced: return std::make_unique<UnbalancedIndex>(std::move(g));
    case EngineKind::kBalanced: return std::make_unique<BalancedEngine>(std::move(g), epsilon);
    case EngineKind::kPathCount: break;
  }
  throw std::invalid_argument("path-count indexes are built from a graph");
}

std::string_view engine_name(EngineKind kind) {
  switch (kind) {
    case EngineKind::kUnbalanced: return "unbalanced";
    case EngineKind::kBalanced: return "balanced";
    case EngineKind::kPathCount: return "pathcount";
  }
  return "unknown";
}

std::string serialize_index(const IndexFile& f) {
  BinaryWriter out;
  out.u64(kMagic);
  out.u64(kVersion);
  out.u64(static_cast<std::uint64_t>(f.kind));
  out.str(f.alphabet);
  f.grammar().save(out);
  if (f.kind == EngineKind::kPathCount)
    f.paths->save(out);
  else
    f.text->save(out);
  std::string bytes = out.take();
  BinaryWriter trailer;
  trailer.u64(checksum(bytes.data(), bytes.size()));
  return bytes + trailer.bytes();
}

IndexFile deserialize_index(const std::string& bytes) {
  if (bytes.size() < 32) throw Error(ErrorCode::kCorruptIndex, "file too short");
  const std::size_t body = bytes.size() - 8;
  BinaryReader tail(bytes.data() + body, 8);
  if (tail.u64() != checksum(bytes.data(), body)) throw Error(ErrorCode::kCorruptIndex, "checksum mismatch");

  BinaryReader in(bytes.data(), body);
  if (in.u64() != kMagic) throw Error(ErrorCode::kCorruptIndex, "not an index file");
  if (in.u64() != kVersion) throw Error(ErrorCode::kCorruptIndex, "unsupported version");
  const std::uint64_t tag = in.u64();
  if (tag > static_cast<std::uint64_t>(EngineKind::kPathCount)) throw Error(ErrorCode::kCorruptIndex, "engine tag");
  IndexFile f;
  f.kind = static_cast<EngineKind>(tag);
  f.alphabet = in.str();
  auto g = std::make_shared<const Grammar>(Grammar::load(in));
  if (!f.alphabet.empty() && f.alphabet.size() != g->sigma)
    throw Error(ErrorCode::kCorruptIndex, "alphabet size");
  switch (f.kind) {
    case EngineKind::kUnbalanced: f.text = UnbalancedIndex::load(in, g); break;
    case EngineKind::kBalanced: f.text = std::make_shared<BalancedEngine>(BalancedIndex::load(in, g)); break;
    case EngineKind::kPathCount: f.paths = std::make_shared<PathCountIndex>(PathCountIndex::load(in, g)); break;
  }
  if (!in.at_end()) throw Error(ErrorCode::kCorruptIndex, "trailing bytes");
  return f;
}

void save_index(const IndexFile& f, const std::string& path) {
  const std::string bytes = serialize_index(f);
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
    throw Error(ErrorCode::kIoError, "cannot write " + path);
}

IndexFile load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return deserialize_index(bytes);
}

}  // namespace gcs
