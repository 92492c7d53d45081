// SPDX-License-Identifier: Apache-2.0
#include "robotid/net/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace robotid::net {

namespace {

constexpr std::array<char, 8> kMagic = {'R', 'I', 'D', 'C', 'K', 'P', 'T', '\0'};

std::uint64_t fnv1a(const std::vector<char>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename T>
void put(std::vector<char>& out, const T& v) {
  const auto* p = reinterpret_cast<const char*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::vector<char>& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    T v{};
    read(&v, sizeof(T));
    return v;
  }
  void read(void* dst, std::size_t n) {
    if (pos_ + n > bytes_.size()) throw CheckpointError("checkpoint truncated");
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  [[nodiscard]] std::size_t pos() const { return pos_; }

 private:
  const std::vector<char>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const NetworkParams& params, const std::filesystem::path& path) {
  params.validate();
  const Architecture& a = params.arch();
  std::vector<char> buf(kMagic.begin(), kMagic.end());
  put(buf, kCheckpointVersion);
  for (std::int32_t v : {a.n_robots, a.n_slots, a.hidden, a.layers}) put(buf, v);
  put(buf, static_cast<std::uint64_t>(params.weights.size()));
  put(buf, static_cast<std::uint64_t>(params.norm.mean.size()));
  for (double v : params.weights.values()) put(buf, v);
  for (Eigen::Index i = 0; i < params.norm.mean.size(); ++i) put(buf, params.norm.mean(i));
  for (Eigen::Index i = 0; i < params.norm.stddev.size(); ++i) put(buf, params.norm.stddev(i));
  put(buf, fnv1a(buf));

  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw CheckpointError("write failed: " + path.string());
}

NetworkParams load_checkpoint(const std::filesystem::path& path,
                              std::optional<std::pair<int, int>> expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(bytes);

  std::array<char, 8> magic{};
  r.read(magic.data(), magic.size());
  if (magic != kMagic) throw CheckpointError(path.string() + ": not a checkpoint");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw CheckpointError(path.string() + ": unsupported checkpoint version " +
                          std::to_string(version));
  }
  Architecture a;
  a.n_robots = r.get<std::int32_t>();
  a.n_slots = r.get<std::int32_t>();
  a.hidden = r.get<std::int32_t>();
  a.layers = r.get<std::int32_t>();
  try {
    a.validate();
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
  if (expected && (expected->first != a.n_robots || expected->second != a.n_slots)) {
    throw CheckpointError(path.string() + ": checkpoint is for N=" + std::to_string(a.n_robots) +
                          ", M=" + std::to_string(a.n_slots) + " but N=" +
                          std::to_string(expected->first) + ", M=" +
                          std::to_string(expected->second) + " was requested");
  }
  const auto n_params = r.get<std::uint64_t>();
  const auto q = r.get<std::uint64_t>();
  NetworkParams p{ParamBuffer(a), Normalization::identity(a.input_dim())};
  if (n_params != p.weights.size() || q != static_cast<std::uint64_t>(a.input_dim())) {
    throw CheckpointError(path.string() + ": shape table does not match architecture");
  }
  r.read(p.weights.values().data(), n_params * sizeof(double));
  r.read(p.norm.mean.data(), q * sizeof(double));
  r.read(p.norm.stddev.data(), q * sizeof(double));
  const std::size_t payload_end = r.pos();
  const auto stored_hash = r.get<std::uint64_t>();
  if (r.pos() != bytes.size()) throw CheckpointError(path.string() + ": trailing bytes");
  const std::vector<char> payload(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(payload_end));
  if (fnv1a(payload) != stored_hash) throw CheckpointError(path.string() + ": checksum mismatch");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
  return p;
}

}  // namespace robotid::net
