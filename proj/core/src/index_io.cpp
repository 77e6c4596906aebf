#include "pmse/index_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "pmse/atomic_file.hpp"
#include "pmse/error.hpp"

namespace pmse {

namespace {

class LeWriter {
 public:
  explicit LeWriter(std::ostream& out) : out_(out) {}

  template <typename T>
  void put(T value) {
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>;
    static_assert(sizeof(T) == sizeof(U));
    auto bits = std::bit_cast<U>(value);
    char bytes[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out_.write(bytes, sizeof(U));
  }

 private:
  std::ostream& out_;
};

class LeReader {
 public:
  explicit LeReader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

  template <typename T>
  T get(const char* what) {
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>;
    need(sizeof(U), what);
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(static_cast<U>(bytes_[pos_ + i]) << (8 * i));
    pos_ += sizeof(U);
    return std::bit_cast<T>(bits);
  }

  // Checks that `count` items of `width` bytes remain before allocating.
  void need_items(std::uint64_t count, std::size_t width, const char* what) const {
    if (count > (bytes_.size() - pos_) / width) eof(what);
  }

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) eof(what);
  }

  [[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  [[noreturn]] static void eof(const char* what) {
    fail(ErrorCode::kUnexpectedEof, std::string("unexpected end of file while reading ") + what);
  }

  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

[[noreturn]] void inconsistent(const std::string& what) {
  fail(ErrorCode::kInconsistentIndex, "inconsistent index: " + what);
}

}  // namespace

void write_index(std::ostream& out, const DenoiseIndex& index) {
  validate_index(index);
  LeWriter w(out);
  out.write(kIndexMagic, 4);
  w.put(kIndexVersion);
  w.put(static_cast<std::uint32_t>(index.side));
  w.put(static_cast<std::uint64_t>(index.clusters()));
  w.put(static_cast<std::uint32_t>(index.neighbors()));
  w.put(static_cast<std::uint32_t>(index.trees()));
  w.put(static_cast<std::uint32_t>(index.leaf_size()));
  w.put(index.mean_intensity);
  for (float v : index.model.centroids()) w.put(v);
  for (std::uint64_t n : index.model.counts()) w.put(n);
  for (std::uint32_t j : index.graph.neighbors) w.put(j);
  for (const KdTree& tree : index.forest.trees) {
    w.put(static_cast<std::uint64_t>(tree.nodes.size()));
    for (const KdNode& node : tree.nodes) {
      w.put(static_cast<std::uint8_t>(node.leaf ? 1 : 0));
      if (node.leaf) {
        w.put(static_cast<std::uint32_t>(node.indices.size()));
        for (std::uint32_t j : node.indices) w.put(j);
      } else {
        w.put(node.split_dim);
        w.put(node.threshold);
        w.put(node.left);
        w.put(node.right);
      }
    }
  }
  if (!out) fail(ErrorCode::kIo, "failed writing index");
}

void save_index(const DenoiseIndex& index, const std::filesystem::path& path) {
  write_file_atomically(path, [&](std::ostream& out) { write_index(out, index); });
}

DenoiseIndex read_index(std::istream& in) {
  std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kIndexMagic, 4) != 0) {
    fail(ErrorCode::kNotIndexFile, "not an index file (bad magic)");
  }
  LeReader r(std::vector<unsigned char>(bytes.begin() + 4, bytes.end()));
  const auto version = r.get<std::uint32_t>("version");
  if (version != kIndexVersion) {
    fail(ErrorCode::kVersionMismatch, "index version " + std::to_string(version) + " is not supported (expected " +
                                          std::to_string(kIndexVersion) + ")");
  }
  const auto side = r.get<std::uint32_t>("header");
  const auto n_c = r.get<std::uint64_t>("header");
  const auto k = r.get<std::uint32_t>("header");
  const auto n_t = r.get<std::uint32_t>("header");
  const auto leaf = r.get<std::uint32_t>("header");
  const auto mean = r.get<double>("header");
  if (side == 0 || side > 4096) inconsistent("patch side " + std::to_string(side));
  if (n_c == 0 || n_c >= std::numeric_limits<std::uint32_t>::max()) inconsistent("cluster count");
  if (k == 0 || k >= n_c) inconsistent("K must satisfy 1 <= K < N_C");
  if (n_t == 0) inconsistent("tree count is zero");
  if (leaf == 0) inconsistent("leaf size is zero");
  const std::size_t d = std::size_t{side} * side;

  r.need_items(n_c * d, 4, "centroids");
  std::vector<float> centroids(n_c * d);
  for (float& v : centroids) v = r.get<float>("centroids");
  r.need_items(n_c, 8, "counts");
  std::vector<std::uint64_t> counts(n_c);
  for (auto& n : counts) n = r.get<std::uint64_t>("counts");
  r.need_items(n_c * k, 4, "neighbor lists");
  std::vector<std::uint32_t> neighbors(n_c * k);
  for (auto& j : neighbors) j = r.get<std::uint32_t>("neighbor lists");

  DenoiseIndex index;
  index.side = side;
  index.mean_intensity = mean;
  try {
    index.model = ClusterModel(d, std::move(centroids), std::move(counts));
  } catch (const Error& e) {
    inconsistent(e.what());
  }
  index.graph = KnnGraph{k, std::move(neighbors)};
  index.forest.dim = d;
  index.forest.leaf_size = leaf;
  index.forest.trees.resize(n_t);
  for (auto& tree : index.forest.trees) {
    const auto node_count = r.get<std::uint64_t>("tree header");
    // Smallest record is a 5-byte empty leaf.
    r.need_items(node_count, 5, "tree nodes");
    tree.nodes.resize(node_count);
    for (auto& node : tree.nodes) {
      const auto flag = r.get<std::uint8_t>("tree node");
      if (flag > 1) inconsistent("node flag " + std::to_string(flag));
      node.leaf = flag == 1;
      if (node.leaf) {
        const auto count = r.get<std::uint32_t>("leaf");
        r.need_items(count, 4, "leaf indices");
        node.indices.resize(count);
        for (auto& j : node.indices) j = r.get<std::uint32_t>("leaf indices");
      } else {
        node.split_dim = r.get<std::uint32_t>("tree node");
        node.threshold = r.get<float>("tree node");
        node.left = r.get<std::uint64_t>("tree node");
        node.right = r.get<std::uint64_t>("tree node");
      }
    }
  }
  if (r.remaining() != 0) inconsistent(std::to_string(r.remaining()) + " trailing bytes");
  validate_index(index);
  return index;
}

DenoiseIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open index " + path.string());
  return read_index(in);
}

}  // namespace pmse
