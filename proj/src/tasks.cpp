#include "scurnn/tasks.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

namespace scurnn {

CopyingBatch gen_copying(int T, int batch, std::uint64_t seed) {
  if (T < 1) throw DimensionError("gen_copying: T must be >= 1");
  const int len = T + 20;
  CopyingBatch out;
  out.T = T;
  out.inputs = Eigen::MatrixXi::Zero(batch, len);
  out.targets = Eigen::MatrixXi::Zero(batch, len);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> sym(1, 8);
  for (int r = 0; r < batch; ++r) {
    for (int j = 0; j < 10; ++j) {
      const int s = sym(rng);
      out.inputs(r, j) = s;
      out.targets(r, len - 10 + j) = s;
    }
    out.inputs(r, T + 10) = 9;  // marker
  }
  return out;
}

double copying_baseline(int T) {
  if (T < 1) throw DimensionError("copying_baseline: T must be >= 1");
  return 10.0 * std::log(8.0) / (T + 20);
}

AddingBatch gen_adding(int T, int batch, std::uint64_t seed) {
  if (T < 2) throw DimensionError("gen_adding: T must be >= 2");
  AddingBatch out;
  out.values.resize(batch, T);
  out.markers = RMat::Zero(batch, T);
  out.targets.resize(batch);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_int_distribution<int> first(0, T / 2 - 1);
  std::uniform_int_distribution<int> second(T / 2, T - 1);
  for (int r = 0; r < batch; ++r) {
    for (int t = 0; t < T; ++t) out.values(r, t) = uni(rng);
    const int i1 = first(rng);
    const int i2 = second(rng);
    out.markers(r, i1) = 1.0;
    out.markers(r, i2) = 1.0;
    out.targets[r] = out.values(r, i1) + out.values(r, i2);
  }
  return out;
}

namespace {

std::vector<unsigned char> read_file_maybe_gzip(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (raw.size() >= 2 && raw[0] == 0x1f && raw[1] == 0x8b) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) {
      throw IoError("zlib init failed for " + path);
    }
    std::vector<unsigned char> out;
    out.resize(raw.size() * 4 + 1024);
    zs.next_in = raw.data();
    zs.avail_in = static_cast<uInt>(raw.size());
    int ret = Z_OK;
    std::size_t written = 0;
    do {
      if (written == out.size()) out.resize(out.size() * 2);
      zs.next_out = out.data() + written;
      zs.avail_out = static_cast<uInt>(out.size() - written);
      ret = inflate(&zs, Z_NO_FLUSH);
      written = out.size() - zs.avail_out;
      if (ret != Z_OK && ret != Z_STREAM_END) {
        inflateEnd(&zs);
        throw IoError("gzip decompression failed for " + path);
      }
    } while (ret != Z_STREAM_END);
    inflateEnd(&zs);
    out.resize(written);
    return out;
  }
  return raw;
}

std::uint32_t be32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

}  // namespace

MnistDataset load_mnist(const std::string& images_path,
                        const std::string& labels_path,
                        std::optional<std::uint64_t> permutation_seed) {
  const auto img = read_file_maybe_gzip(images_path);
  const auto lab = read_file_maybe_gzip(labels_path);
  if (img.size() < 16 || be32(img.data()) != 0x00000803u) {
    throw IoError("bad IDX image magic in " + images_path);
  }
  if (lab.size() < 8 || be32(lab.data()) != 0x00000801u) {
    throw IoError("bad IDX label magic in " + labels_path);
  }
  const std::uint32_t count = be32(img.data() + 4);
  const std::uint32_t rows = be32(img.data() + 8);
  const std::uint32_t cols = be32(img.data() + 12);
  const std::uint32_t lcount = be32(lab.data() + 4);
  if (lcount != count) {
    throw IoError("image/label count mismatch: " + std::to_string(count) +
                  " vs " + std::to_string(lcount));
  }
  const std::size_t npix = static_cast<std::size_t>(rows) * cols;
  if (img.size() < 16 + static_cast<std::size_t>(count) * npix) {
    throw IoError("truncated IDX image file " + images_path);
  }
  if (lab.size() < 8 + count) {
    throw IoError("truncated IDX label file " + labels_path);
  }

  std::vector<int> perm(npix);
  std::iota(perm.begin(), perm.end(), 0);
  if (permutation_seed) {
    std::mt19937_64 rng(*permutation_seed);
    std::shuffle(perm.begin(), perm.end(), rng);
  }

  MnistDataset data;
  data.pixels.resize(count, npix);
  data.labels.resize(count);
  const unsigned char* px = img.data() + 16;
  for (std::uint32_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < npix; ++j) {
      data.pixels(i, j) = px[static_cast<std::size_t>(i) * npix + perm[j]] / 255.0;
    }
    data.labels[i] = lab[8 + i];
  }
  return data;
}

std::vector<RMat> copying_inputs(const CopyingBatch& batch, int lo, int hi) {
  const int len = batch.T + 20;
  const int B = hi - lo;
  std::vector<RMat> x(len, RMat::Zero(10, B));
  for (int t = 0; t < len; ++t) {
    for (int s = 0; s < B; ++s) x[t](batch.inputs(lo + s, t), s) = 1.0;
  }
  return x;
}

Eigen::MatrixXi copying_labels(const CopyingBatch& batch, int lo, int hi) {
  const int len = batch.T + 20;
  Eigen::MatrixXi labels(len, hi - lo);
  for (int t = 0; t < len; ++t) {
    for (int s = lo; s < hi; ++s) labels(t, s - lo) = batch.targets(s, t);
  }
  return labels;
}

std::vector<RMat> adding_inputs(const AddingBatch& batch, int lo, int hi) {
  const int T = static_cast<int>(batch.values.cols());
  const int B = hi - lo;
  std::vector<RMat> x(T, RMat::Zero(2, B));
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < B; ++s) {
      x[t](0, s) = batch.values(lo + s, t);
      x[t](1, s) = batch.markers(lo + s, t);
    }
  }
  return x;
}

void adding_targets(const AddingBatch& batch, int lo, int hi, int T,
                    std::vector<RMat>& targets, std::vector<RMat>& mask) {
  const int B = hi - lo;
  targets.assign(T, RMat::Zero(1, B));
  mask.assign(T, RMat::Zero(1, B));
  for (int s = 0; s < B; ++s) {
    targets[T - 1](0, s) = batch.targets[lo + s];
    mask[T - 1](0, s) = 1.0;
  }
}

std::vector<RMat> mnist_inputs(const MnistDataset& data,
                               const std::vector<int>& rows) {
  const int tau = static_cast<int>(data.pixels.cols());
  const int B = static_cast<int>(rows.size());
  std::vector<RMat> x(tau, RMat(1, B));
  for (int t = 0; t < tau; ++t) {
    for (int s = 0; s < B; ++s) x[t](0, s) = data.pixels(rows[s], t);
  }
  return x;
}

Eigen::MatrixXi mnist_labels(const MnistDataset& data,
                             const std::vector<int>& rows) {
  Eigen::MatrixXi labels(1, static_cast<int>(rows.size()));
  for (std::size_t s = 0; s < rows.size(); ++s) {
    labels(0, static_cast<int>(s)) = data.labels[rows[s]];
  }
  return labels;
}

}  // namespace scurnn
