#include "scurnn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>

namespace scurnn {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'U', 'R'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<const char*>(buf), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char buf[4];
  is.read(reinterpret_cast<char*>(buf), 4);
  if (!is) throw IoError("checkpoint truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(buf[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) throw IoError("checkpoint truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
  return v;
}

void write_array(std::ostream& os, const std::string& name, const double* data,
                 std::uint64_t count) {
  write_u32(os, static_cast<std::uint32_t>(name.size()));
  os.write(name.data(), static_cast<std::streamsize>(name.size()));
  write_u64(os, count);
  // doubles stored little-endian; this code targets little-endian hosts
  os.write(reinterpret_cast<const char*>(data),
           static_cast<std::streamsize>(count * sizeof(double)));
}

}  // namespace

void save_checkpoint(const std::string& path, const ScuRnnParams& p) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write checkpoint " + path);
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(p.n));
  write_u32(os, static_cast<std::uint32_t>(p.m));
  write_u32(os, static_cast<std::uint32_t>(p.p));
  write_array(os, "x_lower", p.a.x_lower.data(), p.a.x_lower.size());
  write_array(os, "y_lower", p.a.y_lower.data(), p.a.y_lower.size());
  write_array(os, "theta", p.theta.theta.data(), p.theta.theta.size());
  write_array(os, "u_re", p.u_re.data(), static_cast<std::uint64_t>(p.u_re.size()));
  write_array(os, "u_im", p.u_im.data(), static_cast<std::uint64_t>(p.u_im.size()));
  write_array(os, "v", p.v.data(), static_cast<std::uint64_t>(p.v.size()));
  write_array(os, "b", p.b.data(), p.b.size());
  write_array(os, "c", p.c.data(), p.c.size());
  write_array(os, "h0_re", p.h0_re.data(), p.h0_re.size());
  write_array(os, "h0_im", p.h0_im.data(), p.h0_im.size());
  if (!os) throw IoError("write failure on checkpoint " + path);
}

ScuRnnParams load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("bad checkpoint magic in " + path);
  }
  const std::uint32_t version = read_u32(is);
  if (version != kVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  }
  ScuRnnParams p;
  p.n = static_cast<int>(read_u32(is));
  p.m = static_cast<int>(read_u32(is));
  p.p = static_cast<int>(read_u32(is));

  std::map<std::string, std::vector<double>> arrays;
  while (is.peek() != EOF) {
    const std::uint32_t name_len = read_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    const std::uint64_t count = read_u64(is);
    std::vector<double> data(count);
    is.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) throw IoError("checkpoint truncated in array " + name);
    arrays.emplace(std::move(name), std::move(data));
  }

  auto take = [&](const std::string& name, std::uint64_t expect) {
    auto it = arrays.find(name);
    if (it == arrays.end()) throw IoError("checkpoint missing array " + name);
    if (it->second.size() != expect) {
      throw IoError("checkpoint array " + name + " has wrong size");
    }
    return it->second;
  };

  const int n = p.n, m = p.m, pp = p.p;
  p.a.n = n;
  auto fill_vec = [&](RVec& v, const std::string& name, Eigen::Index sz) {
    const auto data = take(name, static_cast<std::uint64_t>(sz));
    v = Eigen::Map<const RVec>(data.data(), sz);
  };
  auto fill_mat = [&](RMat& mt, const std::string& name, Eigen::Index r,
                      Eigen::Index c) {
    const auto data = take(name, static_cast<std::uint64_t>(r * c));
    mt = Eigen::Map<const RMat>(data.data(), r, c);
  };
  fill_vec(p.a.x_lower, "x_lower", static_cast<Eigen::Index>(n) * (n - 1) / 2);
  fill_vec(p.a.y_lower, "y_lower", static_cast<Eigen::Index>(n) * (n + 1) / 2);
  fill_vec(p.theta.theta, "theta", n);
  fill_mat(p.u_re, "u_re", n, m);
  fill_mat(p.u_im, "u_im", n, m);
  fill_mat(p.v, "v", pp, 2 * n);
  fill_vec(p.b, "b", n);
  fill_vec(p.c, "c", pp);
  fill_vec(p.h0_re, "h0_re", n);
  fill_vec(p.h0_im, "h0_im", n);
  return p;
}

}  // namespace scurnn
