#include "tnls/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace tnls {

namespace {

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

}  // namespace

void write_snapshot(const std::string& path, const TorusField& f) {
  std::vector<unsigned char> buf;
  buf.reserve(20 + 16 * f.values.size());
  buf.insert(buf.end(), {'T', 'N', 'L', 'S'});
  put_u32(buf, snapshot_version);
  put_u32(buf, static_cast<std::uint32_t>(f.lattice.m()));
  put_f64(buf, f.timestamp);
  for (const auto& z : f.values) {
    put_f64(buf, z.real());
    put_f64(buf, z.imag());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ValidationError("cannot open snapshot for writing: " + path);
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!os) throw ValidationError("failed writing snapshot: " + path);
}

TorusField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open snapshot: " + path);
  unsigned char head[20];
  is.read(reinterpret_cast<char*>(head), 20);
  if (is.gcount() != 20 || std::memcmp(head, "TNLS", 4) != 0)
    throw ValidationError("not a field snapshot: " + path);
  std::uint32_t version = get_u32(head + 4);
  if (version != snapshot_version)
    throw ValidationError("unsupported snapshot version " + std::to_string(version) + " in " + path);
  std::uint32_t m = get_u32(head + 8);
  if (m < 4 || m % 2 != 0 || m > 4096) throw ValidationError("invalid lattice size in snapshot: " + path);
  Lattice l(static_cast<int>(m));
  TorusField f(l, get_f64(head + 12));
  std::vector<unsigned char> body(16 * l.volume());
  is.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(body.size()));
  if (static_cast<std::size_t>(is.gcount()) != body.size()) throw ValidationError("truncated snapshot: " + path);
  char extra;
  if (is.read(&extra, 1)) throw ValidationError("trailing bytes in snapshot: " + path);
  for (std::size_t i = 0; i < l.volume(); ++i)
    f.values[i] = cplx(get_f64(&body[16 * i]), get_f64(&body[16 * i + 8]));
  if (!f.finite()) throw ValidationError("snapshot contains non-finite values: " + path);
  return f;
}

}  // namespace tnls
