// Snapshot file layout (little-endian):
//   magic "NSCV" | u32 version=1 | u32 N | f64 L | f64 t | f64 nu |
//   3*N^3 f64 values (components u1, u2, u3 consecutively, each row-major
//   with the third axis fastest).

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "nscv/errors.hpp"
#include "nscv/grid.hpp"

namespace nscv {

namespace {

constexpr char kMagic[4] = {'N', 'S', 'C', 'V'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, sizeof(v));
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& path)
      : bytes_(bytes), path_(path) {}

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= std::uint32_t(std::uint8_t(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  double f64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= std::uint64_t(std::uint8_t(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    double d;
    std::memcpy(&d, &v, sizeof(d));
    return d;
  }

  void raw(char* dst, std::size_t n, const char* what) {
    need(n, what);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }

  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << path_ << ": " << msg << " (offset " << pos_ << ")";
    throw ValidationError("snapshot", os.str());
  }

 private:
  void need(std::size_t n, const char* what) {
    if (pos_ + n > bytes_.size()) {
      std::ostringstream os;
      os << path_ << ": truncated file, needed " << n << " bytes for " << what
         << " at offset " << pos_ << " but only " << (bytes_.size() - pos_)
         << " remain";
      throw ValidationError("snapshot", os.str());
    }
  }

  const std::string& bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_snapshot(const std::string& path, const VectorField3& field,
                    double time, double viscosity) {
  const Grid3& g = field.grid();
  std::string out;
  out.reserve(32 + 3 * g.size() * 8);
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, std::uint32_t(g.n));
  put_f64(out, g.half_width);
  put_f64(out, time);
  put_f64(out, viscosity);
  for (int c = 0; c < 3; ++c) {
    const double* v = field.comp(c).data();
    for (std::size_t i = 0; i < g.size(); ++i) put_f64(out, v[i]);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ValidationError("snapshot", "cannot open for writing: " + path);
  os.write(out.data(), std::streamsize(out.size()));
  os.flush();
  if (!os) throw ValidationError("snapshot", "write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("snapshot", "cannot open: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  std::string bytes = buf.str();

  Reader r(bytes, path);
  char magic[4];
  r.raw(magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    std::ostringstream os;
    os << path << ": bad magic at offset 0, expected \"NSCV\"";
    throw ValidationError("snapshot", os.str());
  }
  std::uint32_t version = r.u32("version");
  if (version != kVersion) {
    std::ostringstream os;
    os << path << ": unsupported version " << version << " (expected "
       << kVersion << ")";
    throw ValidationError("snapshot", os.str());
  }
  std::uint32_t n = r.u32("grid size");
  if (n < 8 || n > 4096 || (n & (n - 1)) != 0)
    r.fail("grid size must be a power of two in [8, 4096]");
  double half_width = r.f64("half-width");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    r.fail("half-width must be positive and finite");
  double time = r.f64("time");
  double viscosity = r.f64("viscosity");
  if (!std::isfinite(time) || !std::isfinite(viscosity))
    r.fail("time and viscosity must be finite");

  Grid3 g = Grid3::make(int(n), half_width);
  Snapshot snap;
  snap.field = VectorField3(g);
  snap.time = time;
  snap.viscosity = viscosity;
  for (int c = 0; c < 3; ++c) {
    double* v = snap.field.comp(c).data();
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = r.f64("field values");
  }
  if (r.pos() != bytes.size()) r.fail("trailing bytes after field payload");
  for (int c = 0; c < 3; ++c) {
    const double* v = snap.field.comp(c).data();
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!std::isfinite(v[i]))
        throw ValidationError("snapshot",
                              path + ": field contains non-finite values");
  }
  return snap;
}

}  // namespace nscv
