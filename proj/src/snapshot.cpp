#include "srsp/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "srsp/error.hpp"

namespace srsp {

namespace {

constexpr unsigned char kMagic[4] = {'S', 'R', 'S', 'P'};

class Writer {
 public:
  void bytes(const unsigned char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f64(double x) {
    const auto v = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  std::vector<unsigned char> take() { return std::move(out_); }

 private:
  std::vector<unsigned char> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& in) : in_(in) {}
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::Format, "snapshot: truncated file");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    return std::bit_cast<double>(v);
  }
  void magic() {
    need(4);
    if (std::memcmp(in_.data() + pos_, kMagic, 4) != 0) throw Error(ErrorCode::Format, "snapshot: bad magic (expected SRSP)");
    pos_ += 4;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  const std::vector<unsigned char>& in_;
  std::size_t pos_ = 0;
};

SnapshotHeader read_header(Reader& r) {
  r.magic();
  SnapshotHeader h;
  h.version = r.u32();
  if (h.version != kSnapshotVersion) {
    std::ostringstream os;
    os << "snapshot: unsupported format version " << h.version << " (expected " << kSnapshotVersion << ")";
    throw Error(ErrorCode::Format, os.str());
  }
  const std::uint32_t d = r.u32();
  if (d < 1 || d > static_cast<std::uint32_t>(kMaxDimension)) throw Error(ErrorCode::Format, "snapshot: invalid dimension");
  for (std::uint32_t i = 0; i < d; ++i) h.modes.push_back(r.u32());
  h.count = r.u32();
  h.mass = r.f64();
  return h;
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path.string() + ": cannot open snapshot");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<unsigned char> encode_snapshot(const Ensemble& e) {
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kSnapshotVersion);
  const auto& dom = e.domain();
  w.u32(static_cast<std::uint32_t>(dom.dimension));
  for (int n : dom.modes) w.u32(static_cast<std::uint32_t>(n));
  w.u32(static_cast<std::uint32_t>(e.size()));
  w.f64(e.mass());
  for (double l : e.weights()) w.f64(l);
  for (const auto& c : e.wavefunctions())
    for (const auto& v : c) {
      w.f64(v.real());
      w.f64(v.imag());
    }
  return w.take();
}

void write_snapshot(const Ensemble& e, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(e);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, path.string() + ": cannot write snapshot");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, path.string() + ": write failed");
}

Ensemble decode_snapshot(const std::vector<unsigned char>& bytes, std::shared_ptr<const SineBasis> basis) {
  Reader r(bytes);
  const SnapshotHeader h = read_header(r);
  const auto& dom = basis->domain();
  bool match = h.modes.size() == static_cast<std::size_t>(dom.dimension);
  for (std::size_t i = 0; match && i < h.modes.size(); ++i) match = h.modes[i] == static_cast<std::uint32_t>(dom.modes[i]);
  if (!match) throw Error(ErrorCode::DimensionMismatch, "snapshot: stored dimension/mode cutoffs differ from the configured domain");
  std::vector<double> weights(h.count);
  for (auto& l : weights) l = r.f64();
  std::vector<SpectralCoeffs> psi(h.count, SpectralCoeffs(basis->mode_count()));
  for (auto& c : psi)
    for (auto& v : c) {
      const double re = r.f64();
      const double im = r.f64();
      v = Complex(re, im);
    }
  if (!r.done()) throw Error(ErrorCode::Format, "snapshot: trailing bytes after coefficient data");
  return Ensemble(std::move(basis), std::move(weights), std::move(psi), h.mass);
}

Ensemble read_snapshot(const std::filesystem::path& path, std::shared_ptr<const SineBasis> basis) {
  return decode_snapshot(slurp(path), std::move(basis));
}

SnapshotHeader read_snapshot_header(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  Reader r(bytes);
  return read_header(r);
}

}  // namespace srsp
