#include "tordust/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <memory>

#include "tordust/errors.hpp"

namespace tordust {

namespace {

constexpr char kMagic[8] = {'T', 'D', 'C', 'H', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64(out, v);
}

class Reader {
 public:
  Reader(const unsigned char* p, std::size_t len) : p_(p), end_(p + len) {}

  void bytes(void* dst, std::size_t k) {
    if (static_cast<std::size_t>(end_ - p_) < k)
      fail(ErrCode::format_error, "checkpoint truncated");
    std::memcpy(dst, p_, k);
    p_ += k;
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(b, 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    bytes(b, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  double f64() {
    const std::uint64_t v = u64();
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
  bool done() const { return p_ == end_; }

 private:
  const unsigned char* p_;
  const unsigned char* end_;
};

std::vector<unsigned char> slurp(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) fail(ErrCode::io_error, "cannot open checkpoint " + path);
  std::fseek(f.get(), 0, SEEK_END);
  const long len = std::ftell(f.get());
  if (len < 0) fail(ErrCode::io_error, "cannot size checkpoint " + path);
  std::fseek(f.get(), 0, SEEK_SET);
  std::vector<unsigned char> buf(static_cast<std::size_t>(len));
  if (!buf.empty() && std::fread(buf.data(), 1, buf.size(), f.get()) != buf.size())
    fail(ErrCode::io_error, "cannot read checkpoint " + path);
  return buf;
}

CheckpointInfo parse_header(Reader& r) {
  char magic[8];
  r.bytes(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    fail(ErrCode::format_error, "not a checkpoint file");
  CheckpointInfo info;
  info.version = r.u32();
  if (info.version != kVersion) fail(ErrCode::format_error, "unsupported checkpoint version");
  info.config_hash = r.u64();
  info.n = static_cast<int>(r.u32());
  info.t = r.f64();
  return info;
}

}  // namespace

void write_checkpoint(const std::string& path, const Grid3& grid, const FieldState& s,
                      std::uint64_t config_hash) {
  std::string buf;
  buf.reserve(32 + kNumFields * grid.size() * 8);
  buf.append(kMagic, 8);
  put_u32(buf, kVersion);
  put_u64(buf, config_hash);
  put_u32(buf, static_cast<std::uint32_t>(grid.n()));
  put_f64(buf, s.t);
  for (const Field* f : field_list(s)) {
    if (f->size() != grid.size()) fail(ErrCode::invalid_argument, "state size mismatch");
    for (double v : *f) put_f64(buf, v);
  }

  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) fail(ErrCode::io_error, "cannot create checkpoint " + path);
  if (std::fwrite(buf.data(), 1, buf.size(), f.get()) != buf.size())
    fail(ErrCode::io_error, "short write on checkpoint " + path);
  if (std::fflush(f.get()) != 0) fail(ErrCode::io_error, "flush failed on " + path);
}

CheckpointInfo read_checkpoint_info(const std::string& path) {
  const auto buf = slurp(path);
  Reader r(buf.data(), buf.size());
  return parse_header(r);
}

FieldState read_checkpoint(const std::string& path, const Grid3& grid,
                           std::uint64_t config_hash) {
  const auto buf = slurp(path);
  Reader r(buf.data(), buf.size());
  const CheckpointInfo info = parse_header(r);
  if (info.config_hash != config_hash)
    fail(ErrCode::config_mismatch, "checkpoint belongs to a different configuration");
  if (info.n != grid.n()) fail(ErrCode::config_mismatch, "checkpoint grid size mismatch");

  FieldState s;
  s.t = info.t;
  for (Field* f : field_list(s)) {
    f->resize(grid.size());
    for (double& v : *f) v = r.f64();
  }
  if (!r.done()) fail(ErrCode::format_error, "trailing bytes in checkpoint");
  return s;
}

}  // namespace tordust
