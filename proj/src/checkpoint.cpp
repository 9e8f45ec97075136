#include "hdmf/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "hdmf/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

namespace hdmf {

namespace {

constexpr char kHdmfMagic[4] = {'H', 'D', 'M', 'F'};
constexpr char kMfMagic[4] = {'M', 'F', 'C', 'P'};

class ByteWriter {
public:
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void magic(const char (&m)[4]) { raw(m, 4); }
  void doubles(const std::vector<double>& vs) { raw(vs.data(), vs.size() * sizeof(double)); }

  void write_with_crc(const std::string& path) {
    const auto crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(bytes_.data()), bytes_.size()));
    u32(crc);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint: " + path);
    out.write(bytes_.data(), static_cast<std::streamsize>(bytes_.size()));
    if (!out) throw DataError("short write on checkpoint: " + path);
  }

private:
  void raw(const void* p, std::size_t n) {
    const char* c = static_cast<const char*>(p);
    bytes_.insert(bytes_.end(), c, c + n);
  }
  std::vector<char> bytes_;
};

class ByteReader {
public:
  explicit ByteReader(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);
    bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    if (bytes_.size() < 8) throw DataError("checkpoint truncated: " + path);

    const std::size_t payload = bytes_.size() - 4;
    std::uint32_t stored;
    std::memcpy(&stored, bytes_.data() + payload, 4);
    const auto computed = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(bytes_.data()), payload));
    if (stored != computed) throw DataError("checkpoint CRC mismatch: " + path);
    end_ = payload;
  }

  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    raw(&v, sizeof v);
    return v;
  }
  void doubles(std::vector<double>& out, std::size_t count) {
    out.resize(count);
    raw(out.data(), count * sizeof(double));
  }
  std::array<char, 4> magic() {
    std::array<char, 4> m;
    raw(m.data(), 4);
    return m;
  }
  bool exhausted() const { return pos_ == end_; }

private:
  void raw(void* p, std::size_t n) {
    if (pos_ + n > end_) throw DataError("checkpoint truncated");
    std::memcpy(p, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::vector<char> bytes_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
};

void write_param_block(ByteWriter& w, const ModelParams& p) {
  for (const DenseMatrix& wm : p.weights) w.doubles(wm.values());
  for (const auto& b : p.biases) w.doubles(b);
}

ModelParams read_param_block(ByteReader& r, const Architecture& arch) {
  ModelParams p;
  p.arch = arch;
  const std::size_t k = arch.depth();
  std::size_t prev = arch.input_dim;
  for (std::size_t j = 0; j < k; ++j) {
    DenseMatrix w(arch.encoder_sizes[j], prev);
    r.doubles(w.values(), w.size());
    p.weights.push_back(std::move(w));
    prev = arch.encoder_sizes[j];
  }
  for (std::size_t j = 1; j <= 2 * k; ++j) {
    std::vector<double> b;
    r.doubles(b, arch.layer_dim(j));
    p.biases.push_back(std::move(b));
  }
  return p;
}

}  // namespace

void save_checkpoint(const HdmfModel& model, const std::string& path) {
  const Architecture& arch = model.params.arch;
  ByteWriter w;
  w.magic(kHdmfMagic);
  w.u32(model.tied() ? 1u : 2u);
  w.u32(static_cast<std::uint32_t>(arch.depth()));
  w.u32(static_cast<std::uint32_t>(arch.input_dim));
  for (std::size_t s : arch.encoder_sizes) w.u32(static_cast<std::uint32_t>(s));
  write_param_block(w, model.params);
  if (!model.tied()) write_param_block(w, *model.item_params);
  w.write_with_crc(path);
}

void save_checkpoint(const MfModel& model, const std::string& path) {
  ByteWriter w;
  w.magic(kMfMagic);
  w.u32(1u);
  w.u32(static_cast<std::uint32_t>(model.latent_dim));
  w.u32(static_cast<std::uint32_t>(model.user_factors.rows()));
  w.u32(static_cast<std::uint32_t>(model.item_factors.rows()));
  w.doubles(model.user_factors.values());
  w.doubles(model.item_factors.values());
  w.write_with_crc(path);
}

AnyModel load_checkpoint(const std::string& path) {
  ByteReader r(path);
  const auto magic = r.magic();

  if (std::memcmp(magic.data(), kHdmfMagic, 4) == 0) {
    const std::uint32_t version = r.u32();
    if (version != 1 && version != 2)
      throw DataError("unsupported checkpoint version " + std::to_string(version));
    Architecture arch;
    const std::uint32_t k = r.u32();
    arch.input_dim = r.u32();
    for (std::uint32_t j = 0; j < k; ++j) arch.encoder_sizes.push_back(r.u32());
    arch.validate();

    HdmfModel model;
    model.params = read_param_block(r, arch);
    if (version == 2) model.item_params = read_param_block(r, arch);
    if (!r.exhausted()) throw DataError("trailing bytes in checkpoint: " + path);
    return model;
  }

  if (std::memcmp(magic.data(), kMfMagic, 4) == 0) {
    const std::uint32_t version = r.u32();
    if (version != 1)
      throw DataError("unsupported checkpoint version " + std::to_string(version));
    MfModel model;
    model.latent_dim = r.u32();
    const std::uint32_t users = r.u32();
    const std::uint32_t items = r.u32();
    model.user_factors = DenseMatrix(users, model.latent_dim);
    model.item_factors = DenseMatrix(items, model.latent_dim);
    r.doubles(model.user_factors.values(), model.user_factors.size());
    r.doubles(model.item_factors.values(), model.item_factors.size());
    if (!r.exhausted()) throw DataError("trailing bytes in checkpoint: " + path);
    return model;
  }

  throw DataError("not a recognized checkpoint file: " + path);
}

}  // namespace hdmf
