#include "centaur/ring.hpp"

#include <cmath>

#include "centaur/errors.hpp"

namespace centaur {

void RingConfig::validate() const {
  if (bits != 32 && bits != 64) throw ConfigMismatch("RingConfig: bits must be 32 or 64");
  if (frac_bits <= 0 || frac_bits >= bits) throw ConfigMismatch("RingConfig: need 0 < f < l");
}

int64_t ring_signed(uint64_t r, const RingConfig& cfg) {
  if (cfg.bits == 64) return static_cast<int64_t>(r);
  uint64_t sign_bit = uint64_t{1} << (cfg.bits - 1);
  uint64_t v = r & cfg.mask();
  if (v & sign_bit) return static_cast<int64_t>(v) - (int64_t{1} << cfg.bits);
  return static_cast<int64_t>(v);
}

uint64_t ring_from_signed(int64_t v, const RingConfig& cfg) {
  return static_cast<uint64_t>(v) & cfg.mask();
}

RingTensor::RingTensor(Shape shape, std::vector<uint64_t> data, RingConfig cfg, int scale)
    : shape_(std::move(shape)), data_(std::move(data)), cfg_(cfg), scale_(scale) {
  if (shape_numel(shape_) != data_.size())
    throw ShapeMismatch("RingTensor: shape " + shape_str(shape_) + " does not match data size");
  uint64_t m = cfg_.mask();
  for (uint64_t& v : data_) v &= m;
}

RingTensor RingTensor::zeros(Shape shape, RingConfig cfg, int scale) {
  size_t n = shape_numel(shape);
  return RingTensor(std::move(shape), std::vector<uint64_t>(n, 0), cfg, scale);
}

size_t RingTensor::rows() const {
  if (shape_.size() < 2) return 1;
  size_t r = 1;
  for (size_t i = 0; i + 1 < shape_.size(); ++i) r *= shape_[i];
  return r;
}

size_t RingTensor::cols() const { return shape_.empty() ? 1 : shape_.back(); }

RingTensor RingTensor::reshaped(Shape s) const {
  if (shape_numel(s) != data_.size()) throw ShapeMismatch("reshape: numel mismatch");
  return RingTensor(std::move(s), data_, cfg_, scale_);
}

RingTensor RingTensor::transposed_last2() const {
  if (shape_.size() < 2) throw ShapeMismatch("transpose: rank < 2");
  size_t p = shape_[shape_.size() - 2], q = shape_.back();
  size_t batch = data_.size() / (p * q);
  Shape out_shape = shape_;
  std::swap(out_shape[out_shape.size() - 2], out_shape.back());
  std::vector<uint64_t> out(data_.size());
  for (size_t b = 0; b < batch; ++b)
    for (size_t i = 0; i < p; ++i)
      for (size_t j = 0; j < q; ++j)
        out[b * p * q + j * p + i] = data_[b * p * q + i * q + j];
  return RingTensor(std::move(out_shape), std::move(out), cfg_, scale_);
}

RingTensor RingTensor::row(size_t r) const {
  size_t c = cols();
  if (r >= rows()) throw ShapeMismatch("row index out of range");
  return RingTensor({1, c}, std::vector<uint64_t>(data_.begin() + r * c, data_.begin() + (r + 1) * c),
                    cfg_, scale_);
}

bool RingTensor::operator==(const RingTensor& o) const {
  return shape_ == o.shape_ && data_ == o.data_ && cfg_ == o.cfg_ && scale_ == o.scale_;
}

namespace {
void check_compatible(const RingTensor& a, const RingTensor& b, const char* op) {
  if (!shape_eq(a.shape(), b.shape()))
    throw ShapeMismatch(std::string(op) + ": " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  if (!(a.config() == b.config())) throw ConfigMismatch(std::string(op) + ": ring config mismatch");
}
}  // namespace

RingTensor& RingTensor::operator+=(const RingTensor& o) {
  check_compatible(*this, o, "ring add");
  uint64_t m = cfg_.mask();
  for (size_t i = 0; i < data_.size(); ++i) data_[i] = (data_[i] + o.data_[i]) & m;
  return *this;
}

RingTensor& RingTensor::operator-=(const RingTensor& o) {
  check_compatible(*this, o, "ring sub");
  uint64_t m = cfg_.mask();
  for (size_t i = 0; i < data_.size(); ++i) data_[i] = (data_[i] - o.data_[i]) & m;
  return *this;
}

RingTensor RingTensor::negated() const {
  RingTensor out = *this;
  uint64_t m = cfg_.mask();
  for (size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = (~out.data_[i] + 1) & m;
  return out;
}

RingTensor RingTensor::scalar_mul(uint64_t r) const {
  RingTensor out = *this;
  uint64_t m = cfg_.mask();
  for (size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = (out.data_[i] * r) & m;
  return out;
}

void RingTensor::add_row_vector(const RingTensor& v) {
  if (v.numel() != cols()) throw ShapeMismatch("add_row_vector: width mismatch");
  uint64_t m = cfg_.mask();
  size_t r = rows(), c = cols();
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) data_[i * c + j] = (data_[i * c + j] + v.data()[j]) & m;
}

uint64_t encode_scalar(double x, const RingConfig& cfg) {
  double limit = std::ldexp(1.0, cfg.bits - cfg.frac_bits - 1);
  if (!(std::fabs(x) < limit))
    throw MagnitudeOverflow("encode: |" + std::to_string(x) + "| >= 2^" +
                            std::to_string(cfg.bits - cfg.frac_bits - 1));
  double scaled = std::ldexp(x, cfg.frac_bits);
  // Round half away from zero so test vectors are bit-exact across builds.
  double rounded = scaled < 0.0 ? std::ceil(scaled - 0.5) : std::floor(scaled + 0.5);
  return ring_from_signed(static_cast<int64_t>(rounded), cfg);
}

RingTensor encode(const RealTensor& x, const RingConfig& cfg) {
  cfg.validate();
  std::vector<uint64_t> out(x.numel());
  for (size_t i = 0; i < x.numel(); ++i) out[i] = encode_scalar(x.at(i), cfg);
  return RingTensor(x.shape(), std::move(out), cfg, cfg.frac_bits);
}

RingTensor encode_raw(const RealTensor& x, const RingConfig& cfg) {
  cfg.validate();
  std::vector<uint64_t> out(x.numel());
  for (size_t i = 0; i < x.numel(); ++i)
    out[i] = ring_from_signed(static_cast<int64_t>(std::llround(x.at(i))), cfg);
  return RingTensor(x.shape(), std::move(out), cfg, 0);
}

RealTensor decode(const RingTensor& r) {
  std::vector<double> out(r.numel());
  double inv = std::ldexp(1.0, -r.scale());
  for (size_t i = 0; i < r.numel(); ++i)
    out[i] = static_cast<double>(ring_signed(r.at(i), r.config())) * inv;
  return RealTensor(r.shape(), std::move(out));
}

namespace {
struct MatDims {
  size_t batch, p, q, r;
};

MatDims ring_mat_dims(const RingTensor& a, const RingTensor& b, bool b_t) {
  if (!(a.config() == b.config())) throw ConfigMismatch("matmul: ring config mismatch");
  const Shape& as = a.shape();
  const Shape& bs = b.shape();
  if (as.size() < 2 || bs.size() < 2 || as.size() != bs.size())
    throw ShapeMismatch("matmul: rank mismatch " + shape_str(as) + " vs " + shape_str(bs));
  size_t batch = 1;
  for (size_t i = 0; i + 2 < as.size(); ++i) {
    if (as[i] != bs[i]) throw ShapeMismatch("matmul: batch mismatch");
    batch *= as[i];
  }
  size_t p = as[as.size() - 2], q = as.back();
  size_t bq = b_t ? bs.back() : bs[bs.size() - 2];
  size_t r = b_t ? bs[bs.size() - 2] : bs.back();
  if (q != bq) throw ShapeMismatch("matmul: inner dims " + shape_str(as) + " vs " + shape_str(bs));
  return {batch, p, q, r};
}
}  // namespace

RingTensor matmul(const RingTensor& a, const RingTensor& b) {
  auto [batch, p, q, r] = ring_mat_dims(a, b, false);
  uint64_t m = a.config().mask();
  std::vector<uint64_t> out(batch * p * r, 0);
  const uint64_t* ad = a.data();
  const uint64_t* bd = b.data();
  for (size_t bt = 0; bt < batch; ++bt)
    for (size_t i = 0; i < p; ++i)
      for (size_t kk = 0; kk < q; ++kk) {
        uint64_t av = ad[bt * p * q + i * q + kk];
        for (size_t j = 0; j < r; ++j) {
          uint64_t& o = out[bt * p * r + i * r + j];
          o = (o + av * bd[bt * q * r + kk * r + j]) & m;
        }
      }
  Shape os = a.shape();
  os.back() = r;
  return RingTensor(std::move(os), std::move(out), a.config(), a.scale() + b.scale());
}

RingTensor matmul_nt(const RingTensor& a, const RingTensor& b) {
  auto [batch, p, q, r] = ring_mat_dims(a, b, true);
  uint64_t m = a.config().mask();
  std::vector<uint64_t> out(batch * p * r, 0);
  const uint64_t* ad = a.data();
  const uint64_t* bd = b.data();
  for (size_t bt = 0; bt < batch; ++bt)
    for (size_t i = 0; i < p; ++i)
      for (size_t j = 0; j < r; ++j) {
        uint64_t acc = 0;
        for (size_t kk = 0; kk < q; ++kk)
          acc += ad[bt * p * q + i * q + kk] * bd[bt * q * r + j * q + kk];
        out[bt * p * r + i * r + j] = acc & m;
      }
  Shape os = a.shape();
  os.back() = r;
  return RingTensor(std::move(os), std::move(out), a.config(), a.scale() + b.scale());
}

RingTensor truncate(const RingTensor& r, int f) {
  if (f == 0) return r;
  std::vector<uint64_t> out(r.numel());
  const RingConfig& cfg = r.config();
  for (size_t i = 0; i < r.numel(); ++i)
    out[i] = ring_from_signed(ring_signed(r.at(i), cfg) >> f, cfg);
  return RingTensor(r.shape(), std::move(out), cfg, r.scale() - f);
}

}  // namespace centaur
