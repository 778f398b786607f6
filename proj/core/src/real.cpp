#include "centaur/real.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "centaur/errors.hpp"

namespace centaur {

size_t shape_numel(const Shape& s) {
  size_t n = 1;
  for (size_t d : s) n *= d;
  return n;
}

bool shape_eq(const Shape& a, const Shape& b) { return a == b; }

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ")";
  return os.str();
}

RealTensor::RealTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_numel(shape_) != data_.size())
    throw ShapeMismatch("RealTensor: shape " + shape_str(shape_) + " does not match data size");
  for (double v : data_)
    if (!std::isfinite(v)) throw Error("RealTensor: non-finite entry");
}

RealTensor RealTensor::zeros(Shape shape) {
  size_t n = shape_numel(shape);
  return RealTensor(std::move(shape), std::vector<double>(n, 0.0));
}

RealTensor RealTensor::full(Shape shape, double v) {
  size_t n = shape_numel(shape);
  return RealTensor(std::move(shape), std::vector<double>(n, v));
}

size_t RealTensor::rows() const {
  if (shape_.size() < 2) return 1;
  size_t r = 1;
  for (size_t i = 0; i + 1 < shape_.size(); ++i) r *= shape_[i];
  return r;
}

size_t RealTensor::cols() const { return shape_.empty() ? 1 : shape_.back(); }

RealTensor RealTensor::reshaped(Shape s) const {
  if (shape_numel(s) != data_.size())
    throw ShapeMismatch("reshape: numel mismatch " + shape_str(s));
  return RealTensor(std::move(s), data_);
}

RealTensor RealTensor::transposed_last2() const {
  if (shape_.size() < 2) throw ShapeMismatch("transpose: rank < 2");
  size_t p = shape_[shape_.size() - 2], q = shape_.back();
  size_t batch = data_.size() / (p * q);
  Shape out_shape = shape_;
  std::swap(out_shape[out_shape.size() - 2], out_shape.back());
  std::vector<double> out(data_.size());
  for (size_t b = 0; b < batch; ++b)
    for (size_t i = 0; i < p; ++i)
      for (size_t j = 0; j < q; ++j)
        out[b * p * q + j * p + i] = data_[b * p * q + i * q + j];
  return RealTensor(std::move(out_shape), std::move(out));
}

RealTensor RealTensor::row(size_t r) const {
  size_t c = cols();
  if (r >= rows()) throw ShapeMismatch("row index out of range");
  return RealTensor({1, c}, std::vector<double>(data_.begin() + r * c, data_.begin() + (r + 1) * c));
}

RealTensor& RealTensor::operator+=(const RealTensor& o) {
  if (!shape_eq(shape_, o.shape_)) throw ShapeMismatch("add: " + shape_str(shape_) + " vs " + shape_str(o.shape_));
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

RealTensor& RealTensor::operator-=(const RealTensor& o) {
  if (!shape_eq(shape_, o.shape_)) throw ShapeMismatch("sub: " + shape_str(shape_) + " vs " + shape_str(o.shape_));
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

RealTensor& RealTensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

void RealTensor::add_row_vector(const RealTensor& v) {
  if (v.numel() != cols()) throw ShapeMismatch("add_row_vector: width mismatch");
  size_t r = rows(), c = cols();
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) data_[i * c + j] += v.data_[j];
}

double RealTensor::max_abs_diff(const RealTensor& o) const {
  if (!shape_eq(shape_, o.shape_)) throw ShapeMismatch("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::fabs(data_[i] - o.data_[i]));
  return m;
}

namespace {

struct MatDims {
  size_t batch, p, q, r;
};

MatDims mat_dims(const Shape& a, const Shape& b, bool b_transposed) {
  if (a.size() < 2 || b.size() < 2 || a.size() != b.size())
    throw ShapeMismatch("matmul: rank mismatch " + shape_str(a) + " vs " + shape_str(b));
  size_t batch = 1;
  for (size_t i = 0; i + 2 < a.size(); ++i) {
    if (a[i] != b[i]) throw ShapeMismatch("matmul: batch mismatch");
    batch *= a[i];
  }
  size_t p = a[a.size() - 2], q = a.back();
  size_t bq = b_transposed ? b.back() : b[b.size() - 2];
  size_t r = b_transposed ? b[b.size() - 2] : b.back();
  if (q != bq) throw ShapeMismatch("matmul: inner dims " + shape_str(a) + " vs " + shape_str(b));
  return {batch, p, q, r};
}

Shape mat_out_shape(const Shape& a, size_t r) {
  Shape s = a;
  s.back() = r;
  return s;
}

}  // namespace

RealTensor matmul(const RealTensor& a, const RealTensor& b) {
  auto [batch, p, q, r] = mat_dims(a.shape(), b.shape(), false);
  std::vector<double> out(batch * p * r, 0.0);
  const double* ad = a.data();
  const double* bd = b.data();
  for (size_t bt = 0; bt < batch; ++bt)
    for (size_t i = 0; i < p; ++i)
      for (size_t kk = 0; kk < q; ++kk) {
        double av = ad[bt * p * q + i * q + kk];
        for (size_t j = 0; j < r; ++j)
          out[bt * p * r + i * r + j] += av * bd[bt * q * r + kk * r + j];
      }
  return RealTensor(mat_out_shape(a.shape(), r), std::move(out));
}

RealTensor matmul_nt(const RealTensor& a, const RealTensor& b) {
  auto [batch, p, q, r] = mat_dims(a.shape(), b.shape(), true);
  std::vector<double> out(batch * p * r, 0.0);
  const double* ad = a.data();
  const double* bd = b.data();
  for (size_t bt = 0; bt < batch; ++bt)
    for (size_t i = 0; i < p; ++i)
      for (size_t j = 0; j < r; ++j) {
        double acc = 0.0;
        for (size_t kk = 0; kk < q; ++kk)
          acc += ad[bt * p * q + i * q + kk] * bd[bt * q * r + j * q + kk];
        out[bt * p * r + i * r + j] = acc;
      }
  return RealTensor(mat_out_shape(a.shape(), r), std::move(out));
}

}  // namespace centaur
