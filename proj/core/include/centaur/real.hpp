#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace centaur {

using Shape = std::vector<size_t>;

size_t shape_numel(const Shape& s);
bool shape_eq(const Shape& a, const Shape& b);
std::string shape_str(const Shape& s);

// Dense row-major tensor of binary64 values. Construction rejects NaN/Inf.
class RealTensor {
 public:
  RealTensor() = default;
  RealTensor(Shape shape, std::vector<double> data);
  static RealTensor zeros(Shape shape);
  static RealTensor full(Shape shape, double v);

  const Shape& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t numel() const { return data_.size(); }
  size_t rows() const;
  size_t cols() const;

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& at(size_t i) { return data_[i]; }
  double at(size_t i) const { return data_[i]; }
  double& at2(size_t r, size_t c) { return data_[r * cols() + c]; }
  double at2(size_t r, size_t c) const { return data_[r * cols() + c]; }

  RealTensor reshaped(Shape s) const;
  RealTensor transposed_last2() const;
  RealTensor row(size_t r) const;  // leading-index slice, shape (1, cols)

  RealTensor& operator+=(const RealTensor& o);
  RealTensor& operator-=(const RealTensor& o);
  RealTensor& operator*=(double s);

  friend RealTensor operator+(RealTensor a, const RealTensor& b) { return a += b; }
  friend RealTensor operator-(RealTensor a, const RealTensor& b) { return a -= b; }

  // Broadcast a length-cols vector over every row.
  void add_row_vector(const RealTensor& v);

  double max_abs_diff(const RealTensor& o) const;

 private:
  Shape shape_;
  std::vector<double> data_;
};

// a(.., p, q) x b(.., q, r); 2-D or batched 3-D with equal leading dim.
RealTensor matmul(const RealTensor& a, const RealTensor& b);
// a(.., p, q) x b(.., r, q)^T
RealTensor matmul_nt(const RealTensor& a, const RealTensor& b);

}  // namespace centaur
