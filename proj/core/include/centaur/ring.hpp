#pragma once

#include <cstdint>
#include <vector>

#include "centaur/real.hpp"

namespace centaur {

// Ring Z_{2^bits} with a fixed-point encoding using frac_bits fractional bits.
struct RingConfig {
  int bits = 64;       // l, ring modulus L = 2^l; 32 or 64
  int frac_bits = 16;  // f, 0 < f < l

  uint64_t mask() const { return bits == 64 ? ~uint64_t{0} : ((uint64_t{1} << bits) - 1); }
  void validate() const;
  bool operator==(const RingConfig&) const = default;
};

int64_t ring_signed(uint64_t r, const RingConfig& cfg);
uint64_t ring_from_signed(int64_t v, const RingConfig& cfg);

// Dense row-major tensor of residues mod 2^bits. `scale` records how many
// fractional bits the carried values currently have (f after encode(), 0 for
// raw 0/1 matrices), so protocols know how much to truncate after a product.
class RingTensor {
 public:
  RingTensor() = default;
  RingTensor(Shape shape, std::vector<uint64_t> data, RingConfig cfg, int scale);
  static RingTensor zeros(Shape shape, RingConfig cfg, int scale = 0);

  const Shape& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t numel() const { return data_.size(); }
  size_t rows() const;
  size_t cols() const;
  const RingConfig& config() const { return cfg_; }
  int scale() const { return scale_; }

  uint64_t* data() { return data_.data(); }
  const uint64_t* data() const { return data_.data(); }
  uint64_t at(size_t i) const { return data_[i]; }
  void set(size_t i, uint64_t v) { data_[i] = v & cfg_.mask(); }

  RingTensor reshaped(Shape s) const;
  RingTensor transposed_last2() const;
  RingTensor row(size_t r) const;

  bool operator==(const RingTensor& o) const;

  RingTensor& operator+=(const RingTensor& o);
  RingTensor& operator-=(const RingTensor& o);
  friend RingTensor operator+(RingTensor a, const RingTensor& b) { return a += b; }
  friend RingTensor operator-(RingTensor a, const RingTensor& b) { return a -= b; }
  RingTensor negated() const;

  // Elementwise product with a single residue (no truncation).
  RingTensor scalar_mul(uint64_t r) const;

  void add_row_vector(const RingTensor& v);

 private:
  Shape shape_;
  std::vector<uint64_t> data_;
  RingConfig cfg_;
  int scale_ = 0;
};

// Fixed-point lift: round(x * 2^f) mod 2^l, rounding half away from zero.
// Throws MagnitudeOverflow unless |x| < 2^(l-f-1).
RingTensor encode(const RealTensor& x, const RingConfig& cfg);
uint64_t encode_scalar(double x, const RingConfig& cfg);

// Raw residues at scale 0 (used for 0/1 permutation and one-hot matrices).
RingTensor encode_raw(const RealTensor& x, const RingConfig& cfg);

// Signed two's-complement interpretation divided by 2^scale.
RealTensor decode(const RingTensor& r);

// Exact modular matrix product, no truncation; result scale = a.scale + b.scale.
// 2-D x 2-D, or batched 3-D x 3-D with equal leading dimension.
RingTensor matmul(const RingTensor& a, const RingTensor& b);
RingTensor matmul_nt(const RingTensor& a, const RingTensor& b);

// Arithmetic right shift of the signed interpretation by f bits, re-reduced.
RingTensor truncate(const RingTensor& r, int f);

}  // namespace centaur
