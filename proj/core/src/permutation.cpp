#include "centaur/permutation.hpp"

#include <cmath>
#include <numeric>

#include "centaur/errors.hpp"

namespace centaur {

PermSpec::PermSpec(std::vector<uint32_t> indices) : idx_(std::move(indices)) {
  std::vector<bool> seen(idx_.size(), false);
  for (uint32_t v : idx_) {
    if (v >= idx_.size() || seen[v]) throw DimMismatch("PermSpec: not a permutation");
    seen[v] = true;
  }
}

PermSpec PermSpec::identity(size_t m) {
  std::vector<uint32_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0u);
  return PermSpec(std::move(idx));
}

bool PermSpec::is_identity() const {
  for (size_t j = 0; j < idx_.size(); ++j)
    if (idx_[j] != j) return false;
  return true;
}

PermSpec PermSpec::inverse() const {
  std::vector<uint32_t> inv(idx_.size());
  for (size_t j = 0; j < idx_.size(); ++j) inv[idx_[j]] = static_cast<uint32_t>(j);
  return PermSpec(std::move(inv));
}

PermSpec compose(const PermSpec& p, const PermSpec& q) {
  if (p.size() != q.size()) throw DimMismatch("compose: size mismatch");
  std::vector<uint32_t> idx(p.size());
  for (size_t j = 0; j < p.size(); ++j) idx[j] = p.idx_[q.idx_[j]];
  return PermSpec(std::move(idx));
}

PermSpec random_perm(size_t m, Rng& rng) {
  if (m < 1) throw DimMismatch("random_perm: m >= 1 required");
  std::vector<uint32_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0u);
  rng.shuffle(idx);
  return PermSpec(std::move(idx));
}

double log2_factorial(size_t m) {
  double s = 0.0;
  for (size_t k = 2; k <= m; ++k) s += std::log2(static_cast<double>(k));
  return s;
}

namespace {

template <typename T>
std::vector<T> gather_cols(const std::vector<T>& in, const Shape& shape, const PermSpec& p,
                           bool inverse_gather) {
  size_t c = shape.back();
  if (c != p.size()) throw DimMismatch("column permutation: dim mismatch");
  size_t r = 1;
  for (size_t i = 0; i + 1 < shape.size(); ++i) r *= shape[i];
  std::vector<T> out(in.size());
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) {
      if (inverse_gather)
        out[i * c + p[j]] = in[i * c + j];
      else
        out[i * c + j] = in[i * c + p[j]];
    }
  return out;
}

template <typename T>
std::vector<T> gather_rows(const std::vector<T>& in, const Shape& shape, const PermSpec& p,
                           bool inverse_gather) {
  if (shape.size() < 2) throw DimMismatch("row permutation: rank < 2");
  size_t rows = shape[shape.size() - 2], c = shape.back();
  if (rows != p.size()) throw DimMismatch("row permutation: dim mismatch");
  size_t batch = in.size() / (rows * c);
  std::vector<T> out(in.size());
  for (size_t b = 0; b < batch; ++b)
    for (size_t i = 0; i < rows; ++i) {
      size_t src = b * rows * c + (inverse_gather ? i : p[i]) * c;
      size_t dst = b * rows * c + (inverse_gather ? p[i] : i) * c;
      for (size_t j = 0; j < c; ++j) out[dst + j] = in[src + j];
    }
  return out;
}

}  // namespace

RealTensor apply_cols(const RealTensor& x, const PermSpec& p) {
  return RealTensor(x.shape(), gather_cols(std::vector<double>(x.data(), x.data() + x.numel()),
                                           x.shape(), p, false));
}
RealTensor unapply_cols(const RealTensor& x, const PermSpec& p) {
  return RealTensor(x.shape(), gather_cols(std::vector<double>(x.data(), x.data() + x.numel()),
                                           x.shape(), p, true));
}
RingTensor apply_cols(const RingTensor& x, const PermSpec& p) {
  return RingTensor(x.shape(), gather_cols(std::vector<uint64_t>(x.data(), x.data() + x.numel()),
                                           x.shape(), p, false),
                    x.config(), x.scale());
}
RingTensor unapply_cols(const RingTensor& x, const PermSpec& p) {
  return RingTensor(x.shape(), gather_cols(std::vector<uint64_t>(x.data(), x.data() + x.numel()),
                                           x.shape(), p, true),
                    x.config(), x.scale());
}

RealTensor apply_rows(const RealTensor& x, const PermSpec& p) {
  return RealTensor(x.shape(), gather_rows(std::vector<double>(x.data(), x.data() + x.numel()),
                                           x.shape(), p, false));
}
RealTensor unapply_rows(const RealTensor& x, const PermSpec& p) {
  return RealTensor(x.shape(), gather_rows(std::vector<double>(x.data(), x.data() + x.numel()),
                                           x.shape(), p, true));
}
RingTensor apply_rows(const RingTensor& x, const PermSpec& p) {
  return RingTensor(x.shape(), gather_rows(std::vector<uint64_t>(x.data(), x.data() + x.numel()),
                                           x.shape(), p, false),
                    x.config(), x.scale());
}
RingTensor unapply_rows(const RingTensor& x, const PermSpec& p) {
  return RingTensor(x.shape(), gather_rows(std::vector<uint64_t>(x.data(), x.data() + x.numel()),
                                           x.shape(), p, true),
                    x.config(), x.scale());
}

RingTensor perm_matrix(const PermSpec& p, const RingConfig& cfg) {
  size_t m = p.size();
  std::vector<uint64_t> data(m * m, 0);
  for (size_t j = 0; j < m; ++j) data[p[j] * m + j] = 1;
  return RingTensor({m, m}, std::move(data), cfg, 0);
}

std::pair<SharedTensor, SharedTensor> as_shared_matrix(const PermSpec& p, const RingConfig& cfg,
                                                       Rng& rng) {
  return share(perm_matrix(p, cfg), rng);
}

PermSet make_perm_set(size_t d, size_t n, size_t k, uint64_t seed) {
  Rng rng(seed);
  PermSet s;
  s.pi = random_perm(d, rng);
  s.pi1 = random_perm(n, rng);
  s.pi2 = random_perm(k, rng);
  s.seed = seed;
  return s;
}

PermSet identity_perm_set(size_t d, size_t n, size_t k) {
  return PermSet{PermSpec::identity(d), PermSpec::identity(n), PermSpec::identity(k), 0};
}

PermSet inverse_perm_set(const PermSet& s) {
  return PermSet{s.pi.inverse(), s.pi1.inverse(), s.pi2.inverse(), s.seed};
}

}  // namespace centaur
