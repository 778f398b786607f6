#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "centaur/ring.hpp"
#include "centaur/rng.hpp"
#include "centaur/sharing.hpp"

namespace centaur {

// A permutation of {0..m-1} stored as an index vector, standing in for the
// m x m permutation matrix P with P[idx[j], j] = 1. Right-multiplying by P
// gathers columns: (X P)[.., j] = X[.., idx[j]].
class PermSpec {
 public:
  PermSpec() = default;
  explicit PermSpec(std::vector<uint32_t> indices);
  static PermSpec identity(size_t m);

  size_t size() const { return idx_.size(); }
  uint32_t operator[](size_t j) const { return idx_[j]; }
  const std::vector<uint32_t>& indices() const { return idx_; }
  bool is_identity() const;

  PermSpec inverse() const;
  // compose(p, q): apply p first, then q (matrix product P_p x P_q).
  friend PermSpec compose(const PermSpec& p, const PermSpec& q);
  bool operator==(const PermSpec&) const = default;

 private:
  std::vector<uint32_t> idx_;
};

// Uniform over the m! permutations (Fisher-Yates).
PermSpec random_perm(size_t m, Rng& rng);

double log2_factorial(size_t m);

// X P (column gather) and its inverse X P^T.
RealTensor apply_cols(const RealTensor& x, const PermSpec& p);
RealTensor unapply_cols(const RealTensor& x, const PermSpec& p);
RingTensor apply_cols(const RingTensor& x, const PermSpec& p);
RingTensor unapply_cols(const RingTensor& x, const PermSpec& p);

// P^T X (row gather, per matrix in a batch) and its inverse P X.
RealTensor apply_rows(const RealTensor& x, const PermSpec& p);
RealTensor unapply_rows(const RealTensor& x, const PermSpec& p);
RingTensor apply_rows(const RingTensor& x, const PermSpec& p);
RingTensor unapply_rows(const RingTensor& x, const PermSpec& p);

// The m x m 0/1 matrix of p as raw residues (scale 1, not 2^f), so matmul
// against it needs no truncation.
RingTensor perm_matrix(const PermSpec& p, const RingConfig& cfg);
std::pair<SharedTensor, SharedTensor> as_shared_matrix(const PermSpec& p, const RingConfig& cfg,
                                                       Rng& rng);

// Pi = {pi (d x d), pi1 (n x n), pi2 (k x k)}.
struct PermSet {
  PermSpec pi, pi1, pi2;
  uint64_t seed = 0;
};

PermSet make_perm_set(size_t d, size_t n, size_t k, uint64_t seed);
PermSet identity_perm_set(size_t d, size_t n, size_t k);
PermSet inverse_perm_set(const PermSet& s);

}  // namespace centaur
