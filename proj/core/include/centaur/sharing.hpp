#pragma once

#include <deque>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "centaur/ring.hpp"
#include "centaur/rng.hpp"

namespace centaur {

// One party's additive share of a secret RingTensor.
struct SharedTensor {
  RingTensor share;
  int index = 0;  // which of ([x]_0, [x]_1) this is

  const Shape& shape() const { return share.shape(); }
};

// [x]_0 uniform over the ring, [x]_1 = x - [x]_0 mod L.
std::pair<SharedTensor, SharedTensor> share(const RingTensor& x, Rng& rng);
RingTensor reconstruct(const SharedTensor& s0, const SharedTensor& s1);

// Pi_Add: purely local, zero communication.
SharedTensor add_shares(const SharedTensor& a, const SharedTensor& b);
SharedTensor sub_shares(const SharedTensor& a, const SharedTensor& b);
// Public-constant addition; only party index 0 folds the constant in.
SharedTensor add_public(const SharedTensor& a, const RingTensor& pub);
SharedTensor add_public_row(const SharedTensor& a, const RingTensor& pub_row);

enum class MulOrientation { Left, Right, RightTranspose };

// Pi_ScalMul: public x shared product, local, zero communication. Truncates by
// min(scale_pub, scale_shared) so raw 0/1 operands stay exact.
SharedTensor pi_scalmul(const RingTensor& pub, const SharedTensor& shared,
                        MulOrientation orientation);

// One party's half of a dealer-issued Beaver triple with C = A x B in the ring.
struct TripleShare {
  RingTensor a, b, c;
  int index = 0;
  bool consumed = false;
};

// Dealer-side object holding both halves.
struct BeaverTriple {
  TripleShare part[2];
};

BeaverTriple make_beaver_triple(const Shape& x_shape, const Shape& y_shape,
                                const RingConfig& cfg, Rng& rng);

// Dealer-provisioned per-party queue of triple shares, keyed by operand shapes.
// Exhaustion and shape mismatches are errors, never silent reuse.
class TripleSupply {
 public:
  void push(TripleShare t, const Shape& x_shape, const Shape& y_shape);
  TripleShare pop(const Shape& x_shape, const Shape& y_shape);
  size_t size() const;

 private:
  std::map<std::pair<Shape, Shape>, std::deque<TripleShare>> queues_;
};

// Pi_MatMul via Beaver opening, split into the local halves so transports and
// transcript recording stay outside this module. Each party sends the message
// from beaver_open (its shares of E = X - A and D = Y - B, batched), receives
// the peer's, and calls beaver_finish.
std::vector<uint64_t> beaver_open(const SharedTensor& x, const SharedTensor& y, TripleShare& t);
SharedTensor beaver_finish(const SharedTensor& x, const SharedTensor& y, const TripleShare& t,
                           std::span<const uint64_t> my_msg, std::span<const uint64_t> peer_msg,
                           bool truncate_product = true);

// Convenience single-call form over an abstract duplex exchange.
struct BeaverExchange {
  virtual ~BeaverExchange() = default;
  virtual std::vector<uint64_t> exchange(std::span<const uint64_t> out_words) = 0;
};
SharedTensor pi_matmul(const SharedTensor& x, const SharedTensor& y, TripleShare& t,
                       BeaverExchange& link, bool truncate_product = true);

}  // namespace centaur
