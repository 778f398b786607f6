#include "centaur/sharing.hpp"

#include <algorithm>

#include "centaur/errors.hpp"

namespace centaur {

std::pair<SharedTensor, SharedTensor> share(const RingTensor& x, Rng& rng) {
  uint64_t m = x.config().mask();
  std::vector<uint64_t> r0(x.numel());
  std::vector<uint64_t> r1(x.numel());
  for (size_t i = 0; i < x.numel(); ++i) {
    r0[i] = rng.residue(m);
    r1[i] = (x.at(i) - r0[i]) & m;
  }
  RingTensor t0(x.shape(), std::move(r0), x.config(), x.scale());
  RingTensor t1(x.shape(), std::move(r1), x.config(), x.scale());
  return {SharedTensor{std::move(t0), 0}, SharedTensor{std::move(t1), 1}};
}

RingTensor reconstruct(const SharedTensor& s0, const SharedTensor& s1) {
  if (s0.index == s1.index || s0.index < 0 || s0.index > 1 || s1.index < 0 || s1.index > 1)
    throw ShareIndexMismatch("reconstruct: need one share of each index");
  if (!shape_eq(s0.shape(), s1.shape()))
    throw ShapeMismatch("reconstruct: " + shape_str(s0.shape()) + " vs " + shape_str(s1.shape()));
  return s0.share + s1.share;
}

SharedTensor add_shares(const SharedTensor& a, const SharedTensor& b) {
  if (a.index != b.index) throw ShareIndexMismatch("add_shares: index mismatch");
  return SharedTensor{a.share + b.share, a.index};
}

SharedTensor sub_shares(const SharedTensor& a, const SharedTensor& b) {
  if (a.index != b.index) throw ShareIndexMismatch("sub_shares: index mismatch");
  return SharedTensor{a.share - b.share, a.index};
}

SharedTensor add_public(const SharedTensor& a, const RingTensor& pub) {
  if (a.index != 0) return a;
  return SharedTensor{a.share + pub, a.index};
}

SharedTensor add_public_row(const SharedTensor& a, const RingTensor& pub_row) {
  if (a.index != 0) return a;
  RingTensor out = a.share;
  out.add_row_vector(pub_row);
  return SharedTensor{std::move(out), a.index};
}

SharedTensor pi_scalmul(const RingTensor& pub, const SharedTensor& shared,
                        MulOrientation orientation) {
  RingTensor prod = [&] {
    switch (orientation) {
      case MulOrientation::Left:
        return matmul(pub, shared.share);
      case MulOrientation::Right:
        return matmul(shared.share, pub);
      case MulOrientation::RightTranspose:
        return matmul_nt(shared.share, pub);
    }
    throw Error("pi_scalmul: bad orientation");
  }();
  int f = std::min(pub.scale(), shared.share.scale());
  return SharedTensor{truncate(prod, f), shared.index};
}

BeaverTriple make_beaver_triple(const Shape& x_shape, const Shape& y_shape,
                                const RingConfig& cfg, Rng& rng) {
  uint64_t m = cfg.mask();
  auto random_tensor = [&](const Shape& s) {
    std::vector<uint64_t> v(shape_numel(s));
    for (uint64_t& x : v) x = rng.residue(m);
    return RingTensor(s, std::move(v), cfg, 0);
  };
  RingTensor a = random_tensor(x_shape);
  RingTensor b = random_tensor(y_shape);
  RingTensor c = matmul(a, b);
  auto [a0, a1] = share(a, rng);
  auto [b0, b1] = share(b, rng);
  auto [c0, c1] = share(c, rng);
  BeaverTriple t;
  t.part[0] = TripleShare{std::move(a0.share), std::move(b0.share), std::move(c0.share), 0, false};
  t.part[1] = TripleShare{std::move(a1.share), std::move(b1.share), std::move(c1.share), 1, false};
  return t;
}

void TripleSupply::push(TripleShare t, const Shape& x_shape, const Shape& y_shape) {
  queues_[{x_shape, y_shape}].push_back(std::move(t));
}

TripleShare TripleSupply::pop(const Shape& x_shape, const Shape& y_shape) {
  auto it = queues_.find({x_shape, y_shape});
  if (it == queues_.end() || it->second.empty())
    throw TripleExhausted("TripleSupply: no triple for " + shape_str(x_shape) + "x" +
                          shape_str(y_shape));
  TripleShare t = std::move(it->second.front());
  it->second.pop_front();
  return t;
}

size_t TripleSupply::size() const {
  size_t n = 0;
  for (const auto& [k, q] : queues_) n += q.size();
  return n;
}

namespace {
void check_triple(const SharedTensor& x, const SharedTensor& y, const TripleShare& t) {
  if (t.index != x.index || t.index != y.index)
    throw ShareIndexMismatch("pi_matmul: triple/share index mismatch");
  if (!shape_eq(t.a.shape(), x.shape()) || !shape_eq(t.b.shape(), y.shape()))
    throw TripleShapeMismatch("pi_matmul: triple shaped " + shape_str(t.a.shape()) + "x" +
                              shape_str(t.b.shape()) + ", operands " + shape_str(x.shape()) +
                              "x" + shape_str(y.shape()));
}
}  // namespace

std::vector<uint64_t> beaver_open(const SharedTensor& x, const SharedTensor& y, TripleShare& t) {
  check_triple(x, y, t);
  if (t.consumed) throw TripleExhausted("pi_matmul: triple already consumed");
  t.consumed = true;
  RingTensor e = x.share - t.a;
  RingTensor d = y.share - t.b;
  std::vector<uint64_t> msg;
  msg.reserve(e.numel() + d.numel());
  msg.insert(msg.end(), e.data(), e.data() + e.numel());
  msg.insert(msg.end(), d.data(), d.data() + d.numel());
  return msg;
}

SharedTensor beaver_finish(const SharedTensor& x, const SharedTensor& y, const TripleShare& t,
                           std::span<const uint64_t> my_msg, std::span<const uint64_t> peer_msg,
                           bool truncate_product) {
  size_t ne = x.share.numel(), nd = y.share.numel();
  if (my_msg.size() != ne + nd || peer_msg.size() != ne + nd)
    throw ShapeMismatch("beaver_finish: opening message size mismatch");
  const RingConfig& cfg = x.share.config();
  uint64_t m = cfg.mask();
  std::vector<uint64_t> ev(ne), dv(nd);
  for (size_t i = 0; i < ne; ++i) ev[i] = (my_msg[i] + peer_msg[i]) & m;
  for (size_t i = 0; i < nd; ++i) dv[i] = (my_msg[ne + i] + peer_msg[ne + i]) & m;
  RingTensor e(x.shape(), std::move(ev), cfg, 0);
  RingTensor d(y.shape(), std::move(dv), cfg, 0);

  // Z_j = C_j + A_j*D + E*B_j + (j == 0) E*D
  RingTensor z = t.c + matmul(t.a, d) + matmul(e, t.b);
  if (x.index == 0) z += matmul(e, d);

  int sx = x.share.scale(), sy = y.share.scale();
  int f = truncate_product ? std::min(sx, sy) : 0;
  RingTensor out = truncate(RingTensor(z.shape(), {z.data(), z.data() + z.numel()}, cfg, sx + sy), f);
  return SharedTensor{std::move(out), x.index};
}

SharedTensor pi_matmul(const SharedTensor& x, const SharedTensor& y, TripleShare& t,
                       BeaverExchange& link, bool truncate_product) {
  std::vector<uint64_t> mine = beaver_open(x, y, t);
  std::vector<uint64_t> theirs = link.exchange(mine);
  return beaver_finish(x, y, t, mine, theirs, truncate_product);
}

}  // namespace centaur
