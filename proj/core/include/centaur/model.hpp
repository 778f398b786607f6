#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "centaur/permutation.hpp"
#include "centaur/real.hpp"
#include "centaur/rng.hpp"

namespace centaur {

enum class Arch { Encoder, Decoder };
enum class Norm { LayerNorm, RmsNorm };
enum class Act { Gelu, SiluGate };

std::string to_string(Arch a);
std::string to_string(Norm n);
std::string to_string(Act a);
Arch arch_from_string(const std::string& s);
Norm norm_from_string(const std::string& s);
Act act_from_string(const std::string& s);

struct ModelConfig {
  size_t n = 8;        // max sequence length
  size_t d = 16;       // feature dimension
  size_t h = 2;        // attention heads
  size_t k = 32;       // FFN intermediate dimension
  size_t vocab = 50;   // vocabulary size
  size_t blocks = 2;   // transformer blocks
  size_t classes = 3;  // encoder output classes
  Arch arch = Arch::Encoder;
  Norm norm = Norm::LayerNorm;
  Act act = Act::Gelu;

  size_t d_head() const { return d / h; }
  size_t head_dim_out() const { return arch == Arch::Encoder ? classes : vocab; }
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

struct BlockParams {
  RealTensor wq, wk, wv;  // d x d, stored out-dim x in-dim, layers compute X W^T
  RealTensor wo;          // d x d
  RealTensor bo;          // 1 x d
  RealTensor w1;          // k x d
  RealTensor b1;          // 1 x k
  RealTensor w2;          // d x k
  RealTensor b2;          // 1 x d
  RealTensor ln1_g, ln1_b, ln2_g, ln2_b;  // 1 x d
};

struct ModelParams {
  RealTensor tok_embed;  // vocab x d
  RealTensor pos_embed;  // n x d
  RealTensor embed_ln_g, embed_ln_b;  // 1 x d
  std::vector<BlockParams> blocks;
  RealTensor pooler_w;  // d x d (encoder)
  RealTensor pooler_b;  // 1 x d
  RealTensor head_w;    // classes x d (encoder) or vocab x d (decoder)
  RealTensor head_b;    // 1 x classes or 1 x vocab

  void validate(const ModelConfig& cfg) const;
  bool equals(const ModelParams& o) const;
  // Any tensor of ours bit-identical to one of theirs (weight-exposure probe).
  bool shares_tensor_with(const ModelParams& o) const;
  size_t total_elems() const;
};

// Theta' = the permuted image of Theta under Pi; distinct type so the two
// parameter sets cannot be mixed up.
struct PermutedParams {
  ModelParams t;
};

// Applies {pi, pi1, pi2} per layer role: embeddings/QKV input-side (W pi),
// attention output projection output-side (pi^T W_O), FFN two-sided
// (pi2^T W1 pi, pi^T W2 pi2), norms (gamma pi, beta pi), pooler two-sided,
// classifier/LM head input-side. pi1 touches no parameter.
PermutedParams permute_params(const ModelParams& theta, const PermSet& perms);

ModelParams random_params(const ModelConfig& cfg, uint64_t seed);

// n x n additive mask, 0 where attention is allowed, -1e4 where blocked.
struct AttentionMask {
  RealTensor m;
  static AttentionMask none(size_t n);
  static AttentionMask causal(size_t n);
  static AttentionMask padding(size_t n, size_t valid_len);
  static AttentionMask for_run(const ModelConfig& cfg, size_t valid_len);
};

inline constexpr double kMaskNegInf = -1.0e4;

// Weight container: a JSON manifest (tensor names, shapes, dtype, config) next
// to a raw blob of little-endian IEEE-754 binary32 values in manifest order.
void save_model(const ModelConfig& cfg, const ModelParams& p, const std::string& path_stem);
std::pair<ModelConfig, ModelParams> load_model(const std::string& path_stem);

std::vector<uint32_t> load_tokens(const std::string& path);
void save_tokens(const std::vector<uint32_t>& toks, const std::string& path);

}  // namespace centaur
