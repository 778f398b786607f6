#include "centaur/model.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "centaur/errors.hpp"

namespace centaur {

std::string to_string(Arch a) { return a == Arch::Encoder ? "encoder" : "decoder"; }
std::string to_string(Norm n) { return n == Norm::LayerNorm ? "layernorm" : "rmsnorm"; }
std::string to_string(Act a) { return a == Act::Gelu ? "gelu" : "silu-gate"; }

Arch arch_from_string(const std::string& s) {
  if (s == "encoder") return Arch::Encoder;
  if (s == "decoder") return Arch::Decoder;
  throw ConfigMismatch("unknown arch: " + s);
}
Norm norm_from_string(const std::string& s) {
  if (s == "layernorm") return Norm::LayerNorm;
  if (s == "rmsnorm") return Norm::RmsNorm;
  throw ConfigMismatch("unknown norm: " + s);
}
Act act_from_string(const std::string& s) {
  if (s == "gelu") return Act::Gelu;
  if (s == "silu-gate") return Act::SiluGate;
  throw ConfigMismatch("unknown act: " + s);
}

void ModelConfig::validate() const {
  if (n < 1 || d < 1 || h < 1 || k < 1 || vocab < 1 || blocks < 1)
    throw ConfigMismatch("ModelConfig: all dims must be >= 1");
  if (d % h != 0) throw ConfigMismatch("ModelConfig: d must be divisible by h");
  if (arch == Arch::Encoder && classes < 1)
    throw ConfigMismatch("ModelConfig: encoder needs classes >= 1");
}

namespace {

void check_shape(const RealTensor& t, Shape want, const char* name) {
  if (!shape_eq(t.shape(), want))
    throw ConfigMismatch(std::string("params: ") + name + " has shape " + shape_str(t.shape()) +
                         ", want " + shape_str(want));
}

template <typename Fn>
void for_each_tensor(const ModelConfig& cfg, Fn&& fn) {
  fn("embed.token", Shape{cfg.vocab, cfg.d});
  fn("embed.pos", Shape{cfg.n, cfg.d});
  fn("embed.ln.gamma", Shape{1, cfg.d});
  fn("embed.ln.beta", Shape{1, cfg.d});
  for (size_t b = 0; b < cfg.blocks; ++b) {
    std::string p = "block" + std::to_string(b) + ".";
    fn(p + "attn.wq", Shape{cfg.d, cfg.d});
    fn(p + "attn.wk", Shape{cfg.d, cfg.d});
    fn(p + "attn.wv", Shape{cfg.d, cfg.d});
    fn(p + "attn.wo", Shape{cfg.d, cfg.d});
    fn(p + "attn.bo", Shape{1, cfg.d});
    fn(p + "ffn.w1", Shape{cfg.k, cfg.d});
    fn(p + "ffn.b1", Shape{1, cfg.k});
    fn(p + "ffn.w2", Shape{cfg.d, cfg.k});
    fn(p + "ffn.b2", Shape{1, cfg.d});
    fn(p + "ln1.gamma", Shape{1, cfg.d});
    fn(p + "ln1.beta", Shape{1, cfg.d});
    fn(p + "ln2.gamma", Shape{1, cfg.d});
    fn(p + "ln2.beta", Shape{1, cfg.d});
  }
  if (cfg.arch == Arch::Encoder) {
    fn("pooler.w", Shape{cfg.d, cfg.d});
    fn("pooler.b", Shape{1, cfg.d});
  }
  fn("head.w", Shape{cfg.head_dim_out(), cfg.d});
  fn("head.b", Shape{1, cfg.head_dim_out()});
}

RealTensor* tensor_slot(ModelParams& p, const ModelConfig& cfg, const std::string& name) {
  if (name == "embed.token") return &p.tok_embed;
  if (name == "embed.pos") return &p.pos_embed;
  if (name == "embed.ln.gamma") return &p.embed_ln_g;
  if (name == "embed.ln.beta") return &p.embed_ln_b;
  if (name == "pooler.w") return &p.pooler_w;
  if (name == "pooler.b") return &p.pooler_b;
  if (name == "head.w") return &p.head_w;
  if (name == "head.b") return &p.head_b;
  if (name.rfind("block", 0) == 0) {
    size_t dot = name.find('.');
    size_t b = std::stoul(name.substr(5, dot - 5));
    if (b >= cfg.blocks) return nullptr;
    std::string rest = name.substr(dot + 1);
    BlockParams& bp = p.blocks[b];
    if (rest == "attn.wq") return &bp.wq;
    if (rest == "attn.wk") return &bp.wk;
    if (rest == "attn.wv") return &bp.wv;
    if (rest == "attn.wo") return &bp.wo;
    if (rest == "attn.bo") return &bp.bo;
    if (rest == "ffn.w1") return &bp.w1;
    if (rest == "ffn.b1") return &bp.b1;
    if (rest == "ffn.w2") return &bp.w2;
    if (rest == "ffn.b2") return &bp.b2;
    if (rest == "ln1.gamma") return &bp.ln1_g;
    if (rest == "ln1.beta") return &bp.ln1_b;
    if (rest == "ln2.gamma") return &bp.ln2_g;
    if (rest == "ln2.beta") return &bp.ln2_b;
  }
  return nullptr;
}

const RealTensor* tensor_slot(const ModelParams& p, const ModelConfig& cfg,
                              const std::string& name) {
  return tensor_slot(const_cast<ModelParams&>(p), cfg, name);
}

}  // namespace

void ModelParams::validate(const ModelConfig& cfg) const {
  cfg.validate();
  if (blocks.size() != cfg.blocks) throw ConfigMismatch("params: block count mismatch");
  for_each_tensor(cfg, [&](const std::string& name, const Shape& want) {
    const RealTensor* t = tensor_slot(*this, cfg, name);
    if (!t) throw ConfigMismatch("params: missing tensor " + name);
    check_shape(*t, want, name.c_str());
  });
}

namespace {
std::vector<const RealTensor*> all_tensors(const ModelParams& p) {
  std::vector<const RealTensor*> v{&p.tok_embed, &p.pos_embed, &p.embed_ln_g, &p.embed_ln_b};
  for (const BlockParams& b : p.blocks)
    for (const RealTensor* t : {&b.wq, &b.wk, &b.wv, &b.wo, &b.bo, &b.w1, &b.b1, &b.w2, &b.b2,
                                &b.ln1_g, &b.ln1_b, &b.ln2_g, &b.ln2_b})
      v.push_back(t);
  for (const RealTensor* t : {&p.pooler_w, &p.pooler_b, &p.head_w, &p.head_b}) v.push_back(t);
  return v;
}

bool tensor_eq(const RealTensor& a, const RealTensor& b) {
  if (!shape_eq(a.shape(), b.shape())) return false;
  return std::memcmp(a.data(), b.data(), a.numel() * sizeof(double)) == 0;
}
}  // namespace

bool ModelParams::equals(const ModelParams& o) const {
  auto mine = all_tensors(*this), theirs = all_tensors(o);
  if (mine.size() != theirs.size()) return false;
  for (size_t i = 0; i < mine.size(); ++i)
    if (!tensor_eq(*mine[i], *theirs[i])) return false;
  return true;
}

bool ModelParams::shares_tensor_with(const ModelParams& o) const {
  for (const RealTensor* a : all_tensors(*this))
    for (const RealTensor* b : all_tensors(o))
      if (a->numel() > 1 && tensor_eq(*a, *b)) return true;
  return false;
}

size_t ModelParams::total_elems() const {
  size_t n = 0;
  for (const RealTensor* t : all_tensors(*this)) n += t->numel();
  return n;
}

PermutedParams permute_params(const ModelParams& theta, const PermSet& perms) {
  const PermSpec& pi = perms.pi;
  const PermSpec& pi2 = perms.pi2;
  ModelParams out = theta;
  out.tok_embed = apply_cols(theta.tok_embed, pi);
  out.pos_embed = apply_cols(theta.pos_embed, pi);
  out.embed_ln_g = apply_cols(theta.embed_ln_g, pi);
  out.embed_ln_b = apply_cols(theta.embed_ln_b, pi);
  for (size_t b = 0; b < theta.blocks.size(); ++b) {
    const BlockParams& in = theta.blocks[b];
    BlockParams& o = out.blocks[b];
    o.wq = apply_cols(in.wq, pi);
    o.wk = apply_cols(in.wk, pi);
    o.wv = apply_cols(in.wv, pi);
    o.wo = apply_rows(in.wo, pi);  // pi^T W_O: output side carries pi
    o.bo = apply_cols(in.bo, pi);
    o.w1 = apply_rows(apply_cols(in.w1, pi), pi2);  // pi2^T W_1 pi
    o.b1 = apply_cols(in.b1, pi2);
    o.w2 = apply_rows(apply_cols(in.w2, pi2), pi);  // pi^T W_2 pi2
    o.b2 = apply_cols(in.b2, pi);
    o.ln1_g = apply_cols(in.ln1_g, pi);
    o.ln1_b = apply_cols(in.ln1_b, pi);
    o.ln2_g = apply_cols(in.ln2_g, pi);
    o.ln2_b = apply_cols(in.ln2_b, pi);
  }
  if (theta.pooler_w.numel() > 0) {
    out.pooler_w = apply_rows(apply_cols(theta.pooler_w, pi), pi);  // pi^T W_P pi
    out.pooler_b = apply_cols(theta.pooler_b, pi);
  }
  out.head_w = apply_cols(theta.head_w, pi);  // input side only: logits leave un-permuted
  // head_b stays as-is.
  return PermutedParams{std::move(out)};
}

ModelParams random_params(const ModelConfig& cfg, uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  auto gauss = [&](Shape s, double std_dev) {
    std::vector<double> v(shape_numel(s));
    for (double& x : v) x = rng.gaussian() * std_dev;
    return RealTensor(std::move(s), std::move(v));
  };
  auto gamma_init = [&](Shape s) {
    std::vector<double> v(shape_numel(s));
    for (double& x : v) x = 0.8 + 0.4 * rng.unit();
    return RealTensor(std::move(s), std::move(v));
  };
  double wstd = 1.0 / std::sqrt(static_cast<double>(cfg.d));
  ModelParams p;
  p.tok_embed = gauss({cfg.vocab, cfg.d}, 1.0);
  p.pos_embed = gauss({cfg.n, cfg.d}, 1.0);
  p.embed_ln_g = gamma_init({1, cfg.d});
  p.embed_ln_b = gauss({1, cfg.d}, 0.05);
  p.blocks.resize(cfg.blocks);
  for (BlockParams& b : p.blocks) {
    b.wq = gauss({cfg.d, cfg.d}, wstd);
    b.wk = gauss({cfg.d, cfg.d}, wstd);
    b.wv = gauss({cfg.d, cfg.d}, wstd);
    b.wo = gauss({cfg.d, cfg.d}, wstd);
    b.bo = gauss({1, cfg.d}, 0.05);
    b.w1 = gauss({cfg.k, cfg.d}, wstd);
    b.b1 = gauss({1, cfg.k}, 0.05);
    b.w2 = gauss({cfg.d, cfg.k}, 1.0 / std::sqrt(static_cast<double>(cfg.k)));
    b.b2 = gauss({1, cfg.d}, 0.05);
    b.ln1_g = gamma_init({1, cfg.d});
    b.ln1_b = gauss({1, cfg.d}, 0.05);
    b.ln2_g = gamma_init({1, cfg.d});
    b.ln2_b = gauss({1, cfg.d}, 0.05);
  }
  if (cfg.arch == Arch::Encoder) {
    p.pooler_w = gauss({cfg.d, cfg.d}, wstd);
    p.pooler_b = gauss({1, cfg.d}, 0.05);
  }
  p.head_w = gauss({cfg.head_dim_out(), cfg.d}, wstd);
  p.head_b = gauss({1, cfg.head_dim_out()}, 0.05);
  return p;
}

AttentionMask AttentionMask::none(size_t n) { return {RealTensor::zeros({n, n})}; }

AttentionMask AttentionMask::causal(size_t n) {
  RealTensor m = RealTensor::zeros({n, n});
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) m.at2(i, j) = kMaskNegInf;
  return {std::move(m)};
}

AttentionMask AttentionMask::padding(size_t n, size_t valid_len) {
  RealTensor m = RealTensor::zeros({n, n});
  for (size_t i = 0; i < n; ++i)
    for (size_t j = valid_len; j < n; ++j) m.at2(i, j) = kMaskNegInf;
  return {std::move(m)};
}

AttentionMask AttentionMask::for_run(const ModelConfig& cfg, size_t valid_len) {
  if (cfg.arch == Arch::Decoder) {
    AttentionMask m = causal(cfg.n);
    for (size_t i = 0; i < cfg.n; ++i)
      for (size_t j = valid_len; j < cfg.n; ++j) m.m.at2(i, j) = kMaskNegInf;
    return m;
  }
  return padding(cfg.n, valid_len);
}

namespace {
nlohmann::json config_to_json(const ModelConfig& c) {
  return {{"n", c.n},         {"d", c.d},           {"h", c.h},
          {"k", c.k},         {"vocab", c.vocab},   {"blocks", c.blocks},
          {"classes", c.classes}, {"arch", to_string(c.arch)}, {"norm", to_string(c.norm)},
          {"act", to_string(c.act)}};
}
}  // namespace

ModelConfig config_from_json(const nlohmann::json& j);
ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.n = j.at("n");
  c.d = j.at("d");
  c.h = j.at("h");
  c.k = j.at("k");
  c.vocab = j.at("vocab");
  c.blocks = j.at("blocks");
  c.classes = j.value("classes", size_t{2});
  c.arch = arch_from_string(j.at("arch"));
  c.norm = norm_from_string(j.value("norm", "layernorm"));
  c.act = act_from_string(j.value("act", "gelu"));
  return c;
}

void save_model(const ModelConfig& cfg, const ModelParams& p, const std::string& path_stem) {
  p.validate(cfg);
  nlohmann::json manifest;
  manifest["format"] = "centaur-weights-v1";
  manifest["config"] = config_to_json(cfg);
  manifest["blob"] = path_stem.substr(path_stem.find_last_of('/') + 1) + ".bin";
  nlohmann::json tensors = nlohmann::json::array();
  std::ofstream blob(path_stem + ".bin", std::ios::binary);
  if (!blob) throw IoError("cannot write " + path_stem + ".bin");
  for_each_tensor(cfg, [&](const std::string& name, const Shape& want) {
    const RealTensor* t = tensor_slot(p, cfg, name);
    tensors.push_back({{"name", name}, {"shape", want}, {"dtype", "f32"}});
    for (size_t i = 0; i < t->numel(); ++i) {
      float f = static_cast<float>(t->at(i));
      uint32_t bits;
      std::memcpy(&bits, &f, 4);
      char le[4] = {static_cast<char>(bits), static_cast<char>(bits >> 8),
                    static_cast<char>(bits >> 16), static_cast<char>(bits >> 24)};
      blob.write(le, 4);
    }
  });
  manifest["tensors"] = std::move(tensors);
  std::ofstream mf(path_stem + ".json");
  if (!mf) throw IoError("cannot write " + path_stem + ".json");
  mf << manifest.dump(2) << "\n";
}

std::pair<ModelConfig, ModelParams> load_model(const std::string& path_stem) {
  std::ifstream mf(path_stem + ".json");
  if (!mf) throw IoError("cannot read " + path_stem + ".json");
  nlohmann::json manifest;
  try {
    mf >> manifest;
  } catch (const std::exception& e) {
    throw IoError(std::string("bad weight manifest: ") + e.what());
  }
  if (manifest.value("format", "") != "centaur-weights-v1")
    throw IoError("unknown weight container format");
  ModelConfig cfg = config_from_json(manifest.at("config"));
  cfg.validate();

  std::ifstream blob(path_stem + ".bin", std::ios::binary);
  if (!blob) throw IoError("cannot read " + path_stem + ".bin");
  ModelParams p;
  p.blocks.resize(cfg.blocks);
  size_t cursor = 0;
  const auto& tensors = manifest.at("tensors");
  for_each_tensor(cfg, [&](const std::string& name, const Shape& want) {
    if (cursor >= tensors.size()) throw IoError("weight manifest: missing tensor " + name);
    const auto& entry = tensors[cursor++];
    if (entry.at("name") != name) throw IoError("weight manifest: tensor order mismatch at " + name);
    if (entry.at("dtype") != "f32") throw IoError("weight manifest: unsupported dtype");
    Shape got = entry.at("shape").get<Shape>();
    if (!shape_eq(got, want))
      throw IoError("weight manifest: " + name + " has shape " + shape_str(got) + ", want " +
                    shape_str(want));
    std::vector<double> vals(shape_numel(want));
    for (double& v : vals) {
      unsigned char le[4];
      if (!blob.read(reinterpret_cast<char*>(le), 4)) throw IoError("weight blob truncated");
      uint32_t bits = static_cast<uint32_t>(le[0]) | (static_cast<uint32_t>(le[1]) << 8) |
                      (static_cast<uint32_t>(le[2]) << 16) | (static_cast<uint32_t>(le[3]) << 24);
      float f;
      std::memcpy(&f, &bits, 4);
      v = static_cast<double>(f);
    }
    *tensor_slot(p, cfg, name) = RealTensor(want, std::move(vals));
  });
  p.validate(cfg);
  return {cfg, std::move(p)};
}

std::vector<uint32_t> load_tokens(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read tokens from " + path);
  std::vector<uint32_t> toks;
  long long v;
  while (f >> v) {
    if (v < 0) throw TokenOutOfRange("negative token id in " + path);
    toks.push_back(static_cast<uint32_t>(v));
  }
  if (toks.empty()) throw IoError("no tokens in " + path);
  return toks;
}

void save_tokens(const std::vector<uint32_t>& toks, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write tokens to " + path);
  for (size_t i = 0; i < toks.size(); ++i) f << (i ? " " : "") << toks[i];
  f << "\n";
}

}  // namespace centaur
