#include "rfscape/mlp.hpp"

#include <cmath>

#include "rfscape/rng.hpp"

namespace rfscape {

void pe_encode(const Vec3& x, uint32_t num_freqs, std::span<double> out) {
  if (out.size() != pe_dim(num_freqs)) throw Error("pe_encode: bad output size");
  out[0] = x.x;
  out[1] = x.y;
  out[2] = x.z;
  std::size_t k = 3;
  double scale = kPi;  // 2^0 * pi
  for (uint32_t l = 0; l < num_freqs; ++l) {
    out[k++] = std::sin(scale * x.x);
    out[k++] = std::sin(scale * x.y);
    out[k++] = std::sin(scale * x.z);
    out[k++] = std::cos(scale * x.x);
    out[k++] = std::cos(scale * x.y);
    out[k++] = std::cos(scale * x.z);
    scale *= 2.0;
  }
}

std::vector<double> pe_encode(const Vec3& x, uint32_t num_freqs) {
  std::vector<double> out(pe_dim(num_freqs));
  pe_encode(x, num_freqs, out);
  return out;
}

std::vector<Var> pe_encode_tape(Tape& t, const V3Var& x, uint32_t num_freqs) {
  std::vector<Var> out;
  out.reserve(pe_dim(num_freqs));
  out.push_back(x.x);
  out.push_back(x.y);
  out.push_back(x.z);
  double scale = kPi;
  for (uint32_t l = 0; l < num_freqs; ++l) {
    Var sx = t.mul(x.x, scale), sy = t.mul(x.y, scale), sz = t.mul(x.z, scale);
    out.push_back(t.sin(sx));
    out.push_back(t.sin(sy));
    out.push_back(t.sin(sz));
    out.push_back(t.cos(sx));
    out.push_back(t.cos(sy));
    out.push_back(t.cos(sz));
    scale *= 2.0;
  }
  return out;
}

bool MlpSpec::has_skip(uint32_t layer) const {
  for (uint32_t s : skips)
    if (s == layer) return true;
  return false;
}

uint32_t MlpSpec::layer_in_dim(uint32_t layer) const {
  if (layer == 0) return in_dim;
  return has_skip(layer) ? width + in_dim : width;
}

uint32_t MlpSpec::layer_out_dim(uint32_t layer) const {
  return layer == hidden_layers ? out_dim : width;
}

std::size_t MlpSpec::param_count() const {
  std::size_t n = 0;
  for (uint32_t l = 0; l < affine_count(); ++l)
    n += std::size_t(layer_in_dim(l)) * layer_out_dim(l) + layer_out_dim(l);
  return n;
}

void MlpSpec::validate() const {
  if (in_dim == 0 || out_dim == 0) throw Error("mlp spec: zero dimension");
  if (hidden_layers > 0 && width == 0) throw Error("mlp spec: zero width");
  for (uint32_t s : skips) {
    if (s == 0 || s > hidden_layers)
      throw Error("mlp spec: skip index must name an interior layer");
  }
}

static Mlp layout(const MlpSpec& spec, std::string name) {
  spec.validate();
  Mlp net;
  net.spec = spec;
  net.params = std::make_shared<ParamBlock>(
      std::vector<double>(spec.param_count(), 0.0), std::move(name));
  std::size_t off = 0;
  for (uint32_t l = 0; l < spec.affine_count(); ++l) {
    net.w_off.push_back(off);
    off += std::size_t(spec.layer_in_dim(l)) * spec.layer_out_dim(l);
    net.b_off.push_back(off);
    off += spec.layer_out_dim(l);
  }
  return net;
}

Mlp Mlp::zeros(const MlpSpec& spec, std::string name) {
  return layout(spec, std::move(name));
}

Mlp Mlp::kaiming(const MlpSpec& spec, uint64_t seed, std::string name) {
  Mlp net = layout(spec, std::move(name));
  Rng rng(seed);
  auto& v = net.params->values;
  for (uint32_t l = 0; l < spec.affine_count(); ++l) {
    double bound = std::sqrt(6.0 / spec.layer_in_dim(l));
    std::size_t n = std::size_t(spec.layer_in_dim(l)) * spec.layer_out_dim(l);
    for (std::size_t k = 0; k < n; ++k)
      v[net.w_off[l] + k] = rng.uniform(-bound, bound);
    // biases stay zero
  }
  return net;
}

bool Mlp::finite() const {
  for (double v : params->values)
    if (!std::isfinite(v)) return false;
  return true;
}

void mlp_forward(const Mlp& net, std::span<const double> in,
                 std::span<double> out, MlpScratch& scratch) {
  const MlpSpec& s = net.spec;
  if (in.size() != s.in_dim)
    throw Error("mlp_forward: input dim " + std::to_string(in.size()) +
                " != expected " + std::to_string(s.in_dim));
  if (out.size() != s.out_dim) throw Error("mlp_forward: bad output size");

  const auto& p = net.params->values;
  auto& cur = scratch.a;
  auto& nxt = scratch.b;
  cur.assign(in.begin(), in.end());

  for (uint32_t l = 0; l < s.affine_count(); ++l) {
    if (l > 0 && s.has_skip(l)) cur.insert(cur.end(), in.begin(), in.end());
    uint32_t in_dim = s.layer_in_dim(l);
    uint32_t out_dim = s.layer_out_dim(l);
    nxt.resize(out_dim);
    const double* w = p.data() + net.w_off[l];
    const double* b = p.data() + net.b_off[l];
    for (uint32_t j = 0; j < out_dim; ++j) {
      double acc = b[j];
      const double* wj = w + std::size_t(j) * in_dim;
      for (uint32_t i = 0; i < in_dim; ++i) acc += wj[i] * cur[i];
      nxt[j] = (l == s.hidden_layers) ? acc : (acc > 0.0 ? acc : 0.0);
    }
    std::swap(cur, nxt);
  }
  for (uint32_t j = 0; j < s.out_dim; ++j) out[j] = cur[j];
}

std::vector<double> mlp_forward(const Mlp& net, std::span<const double> in) {
  std::vector<double> out(net.spec.out_dim);
  MlpScratch scratch;
  mlp_forward(net, in, out, scratch);
  return out;
}

std::vector<Var> mlp_forward_tape(const Mlp& net, Tape& t,
                                  std::span<const Var> in) {
  const MlpSpec& s = net.spec;
  if (in.size() != s.in_dim)
    throw Error("mlp_forward_tape: input dim " + std::to_string(in.size()) +
                " != expected " + std::to_string(s.in_dim));

  // Contiguous copy of the inputs so affine nodes can reference a range.
  std::vector<Var> cur;
  cur.reserve(s.in_dim + s.width);
  std::vector<Var> raw;
  raw.reserve(s.in_dim);
  for (Var v : in) raw.push_back(t.copy(v));
  cur = raw;

  for (uint32_t l = 0; l < s.affine_count(); ++l) {
    bool skip = l > 0 && s.has_skip(l);
    uint32_t in_dim = s.layer_in_dim(l);
    uint32_t out_dim = s.layer_out_dim(l);

    Var base;
    if (l == 0) {
      base = cur[0];
    } else if (skip) {
      // re-copy hidden + raw into one contiguous run
      std::vector<Var> cat;
      cat.reserve(in_dim);
      for (Var v : cur) cat.push_back(t.copy(v));
      for (Var v : raw) cat.push_back(t.copy(v));
      base = cat[0];
      cur = std::move(cat);
    } else {
      base = cur[0];
    }

    std::vector<Var> z(out_dim);
    for (uint32_t j = 0; j < out_dim; ++j) {
      z[j] = t.affine(*net.params, net.w_off[l] + std::size_t(j) * in_dim,
                      std::ptrdiff_t(net.b_off[l] + j), base, in_dim);
    }
    if (l == s.hidden_layers) {
      cur = std::move(z);
    } else {
      std::vector<Var> h(out_dim);
      for (uint32_t j = 0; j < out_dim; ++j) h[j] = t.relu(z[j]);
      cur = std::move(h);
    }
  }
  return cur;
}

}  // namespace rfscape
