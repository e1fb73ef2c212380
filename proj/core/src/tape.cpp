#include "rfscape/tape.hpp"

#include <cmath>

namespace rfscape {

std::vector<double>& GradStore::slot(const ParamBlock& blk) {
  auto& v = grads_[&blk];
  if (v.size() != blk.size()) v.resize(blk.size(), 0.0);
  return v;
}

const std::vector<double>* GradStore::find(const ParamBlock& blk) const {
  auto it = grads_.find(&blk);
  return it == grads_.end() ? nullptr : &it->second;
}

double GradStore::at(const ParamBlock& blk, std::size_t off) const {
  const auto* v = find(blk);
  return v ? (*v)[off] : 0.0;
}

void GradStore::clear() { grads_.clear(); }

Var Tape::push(Node n) {
  if (nodes_.size() >= UINT32_MAX - 1) throw Error("tape overflow");
  nodes_.push_back(n);
  return Var{uint32_t(nodes_.size() - 1)};
}

uint32_t Tape::block_id(const ParamBlock& blk) {
  auto it = block_ids_.find(&blk);
  if (it != block_ids_.end()) return it->second;
  uint32_t id = uint32_t(blocks_.size());
  blocks_.push_back(&blk);
  block_ids_.emplace(&blk, id);
  return id;
}

Var Tape::constant(double v) {
  return push({Op::Const, 0, 0, 0.0, 0.0, v});
}

Var Tape::param(const ParamBlock& blk, std::size_t off) {
  if (off >= blk.size()) throw Error("param offset out of range");
  return push({Op::Param, block_id(blk), uint32_t(off), 0.0, 0.0, blk.values[off]});
}

Var Tape::copy(Var a) {
  return push({Op::Copy, a.i, 0, 1.0, 0.0, nodes_[a.i].val});
}

Var Tape::unary(Op op, Var a, double value, double pa) {
  return push({op, a.i, 0, pa, 0.0, value});
}

Var Tape::binary(Op op, Var a, Var b, double value, double pa, double pb) {
  return push({op, a.i, b.i, pa, pb, value});
}

Var Tape::add(Var a, Var b) {
  return binary(Op::Add, a, b, val(a) + val(b), 1.0, 1.0);
}

Var Tape::sub(Var a, Var b) {
  return binary(Op::Sub, a, b, val(a) - val(b), 1.0, -1.0);
}

Var Tape::mul(Var a, Var b) {
  return binary(Op::Mul, a, b, val(a) * val(b), val(b), val(a));
}

Var Tape::div(Var a, Var b) {
  double vb = val(b);
  return binary(Op::Div, a, b, val(a) / vb, 1.0 / vb, -val(a) / (vb * vb));
}

Var Tape::neg(Var a) { return unary(Op::Neg, a, -val(a), -1.0); }

Var Tape::sin(Var a) {
  return unary(Op::Sin, a, std::sin(val(a)), std::cos(val(a)));
}

Var Tape::cos(Var a) {
  return unary(Op::Cos, a, std::cos(val(a)), -std::sin(val(a)));
}

Var Tape::exp(Var a) {
  double e = std::exp(val(a));
  return unary(Op::Exp, a, e, e);
}

Var Tape::log(Var a) {
  return unary(Op::Log, a, std::log(val(a)), 1.0 / val(a));
}

Var Tape::sqrt(Var a) {
  double s = std::sqrt(val(a));
  return unary(Op::Sqrt, a, s, s > 0.0 ? 0.5 / s : 0.0);
}

Var Tape::tanh(Var a) {
  double th = std::tanh(val(a));
  return unary(Op::Tanh, a, th, 1.0 - th * th);
}

Var Tape::sigmoid(Var a) {
  double v = val(a);
  double s = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v))
                      : std::exp(v) / (1.0 + std::exp(v));
  return unary(Op::Sigmoid, a, s, s * (1.0 - s));
}

Var Tape::relu(Var a) {
  double v = val(a);
  return unary(Op::Relu, a, v > 0.0 ? v : 0.0, v > 0.0 ? 1.0 : 0.0);
}

Var Tape::abs(Var a) {
  double v = val(a);
  return unary(Op::Abs, a, std::fabs(v), v >= 0.0 ? 1.0 : -1.0);
}

Var Tape::max(Var a, Var b) {
  bool left = val(a) >= val(b);
  return binary(Op::Max, a, b, left ? val(a) : val(b), left ? 1.0 : 0.0,
                left ? 0.0 : 1.0);
}

Var Tape::min(Var a, Var b) {
  bool left = val(a) <= val(b);
  return binary(Op::Min, a, b, left ? val(a) : val(b), left ? 1.0 : 0.0,
                left ? 0.0 : 1.0);
}

Var Tape::affine(const ParamBlock& blk, std::size_t w_off,
                 std::ptrdiff_t bias_off, Var x_base, uint32_t n) {
  if (w_off + n > blk.size()) throw Error("affine weights out of range");
  if (x_base.i + n > nodes_.size()) throw Error("affine inputs out of range");
  double acc = bias_off >= 0 ? blk.values[std::size_t(bias_off)] : 0.0;
  const double* w = blk.values.data() + w_off;
  for (uint32_t k = 0; k < n; ++k) acc += w[k] * nodes_[x_base.i + k].val;

  AffineRec rec{block_id(blk), uint32_t(w_off), int64_t(bias_off), x_base.i, n};
  affines_.push_back(rec);
  return push({Op::Affine, uint32_t(affines_.size() - 1), 0, 0.0, 0.0, acc});
}

void Tape::backward(Var seed, GradStore& out) const {
  if (!seed.valid() || seed.i >= nodes_.size())
    throw Error("backward: seed is not a scalar recorded on this tape");

  std::vector<double> adj(seed.i + 1, 0.0);
  adj[seed.i] = 1.0;

  for (uint32_t i = seed.i + 1; i-- > 0;) {
    double a = adj[i];
    if (a == 0.0) continue;
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Const:
        break;
      case Op::Param: {
        out.slot(*blocks_[n.a])[n.b] += a;
        break;
      }
      case Op::Affine: {
        const AffineRec& r = affines_[n.a];
        const ParamBlock& blk = *blocks_[r.blk];
        auto& g = out.slot(blk);
        const double* w = blk.values.data() + r.w_off;
        for (uint32_t k = 0; k < r.n; ++k) {
          g[r.w_off + k] += a * nodes_[r.x_base + k].val;
          adj[r.x_base + k] += a * w[k];
        }
        if (r.bias_off >= 0) g[std::size_t(r.bias_off)] += a;
        break;
      }
      default: {
        adj[n.a] += a * n.pa;
        if (n.op == Op::Add || n.op == Op::Sub || n.op == Op::Mul ||
            n.op == Op::Div || n.op == Op::Max || n.op == Op::Min) {
          adj[n.b] += a * n.pb;
        }
        break;
      }
    }
  }
}

double Tape::replay(Var out) const {
  if (!out.valid() || out.i >= nodes_.size()) throw Error("replay: bad var");
  std::vector<double> v(out.i + 1, 0.0);
  for (uint32_t i = 0; i <= out.i; ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Const: v[i] = n.val; break;
      case Op::Param: v[i] = blocks_[n.a]->values[n.b]; break;
      case Op::Copy: v[i] = v[n.a]; break;
      case Op::Add: v[i] = v[n.a] + v[n.b]; break;
      case Op::Sub: v[i] = v[n.a] - v[n.b]; break;
      case Op::Mul: v[i] = v[n.a] * v[n.b]; break;
      case Op::Div: v[i] = v[n.a] / v[n.b]; break;
      case Op::Neg: v[i] = -v[n.a]; break;
      case Op::Sin: v[i] = std::sin(v[n.a]); break;
      case Op::Cos: v[i] = std::cos(v[n.a]); break;
      case Op::Exp: v[i] = std::exp(v[n.a]); break;
      case Op::Log: v[i] = std::log(v[n.a]); break;
      case Op::Sqrt: v[i] = std::sqrt(v[n.a]); break;
      case Op::Tanh: v[i] = std::tanh(v[n.a]); break;
      case Op::Sigmoid: {
        double x = v[n.a];
        v[i] = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                        : std::exp(x) / (1.0 + std::exp(x));
        break;
      }
      case Op::Relu: v[i] = v[n.a] > 0.0 ? v[n.a] : 0.0; break;
      case Op::Abs: v[i] = std::fabs(v[n.a]); break;
      case Op::Max: v[i] = v[n.a] >= v[n.b] ? v[n.a] : v[n.b]; break;
      case Op::Min: v[i] = v[n.a] <= v[n.b] ? v[n.a] : v[n.b]; break;
      case Op::Affine: {
        const AffineRec& r = affines_[n.a];
        const ParamBlock& blk = *blocks_[r.blk];
        double acc = r.bias_off >= 0 ? blk.values[std::size_t(r.bias_off)] : 0.0;
        const double* w = blk.values.data() + r.w_off;
        for (uint32_t k = 0; k < r.n; ++k) acc += w[k] * v[r.x_base + k];
        v[i] = acc;
        break;
      }
    }
  }
  return v[out.i];
}

void Tape::clear() {
  nodes_.clear();
  affines_.clear();
  blocks_.clear();
  block_ids_.clear();
}

// --- aggregates ---

V3Var v3_const(Tape& t, double x, double y, double z) {
  return {t.constant(x), t.constant(y), t.constant(z)};
}

V3Var v3_add(Tape& t, const V3Var& a, const V3Var& b) {
  return {t.add(a.x, b.x), t.add(a.y, b.y), t.add(a.z, b.z)};
}

V3Var v3_sub(Tape& t, const V3Var& a, const V3Var& b) {
  return {t.sub(a.x, b.x), t.sub(a.y, b.y), t.sub(a.z, b.z)};
}

V3Var v3_scale(Tape& t, const V3Var& a, Var s) {
  return {t.mul(a.x, s), t.mul(a.y, s), t.mul(a.z, s)};
}

V3Var v3_scale(Tape& t, const V3Var& a, double s) {
  Var sv = t.constant(s);
  return v3_scale(t, a, sv);
}

Var v3_dot(Tape& t, const V3Var& a, const V3Var& b) {
  return t.add(t.add(t.mul(a.x, b.x), t.mul(a.y, b.y)), t.mul(a.z, b.z));
}

Var v3_norm(Tape& t, const V3Var& a) { return t.sqrt(v3_dot(t, a, a)); }

V3Var v3_normalized(Tape& t, const V3Var& a) {
  Var inv = t.div(1.0, v3_norm(t, a));
  return v3_scale(t, a, inv);
}

V3Var v3_cross(Tape& t, const V3Var& a, const V3Var& b) {
  return {t.sub(t.mul(a.y, b.z), t.mul(a.z, b.y)),
          t.sub(t.mul(a.z, b.x), t.mul(a.x, b.z)),
          t.sub(t.mul(a.x, b.y), t.mul(a.y, b.x))};
}

CVar c_const(Tape& t, const Complex& c) {
  return {t.constant(c.real()), t.constant(c.imag())};
}

CVar c_add(Tape& t, const CVar& a, const CVar& b) {
  return {t.add(a.re, b.re), t.add(a.im, b.im)};
}

CVar c_mul(Tape& t, const CVar& a, const CVar& b) {
  return {t.sub(t.mul(a.re, b.re), t.mul(a.im, b.im)),
          t.add(t.mul(a.re, b.im), t.mul(a.im, b.re))};
}

CVar c_scale(Tape& t, const CVar& a, Var s) {
  return {t.mul(a.re, s), t.mul(a.im, s)};
}

CVar c_scale(Tape& t, const CVar& a, const Complex& c) {
  return c_mul(t, a, c_const(t, c));
}

Var c_abs2(Tape& t, const CVar& a) {
  return t.add(t.mul(a.re, a.re), t.mul(a.im, a.im));
}

CVar c_phasor(Tape& t, Var phase) {
  return {t.cos(phase), t.sin(phase)};
}

}  // namespace rfscape
