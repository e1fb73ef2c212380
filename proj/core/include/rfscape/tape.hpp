#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "rfscape/common.hpp"

namespace rfscape {

// A named, flat block of optimizable values. Blocks are identified by
// address, so they must outlive any tape or gradient store that refers
// to them. Parameters are immutable during a forward/backward pass.
struct ParamBlock {
  std::vector<double> values;
  std::string name;

  ParamBlock() = default;
  explicit ParamBlock(std::vector<double> v, std::string n = "")
      : values(std::move(v)), name(std::move(n)) {}
  std::size_t size() const { return values.size(); }
};

// Handle to a scalar recorded on a tape.
struct Var {
  uint32_t i = UINT32_MAX;
  bool valid() const { return i != UINT32_MAX; }
};

// Dense per-block gradients produced by Tape::backward.
class GradStore {
 public:
  std::vector<double>& slot(const ParamBlock& blk);
  const std::vector<double>* find(const ParamBlock& blk) const;
  double at(const ParamBlock& blk, std::size_t off) const;
  void clear();
  bool empty() const { return grads_.empty(); }

  auto begin() const { return grads_.begin(); }
  auto end() const { return grads_.end(); }

 private:
  std::unordered_map<const ParamBlock*, std::vector<double>> grads_;
};

// Append-only record of primitive operations. Reverse traversal yields
// gradients of one scalar output with respect to every parameter leaf and
// every weight referenced by affine nodes. Replaying the tape forward
// recomputes the recorded output bit-identically for identical inputs.
class Tape {
 public:
  enum class Op : uint8_t {
    Const, Param, Copy,
    Add, Sub, Mul, Div,
    Neg, Sin, Cos, Exp, Log, Sqrt, Tanh, Sigmoid, Relu, Abs,
    Max, Min,
    Affine,
  };

  Var constant(double v);
  Var param(const ParamBlock& blk, std::size_t off);
  Var copy(Var a);

  Var add(Var a, Var b);
  Var add(Var a, double b) { return add(a, constant(b)); }
  Var sub(Var a, Var b);
  Var sub(Var a, double b) { return sub(a, constant(b)); }
  Var sub(double a, Var b) { return sub(constant(a), b); }
  Var mul(Var a, Var b);
  Var mul(Var a, double b) { return mul(a, constant(b)); }
  Var div(Var a, Var b);
  Var div(double a, Var b) { return div(constant(a), b); }
  Var div(Var a, double b) { return mul(a, 1.0 / b); }
  Var neg(Var a);
  Var sin(Var a);
  Var cos(Var a);
  Var exp(Var a);
  Var log(Var a);
  Var sqrt(Var a);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var relu(Var a);
  Var abs(Var a);
  Var max(Var a, Var b);
  Var min(Var a, Var b);

  // value = bias + sum_{k<n} blk[w_off+k] * value(x_base.i + k).
  // Inputs must be contiguous on the tape; bias_off < 0 means no bias.
  Var affine(const ParamBlock& blk, std::size_t w_off, std::ptrdiff_t bias_off,
             Var x_base, uint32_t n);

  double val(Var v) const { return nodes_[v.i].val; }
  std::size_t size() const { return nodes_.size(); }

  // Gradients of the scalar at `seed` w.r.t. all parameter leaves,
  // accumulated into `out` (existing entries are added to).
  void backward(Var seed, GradStore& out) const;

  // Recomputes `out` from the leaves; Param/Affine nodes reread their blocks.
  double replay(Var out) const;

  void clear();

 private:
  struct Node {
    Op op;
    uint32_t a = 0, b = 0;
    double pa = 0.0, pb = 0.0;
    double val = 0.0;
  };
  struct AffineRec {
    uint32_t blk;
    uint32_t w_off;
    int64_t bias_off;  // -1 when absent
    uint32_t x_base;
    uint32_t n;
  };

  Var push(Node n);
  Var unary(Op op, Var a, double value, double pa);
  Var binary(Op op, Var a, Var b, double value, double pa, double pb);
  uint32_t block_id(const ParamBlock& blk);

  std::vector<Node> nodes_;
  std::vector<AffineRec> affines_;
  std::vector<const ParamBlock*> blocks_;
  std::unordered_map<const ParamBlock*, uint32_t> block_ids_;
};

// --- small aggregates used where geometry or phasors go on tape ---

struct V3Var {
  Var x, y, z;
};

struct CVar {
  Var re, im;
};

V3Var v3_const(Tape& t, double x, double y, double z);
V3Var v3_add(Tape& t, const V3Var& a, const V3Var& b);
V3Var v3_sub(Tape& t, const V3Var& a, const V3Var& b);
V3Var v3_scale(Tape& t, const V3Var& a, Var s);
V3Var v3_scale(Tape& t, const V3Var& a, double s);
Var v3_dot(Tape& t, const V3Var& a, const V3Var& b);
Var v3_norm(Tape& t, const V3Var& a);
V3Var v3_normalized(Tape& t, const V3Var& a);
V3Var v3_cross(Tape& t, const V3Var& a, const V3Var& b);

CVar c_const(Tape& t, const Complex& c);
CVar c_add(Tape& t, const CVar& a, const CVar& b);
CVar c_mul(Tape& t, const CVar& a, const CVar& b);
CVar c_scale(Tape& t, const CVar& a, Var s);
CVar c_scale(Tape& t, const CVar& a, const Complex& c);
Var c_abs2(Tape& t, const CVar& a);
// unit phasor e^{j phase}
CVar c_phasor(Tape& t, Var phase);

}  // namespace rfscape
