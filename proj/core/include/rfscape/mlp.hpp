#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rfscape/tape.hpp"
#include "rfscape/vec.hpp"

namespace rfscape {

// NeRF-style frequency encoding. The raw coordinate is kept in front, so
// the output is (x, y, z, sin(2^l pi x), ..., cos(2^l pi z)) for l < L.
inline uint32_t pe_dim(uint32_t num_freqs) { return 3 + 6 * num_freqs; }

void pe_encode(const Vec3& x, uint32_t num_freqs, std::span<double> out);
std::vector<double> pe_encode(const Vec3& x, uint32_t num_freqs);
std::vector<Var> pe_encode_tape(Tape& t, const V3Var& x, uint32_t num_freqs);

// Fully connected stack: `hidden_layers` affine+ReLU layers followed by a
// linear head. At each index in `skips` the raw input is concatenated to
// that layer's input.
struct MlpSpec {
  uint32_t in_dim = 0;
  uint32_t width = 0;
  uint32_t hidden_layers = 0;
  uint32_t out_dim = 0;
  std::vector<uint32_t> skips;

  uint32_t affine_count() const { return hidden_layers + 1; }
  bool has_skip(uint32_t layer) const;
  uint32_t layer_in_dim(uint32_t layer) const;
  uint32_t layer_out_dim(uint32_t layer) const;
  std::size_t param_count() const;
  void validate() const;
};

struct Mlp {
  MlpSpec spec;
  std::shared_ptr<ParamBlock> params;
  std::vector<std::size_t> w_off;  // per affine layer, row-major [out][in]
  std::vector<std::size_t> b_off;

  static Mlp zeros(const MlpSpec& spec, std::string name = "mlp");
  static Mlp kaiming(const MlpSpec& spec, uint64_t seed, std::string name = "mlp");

  bool finite() const;
};

struct MlpScratch {
  std::vector<double> a, b;
};

void mlp_forward(const Mlp& net, std::span<const double> in,
                 std::span<double> out, MlpScratch& scratch);
std::vector<double> mlp_forward(const Mlp& net, std::span<const double> in);
std::vector<Var> mlp_forward_tape(const Mlp& net, Tape& t,
                                  std::span<const Var> in);

}  // namespace rfscape
