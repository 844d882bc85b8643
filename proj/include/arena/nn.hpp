#ifndef ARENA_NN_HPP
#define ARENA_NN_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "arena/rng.hpp"
#include "arena/tensor.hpp"

namespace arena::nn {

enum class Act { Linear, Relu, Sigmoid, Tanh };
enum class Padding { Valid, Same };
enum class LayerKind { Dense, Conv2D, Lstm, ConvLstm, Dropout, Flatten, Activation, ConcatAux };

std::string to_string(Act a);
std::string to_string(LayerKind k);

/// Declarative layer description. Sequence layers treat the LAST axis of
/// their input as time; Conv2D treats input as (C,H,W) with a leading
/// 1-channel added for rank-2 inputs.
struct LayerSpec {
    LayerKind kind = LayerKind::Dense;
    int units = 0;       // Dense width / LSTM and ConvLSTM units / Conv2D filters
    int kernel = 3;      // Conv2D and ConvLSTM kernel size (square)
    Padding padding = Padding::Valid;
    Act act = Act::Linear;
    double p = 0.0;      // dropout probability
    bool return_sequences = false;
    int aux_size = 0;    // ConcatAux: length of the appended side input

    static LayerSpec dense(int out, Act act = Act::Linear);
    static LayerSpec conv2d(int filters, int kernel = 3, Padding padding = Padding::Valid,
                            Act act = Act::Linear);
    static LayerSpec lstm(int units, bool return_sequences = false);
    static LayerSpec conv_lstm(int filters, int kernel = 3, bool return_sequences = false);
    static LayerSpec dropout(double p);
    static LayerSpec flatten();
    static LayerSpec activation(Act act);
    static LayerSpec concat_aux(int aux_size);

    void validate() const;
};

double apply_act(Act a, double x);
double act_grad_from_output(Act a, double y);  // derivative expressed via the output value

// ---------------------------------------------------------------------------
// Recurrent cell steps. Parameter layout (gate order i, f, g, o):
//   LSTM:      w_x (4J x D), w_h (4J x J), b (4J)
//   ConvLSTM:  w_x (4F x C x k x k), w_h (4F x F x k x k), b (4F); gate maps
//              are same-padded convolutions so the state keeps its shape.
// ---------------------------------------------------------------------------

struct LstmCellView {
    std::span<const double> w_x, w_h, b;
    int input_dim = 0;
    int units = 0;
};

/// One gated update: f,i,o = sigmoid(affine), candidate = tanh(affine),
/// c = f*c_prev + i*candidate, h = o*tanh(c). `gates_out`, when non-empty,
/// receives [i,f,g,o] post-activation values (4J) for backprop caches.
void lstm_step(const LstmCellView& cell, std::span<const double> x_t,
               std::span<const double> h_prev, std::span<const double> c_prev,
               std::span<double> h_out, std::span<double> c_out,
               std::span<double> gates_out = {});

struct ConvLstmCellView {
    std::span<const double> w_x, w_h, b;
    int in_channels = 0;
    int filters = 0;
    int kernel = 3;
    int height = 1, width = 1;
};

/// LSTM update with convolutional gate maps over a (C,H,W) frame.
/// With a 1x1 spatial frame this reduces exactly to lstm_step on the
/// centre kernel taps.
void convlstm_step(const ConvLstmCellView& cell, std::span<const double> x_t,
                   std::span<const double> h_prev, std::span<const double> c_prev,
                   std::span<double> h_out, std::span<double> c_out,
                   std::span<double> gates_out = {});

// ---------------------------------------------------------------------------
// Model graph
// ---------------------------------------------------------------------------

class Layer;

/// A chain of layers over one flat parameter vector and one flat gradient
/// vector. Optional side inputs are injected at ConcatAux layers. Forward
/// with training=false is deterministic; dropout draws from the graph's own
/// RNG stream in training mode.
class ModelGraph {
public:
    ModelGraph() = default;
    ModelGraph(ModelGraph&&) noexcept = default;
    ModelGraph& operator=(ModelGraph&&) noexcept = default;
    ModelGraph(const ModelGraph& other) { *this = other; }
    ModelGraph& operator=(const ModelGraph& other);

    static ModelGraph build(const std::vector<LayerSpec>& specs,
                            const std::vector<std::size_t>& input_dims, std::uint64_t seed);

    Tensor forward(const Tensor& input, bool training = false);
    Tensor forward(const std::vector<Tensor>& inputs, bool training = false);
    /// Gradient of the loss w.r.t. every parameter, given d(loss)/d(output).
    /// Requires a preceding forward on the same inputs. Accumulates into
    /// grads (call zero_grad between samples or use the accumulation for
    /// batching).
    void backward(const Tensor& loss_grad);
    void zero_grad();

    std::vector<double> params;
    std::vector<double> grads;

    const std::vector<LayerSpec>& specs() const { return specs_; }
    const std::vector<std::size_t>& input_dims() const { return input_dims_; }
    const std::vector<std::size_t>& output_dims() const { return output_dims_; }
    std::size_t layer_count() const { return layers_.size(); }
    std::string layer_desc(std::size_t i) const;
    /// Human-readable name of the layer owning parameter index `param_index`.
    std::string param_block_name(std::size_t param_index) const;
    /// [offset, count) of one layer's parameter block.
    std::pair<std::size_t, std::size_t> param_block(std::size_t layer) const;

    void set_training_seed(std::uint64_t seed) { train_rng_ = Rng(seed); }

    /// Versioned binary checkpoint: magic, layer table, 64-bit little-endian
    /// parameter array. Round-trips bit-exactly.
    void save(const std::string& path) const;
    static ModelGraph load(const std::string& path);

private:
    std::vector<LayerSpec> specs_;
    std::vector<std::size_t> input_dims_;
    std::vector<std::size_t> output_dims_;
    std::vector<std::unique_ptr<Layer>> layers_;
    Rng train_rng_{0};
    bool has_forward_ = false;

    void rebuild_layers();
};

/// Mean of squared componentwise errors.
double mse(const Tensor& pred, const Tensor& target);
Tensor mse_grad(const Tensor& pred, const Tensor& target);

struct AdamState {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps_hat = 1e-8;
    std::vector<double> m, v;
    std::int64_t step = 0;
};

/// Bias-corrected Adam update in place. Throws on non-finite gradients,
/// naming the offending index.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

/// Adam update for a whole model; non-finite gradients are reported with the
/// owning layer's name.
void adam_step_model(AdamState& state, ModelGraph& model);

}  // namespace arena::nn

#endif
