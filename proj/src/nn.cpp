#include "arena/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace arena::nn {

std::string to_string(Act a) {
    switch (a) {
        case Act::Linear: return "linear";
        case Act::Relu: return "relu";
        case Act::Sigmoid: return "sigmoid";
        case Act::Tanh: return "tanh";
    }
    return "?";
}

std::string to_string(LayerKind k) {
    switch (k) {
        case LayerKind::Dense: return "dense";
        case LayerKind::Conv2D: return "conv2d";
        case LayerKind::Lstm: return "lstm";
        case LayerKind::ConvLstm: return "conv_lstm";
        case LayerKind::Dropout: return "dropout";
        case LayerKind::Flatten: return "flatten";
        case LayerKind::Activation: return "activation";
        case LayerKind::ConcatAux: return "concat_aux";
    }
    return "?";
}

LayerSpec LayerSpec::dense(int out, Act act) {
    LayerSpec s;
    s.kind = LayerKind::Dense;
    s.units = out;
    s.act = act;
    return s;
}
LayerSpec LayerSpec::conv2d(int filters, int kernel, Padding padding, Act act) {
    LayerSpec s;
    s.kind = LayerKind::Conv2D;
    s.units = filters;
    s.kernel = kernel;
    s.padding = padding;
    s.act = act;
    return s;
}
LayerSpec LayerSpec::lstm(int units, bool return_sequences) {
    LayerSpec s;
    s.kind = LayerKind::Lstm;
    s.units = units;
    s.return_sequences = return_sequences;
    return s;
}
LayerSpec LayerSpec::conv_lstm(int filters, int kernel, bool return_sequences) {
    LayerSpec s;
    s.kind = LayerKind::ConvLstm;
    s.units = filters;
    s.kernel = kernel;
    s.return_sequences = return_sequences;
    return s;
}
LayerSpec LayerSpec::dropout(double p) {
    LayerSpec s;
    s.kind = LayerKind::Dropout;
    s.p = p;
    return s;
}
LayerSpec LayerSpec::flatten() {
    LayerSpec s;
    s.kind = LayerKind::Flatten;
    return s;
}
LayerSpec LayerSpec::activation(Act act) {
    LayerSpec s;
    s.kind = LayerKind::Activation;
    s.act = act;
    return s;
}
LayerSpec LayerSpec::concat_aux(int aux_size) {
    LayerSpec s;
    s.kind = LayerKind::ConcatAux;
    s.aux_size = aux_size;
    return s;
}

void LayerSpec::validate() const {
    switch (kind) {
        case LayerKind::Dense:
        case LayerKind::Lstm:
            if (units < 1) throw DataError(to_string(kind) + ": units must be >= 1");
            break;
        case LayerKind::Conv2D:
        case LayerKind::ConvLstm:
            if (units < 1) throw DataError(to_string(kind) + ": filters must be >= 1");
            if (kernel < 1) throw DataError(to_string(kind) + ": kernel must be >= 1");
            break;
        case LayerKind::Dropout:
            if (!(p >= 0.0 && p < 1.0)) throw DataError("dropout: p must be in [0,1)");
            break;
        case LayerKind::ConcatAux:
            if (aux_size < 1) throw DataError("concat_aux: aux_size must be >= 1");
            break;
        default:
            break;
    }
}

double apply_act(Act a, double x) {
    switch (a) {
        case Act::Linear: return x;
        case Act::Relu: return x > 0.0 ? x : 0.0;
        case Act::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case Act::Tanh: return std::tanh(x);
    }
    return x;
}

double act_grad_from_output(Act a, double y) {
    switch (a) {
        case Act::Linear: return 1.0;
        case Act::Relu: return y > 0.0 ? 1.0 : 0.0;
        case Act::Sigmoid: return y * (1.0 - y);
        case Act::Tanh: return 1.0 - y * y;
    }
    return 1.0;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y (F,Ho,Wo) = act-less conv of x (C,H,W) with w (F,C,k,k) plus bias b (F).
void conv2d_forward(const double* x, int C, int H, int W, const double* w, const double* b,
                    int F, int k, int pad, double* y, int Ho, int Wo) {
    for (int f = 0; f < F; ++f) {
        for (int oh = 0; oh < Ho; ++oh) {
            for (int ow = 0; ow < Wo; ++ow) {
                double sum = b ? b[f] : 0.0;
                for (int c = 0; c < C; ++c) {
                    const double* xc = x + static_cast<std::ptrdiff_t>(c) * H * W;
                    const double* wf = w + (static_cast<std::ptrdiff_t>(f) * C + c) * k * k;
                    for (int ki = 0; ki < k; ++ki) {
                        int ih = oh + ki - pad;
                        if (ih < 0 || ih >= H) continue;
                        for (int kj = 0; kj < k; ++kj) {
                            int iw = ow + kj - pad;
                            if (iw < 0 || iw >= W) continue;
                            sum += wf[ki * k + kj] * xc[ih * W + iw];
                        }
                    }
                }
                y[(static_cast<std::ptrdiff_t>(f) * Ho + oh) * Wo + ow] = sum;
            }
        }
    }
}

// Accumulates dw/db/dx for the convolution above. dx may be null.
void conv2d_backward(const double* x, int C, int H, int W, const double* w, int F, int k,
                     int pad, const double* dy, int Ho, int Wo, double* dw, double* db,
                     double* dx) {
    for (int f = 0; f < F; ++f) {
        const double* dyf = dy + static_cast<std::ptrdiff_t>(f) * Ho * Wo;
        if (db) {
            double s = 0.0;
            for (int i = 0; i < Ho * Wo; ++i) s += dyf[i];
            db[f] += s;
        }
        for (int c = 0; c < C; ++c) {
            const double* xc = x + static_cast<std::ptrdiff_t>(c) * H * W;
            double* dwf = dw ? dw + (static_cast<std::ptrdiff_t>(f) * C + c) * k * k : nullptr;
            const double* wf = w + (static_cast<std::ptrdiff_t>(f) * C + c) * k * k;
            double* dxc = dx ? dx + static_cast<std::ptrdiff_t>(c) * H * W : nullptr;
            for (int oh = 0; oh < Ho; ++oh) {
                for (int ow = 0; ow < Wo; ++ow) {
                    double d = dyf[oh * Wo + ow];
                    if (d == 0.0) continue;
                    for (int ki = 0; ki < k; ++ki) {
                        int ih = oh + ki - pad;
                        if (ih < 0 || ih >= H) continue;
                        for (int kj = 0; kj < k; ++kj) {
                            int iw = ow + kj - pad;
                            if (iw < 0 || iw >= W) continue;
                            if (dwf) dwf[ki * k + kj] += d * xc[ih * W + iw];
                            if (dxc) dxc[ih * W + iw] += d * wf[ki * k + kj];
                        }
                    }
                }
            }
        }
    }
}

void fan_in_uniform(double* w, std::size_t n, std::size_t fan_in, Rng& rng) {
    double limit = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(fan_in, 1)));
    for (std::size_t i = 0; i < n; ++i) w[i] = rng.uniform(-limit, limit);
}

}  // namespace

void lstm_step(const LstmCellView& cell, std::span<const double> x_t,
               std::span<const double> h_prev, std::span<const double> c_prev,
               std::span<double> h_out, std::span<double> c_out, std::span<double> gates_out) {
    const int J = cell.units, D = cell.input_dim;
    if (static_cast<int>(x_t.size()) != D || static_cast<int>(h_prev.size()) != J ||
        static_cast<int>(c_prev.size()) != J)
        throw DataError("lstm_step: dimension mismatch");
    std::vector<double> tmp;
    std::span<double> gates = gates_out;
    if (gates.empty()) {
        tmp.resize(static_cast<std::size_t>(4 * J));
        gates = tmp;
    }
    for (int r = 0; r < 4 * J; ++r) {
        double z = cell.b[static_cast<std::size_t>(r)];
        const double* wx = cell.w_x.data() + static_cast<std::ptrdiff_t>(r) * D;
        for (int d = 0; d < D; ++d) z += wx[d] * x_t[static_cast<std::size_t>(d)];
        const double* wh = cell.w_h.data() + static_cast<std::ptrdiff_t>(r) * J;
        for (int j = 0; j < J; ++j) z += wh[j] * h_prev[static_cast<std::size_t>(j)];
        int gate = r / J;
        gates[static_cast<std::size_t>(r)] = (gate == 2) ? std::tanh(z) : sigmoid(z);
    }
    for (int j = 0; j < J; ++j) {
        double i = gates[static_cast<std::size_t>(j)];
        double f = gates[static_cast<std::size_t>(J + j)];
        double g = gates[static_cast<std::size_t>(2 * J + j)];
        double o = gates[static_cast<std::size_t>(3 * J + j)];
        double c = f * c_prev[static_cast<std::size_t>(j)] + i * g;
        c_out[static_cast<std::size_t>(j)] = c;
        h_out[static_cast<std::size_t>(j)] = o * std::tanh(c);
    }
}

void convlstm_step(const ConvLstmCellView& cell, std::span<const double> x_t,
                   std::span<const double> h_prev, std::span<const double> c_prev,
                   std::span<double> h_out, std::span<double> c_out,
                   std::span<double> gates_out) {
    const int F = cell.filters, C = cell.in_channels, k = cell.kernel;
    const int H = cell.height, W = cell.width, S = H * W;
    if (static_cast<int>(x_t.size()) != C * S || static_cast<int>(h_prev.size()) != F * S ||
        static_cast<int>(c_prev.size()) != F * S)
        throw DataError("convlstm_step: dimension mismatch");
    int pad = k / 2;
    std::vector<double> z(static_cast<std::size_t>(4 * F) * static_cast<std::size_t>(S));
    conv2d_forward(x_t.data(), C, H, W, cell.w_x.data(), cell.b.data(), 4 * F, k, pad, z.data(),
                   H, W);
    std::vector<double> zh(z.size());
    conv2d_forward(h_prev.data(), F, H, W, cell.w_h.data(), nullptr, 4 * F, k, pad, zh.data(), H,
                   W);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += zh[i];

    for (int j = 0; j < F * S; ++j) {
        int gate_i = j, gate_f = F * S + j, gate_g = 2 * F * S + j, gate_o = 3 * F * S + j;
        double i = sigmoid(z[static_cast<std::size_t>(gate_i)]);
        double f = sigmoid(z[static_cast<std::size_t>(gate_f)]);
        double g = std::tanh(z[static_cast<std::size_t>(gate_g)]);
        double o = sigmoid(z[static_cast<std::size_t>(gate_o)]);
        if (!gates_out.empty()) {
            gates_out[static_cast<std::size_t>(gate_i)] = i;
            gates_out[static_cast<std::size_t>(gate_f)] = f;
            gates_out[static_cast<std::size_t>(gate_g)] = g;
            gates_out[static_cast<std::size_t>(gate_o)] = o;
        }
        double c = f * c_prev[static_cast<std::size_t>(j)] + i * g;
        c_out[static_cast<std::size_t>(j)] = c;
        h_out[static_cast<std::size_t>(j)] = o * std::tanh(c);
    }
}

// ---------------------------------------------------------------------------
// Layers
// ---------------------------------------------------------------------------

class Layer {
public:
    explicit Layer(LayerSpec spec) : spec(spec) {}
    virtual ~Layer() = default;

    LayerSpec spec;
    std::size_t offset = 0;
    std::size_t count = 0;
    std::vector<std::size_t> in_dims, out_dims;

    virtual void configure(int layer_index) = 0;
    virtual void init(double* w, Rng& rng) { (void)w, (void)rng; }
    virtual Tensor forward(const double* w, const Tensor& x, bool training, Rng* rng) = 0;
    virtual Tensor backward(const double* w, double* g, const Tensor& dy) = 0;
    virtual std::string describe() const { return to_string(spec.kind); }

protected:
    [[noreturn]] void shape_error(int layer_index, const std::string& msg) const {
        throw DataError("layer " + std::to_string(layer_index) + " (" + to_string(spec.kind) +
                        "): " + msg);
    }
};

namespace {

class DenseLayer : public Layer {
public:
    using Layer::Layer;

    void configure(int li) override {
        if (in_dims.size() != 1)
            shape_error(li, "expects rank-1 input, got shape with " +
                                std::to_string(in_dims.size()) + " dims; add flatten()");
        in_ = in_dims[0];
        out_ = static_cast<std::size_t>(spec.units);
        count = out_ * in_ + out_;
        out_dims = {out_};
    }

    void init(double* w, Rng& rng) override {
        fan_in_uniform(w, out_ * in_, in_, rng);
        std::fill(w + out_ * in_, w + count, 0.0);
    }

    Tensor forward(const double* w, const Tensor& x, bool, Rng*) override {
        x_ = x;
        Tensor y({out_});
        const double* b = w + out_ * in_;
        for (std::size_t r = 0; r < out_; ++r) {
            double s = b[r];
            const double* wr = w + r * in_;
            for (std::size_t c = 0; c < in_; ++c) s += wr[c] * x.data[c];
            y.data[r] = apply_act(spec.act, s);
        }
        y_ = y;
        return y;
    }

    Tensor backward(const double* w, double* g, const Tensor& dy) override {
        Tensor dx({in_});
        double* gb = g + out_ * in_;
        for (std::size_t r = 0; r < out_; ++r) {
            double dz = dy.data[r] * act_grad_from_output(spec.act, y_.data[r]);
            gb[r] += dz;
            double* gw = g + r * in_;
            const double* wr = w + r * in_;
            for (std::size_t c = 0; c < in_; ++c) {
                gw[c] += dz * x_.data[c];
                dx.data[c] += dz * wr[c];
            }
        }
        return dx;
    }

    std::string describe() const override {
        return "dense(" + std::to_string(spec.units) + "," + to_string(spec.act) + ")";
    }

private:
    std::size_t in_ = 0, out_ = 0;
    Tensor x_, y_;
};

class Conv2DLayer : public Layer {
public:
    using Layer::Layer;

    void configure(int li) override {
        if (in_dims.size() == 2) {
            C_ = 1;
            H_ = static_cast<int>(in_dims[0]);
            W_ = static_cast<int>(in_dims[1]);
        } else if (in_dims.size() == 3) {
            C_ = static_cast<int>(in_dims[0]);
            H_ = static_cast<int>(in_dims[1]);
            W_ = static_cast<int>(in_dims[2]);
        } else {
            shape_error(li, "expects rank-2 or rank-3 input");
        }
        F_ = spec.units;
        k_ = spec.kernel;
        if (spec.padding == Padding::Same) {
            if (k_ % 2 == 0) shape_error(li, "same padding requires an odd kernel");
            pad_ = k_ / 2;
            Ho_ = H_;
            Wo_ = W_;
        } else {
            pad_ = 0;
            Ho_ = H_ - k_ + 1;
            Wo_ = W_ - k_ + 1;
            if (Ho_ < 1 || Wo_ < 1)
                shape_error(li, "kernel " + std::to_string(k_) + " larger than input " +
                                    std::to_string(H_) + "x" + std::to_string(W_));
        }
        count = static_cast<std::size_t>(F_) * C_ * k_ * k_ + static_cast<std::size_t>(F_);
        out_dims = {static_cast<std::size_t>(F_), static_cast<std::size_t>(Ho_),
                    static_cast<std::size_t>(Wo_)};
    }

    void init(double* w, Rng& rng) override {
        std::size_t nw = static_cast<std::size_t>(F_) * C_ * k_ * k_;
        fan_in_uniform(w, nw, static_cast<std::size_t>(C_) * k_ * k_, rng);
        std::fill(w + nw, w + count, 0.0);
    }

    Tensor forward(const double* w, const Tensor& x, bool, Rng*) override {
        x_ = x;
        Tensor y(out_dims);
        conv2d_forward(x.data.data(), C_, H_, W_, w, w + static_cast<std::size_t>(F_) * C_ * k_ * k_,
                       F_, k_, pad_, y.data.data(), Ho_, Wo_);
        for (auto& v : y.data) v = apply_act(spec.act, v);
        y_ = y;
        return y;
    }

    Tensor backward(const double* w, double* g, const Tensor& dy) override {
        Tensor dz = dy;
        for (std::size_t i = 0; i < dz.size(); ++i)
            dz.data[i] *= act_grad_from_output(spec.act, y_.data[i]);
        Tensor dx(x_.dims);
        std::size_t nw = static_cast<std::size_t>(F_) * C_ * k_ * k_;
        conv2d_backward(x_.data.data(), C_, H_, W_, w, F_, k_, pad_, dz.data.data(), Ho_, Wo_, g,
                        g + nw, dx.data.data());
        return dx;
    }

    std::string describe() const override {
        return "conv2d(" + std::to_string(F_) + ",k" + std::to_string(k_) +
               (spec.padding == Padding::Same ? ",same" : ",valid") + "," + to_string(spec.act) +
               ")";
    }

private:
    int C_ = 1, H_ = 0, W_ = 0, F_ = 0, k_ = 3, pad_ = 0, Ho_ = 0, Wo_ = 0;
    Tensor x_, y_;
};

class LstmLayer : public Layer {
public:
    using Layer::Layer;

    void configure(int li) override {
        if (in_dims.size() < 2) shape_error(li, "expects input with a trailing time axis");
        T_ = static_cast<int>(in_dims.back());
        D_ = 1;
        for (std::size_t i = 0; i + 1 < in_dims.size(); ++i) D_ *= static_cast<int>(in_dims[i]);
        J_ = spec.units;
        count = static_cast<std::size_t>(4 * J_) * (D_ + J_ + 1);
        if (spec.return_sequences)
            out_dims = {static_cast<std::size_t>(J_), static_cast<std::size_t>(T_)};
        else
            out_dims = {static_cast<std::size_t>(J_)};
    }

    void init(double* w, Rng& rng) override {
        std::size_t nwx = static_cast<std::size_t>(4 * J_) * D_;
        std::size_t nwh = static_cast<std::size_t>(4 * J_) * J_;
        fan_in_uniform(w, nwx, static_cast<std::size_t>(D_), rng);
        fan_in_uniform(w + nwx, nwh, static_cast<std::size_t>(J_), rng);
        double* b = w + nwx + nwh;
        std::fill(b, b + 4 * J_, 0.0);
        // Forget-gate bias at 1 so fresh cells start by remembering.
        std::fill(b + J_, b + 2 * J_, 1.0);
    }

    LstmCellView view(const double* w) const {
        std::size_t nwx = static_cast<std::size_t>(4 * J_) * D_;
        std::size_t nwh = static_cast<std::size_t>(4 * J_) * J_;
        return LstmCellView{{w, nwx}, {w + nwx, nwh}, {w + nwx + nwh, static_cast<std::size_t>(4 * J_)},
                            D_, J_};
    }

    Tensor forward(const double* w, const Tensor& x, bool, Rng*) override {
        auto cell = view(w);
        // Transpose (D,T) [time-last] to (T,D) for contiguous steps.
        xt_.assign(static_cast<std::size_t>(T_) * D_, 0.0);
        for (int d = 0; d < D_; ++d)
            for (int t = 0; t < T_; ++t)
                xt_[static_cast<std::size_t>(t) * D_ + d] =
                    x.data[static_cast<std::size_t>(d) * T_ + t];
        hs_.assign(static_cast<std::size_t>(T_) * J_, 0.0);
        cs_.assign(static_cast<std::size_t>(T_) * J_, 0.0);
        gates_.assign(static_cast<std::size_t>(T_) * 4 * J_, 0.0);
        std::vector<double> h0(static_cast<std::size_t>(J_), 0.0), c0 = h0;
        for (int t = 0; t < T_; ++t) {
            std::span<const double> hp =
                t == 0 ? std::span<const double>(h0)
                       : std::span<const double>(hs_).subspan(
                             static_cast<std::size_t>(t - 1) * J_, static_cast<std::size_t>(J_));
            std::span<const double> cp =
                t == 0 ? std::span<const double>(c0)
                       : std::span<const double>(cs_).subspan(
                             static_cast<std::size_t>(t - 1) * J_, static_cast<std::size_t>(J_));
            lstm_step(cell,
                      std::span<const double>(xt_).subspan(static_cast<std::size_t>(t) * D_,
                                                           static_cast<std::size_t>(D_)),
                      hp, cp,
                      std::span<double>(hs_).subspan(static_cast<std::size_t>(t) * J_,
                                                     static_cast<std::size_t>(J_)),
                      std::span<double>(cs_).subspan(static_cast<std::size_t>(t) * J_,
                                                     static_cast<std::size_t>(J_)),
                      std::span<double>(gates_).subspan(static_cast<std::size_t>(t) * 4 * J_,
                                                        static_cast<std::size_t>(4 * J_)));
        }
        if (spec.return_sequences) {
            Tensor y(out_dims);
            for (int j = 0; j < J_; ++j)
                for (int t = 0; t < T_; ++t)
                    y.data[static_cast<std::size_t>(j) * T_ + t] =
                        hs_[static_cast<std::size_t>(t) * J_ + j];
            return y;
        }
        Tensor y(out_dims);
        std::copy(hs_.end() - J_, hs_.end(), y.data.begin());
        return y;
    }

    Tensor backward(const double* w, double* g, const Tensor& dy) override {
        auto cell = view(w);
        std::size_t nwx = static_cast<std::size_t>(4 * J_) * D_;
        std::size_t nwh = static_cast<std::size_t>(4 * J_) * J_;
        double* gwx = g;
        double* gwh = g + nwx;
        double* gb = g + nwx + nwh;

        std::vector<double> dh(static_cast<std::size_t>(J_), 0.0);
        std::vector<double> dc(static_cast<std::size_t>(J_), 0.0);
        std::vector<double> dz(static_cast<std::size_t>(4 * J_), 0.0);
        std::vector<double> dxt(static_cast<std::size_t>(T_) * D_, 0.0);

        if (!spec.return_sequences)
            for (int j = 0; j < J_; ++j) dh[static_cast<std::size_t>(j)] = dy.data[static_cast<std::size_t>(j)];

        for (int t = T_ - 1; t >= 0; --t) {
            if (spec.return_sequences)
                for (int j = 0; j < J_; ++j)
                    dh[static_cast<std::size_t>(j)] += dy.data[static_cast<std::size_t>(j) * T_ + t];
            const double* gates = gates_.data() + static_cast<std::size_t>(t) * 4 * J_;
            const double* c_t = cs_.data() + static_cast<std::size_t>(t) * J_;
            const double* c_prev =
                t == 0 ? nullptr : cs_.data() + static_cast<std::size_t>(t - 1) * J_;
            const double* h_prev =
                t == 0 ? nullptr : hs_.data() + static_cast<std::size_t>(t - 1) * J_;
            for (int j = 0; j < J_; ++j) {
                double i = gates[j], f = gates[J_ + j], gg = gates[2 * J_ + j],
                       o = gates[3 * J_ + j];
                double tc = std::tanh(c_t[j]);
                double dhj = dh[static_cast<std::size_t>(j)];
                double doj = dhj * tc;
                double dcj = dc[static_cast<std::size_t>(j)] + dhj * o * (1.0 - tc * tc);
                double dij = dcj * gg;
                double dgj = dcj * i;
                double dfj = dcj * (c_prev ? c_prev[j] : 0.0);
                dz[static_cast<std::size_t>(j)] = dij * i * (1.0 - i);
                dz[static_cast<std::size_t>(J_ + j)] = dfj * f * (1.0 - f);
                dz[static_cast<std::size_t>(2 * J_ + j)] = dgj * (1.0 - gg * gg);
                dz[static_cast<std::size_t>(3 * J_ + j)] = doj * o * (1.0 - o);
                dc[static_cast<std::size_t>(j)] = dcj * f;  // carried to t-1
            }
            const double* x_t = xt_.data() + static_cast<std::size_t>(t) * D_;
            std::fill(dh.begin(), dh.end(), 0.0);
            for (int r = 0; r < 4 * J_; ++r) {
                double dzr = dz[static_cast<std::size_t>(r)];
                if (dzr == 0.0) continue;
                gb[r] += dzr;
                double* gwxr = gwx + static_cast<std::ptrdiff_t>(r) * D_;
                const double* wxr = cell.w_x.data() + static_cast<std::ptrdiff_t>(r) * D_;
                double* dxtt = dxt.data() + static_cast<std::size_t>(t) * D_;
                for (int d = 0; d < D_; ++d) {
                    gwxr[d] += dzr * x_t[d];
                    dxtt[d] += dzr * wxr[d];
                }
                if (h_prev) {
                    double* gwhr = gwh + static_cast<std::ptrdiff_t>(r) * J_;
                    const double* whr = cell.w_h.data() + static_cast<std::ptrdiff_t>(r) * J_;
                    for (int j = 0; j < J_; ++j) {
                        gwhr[j] += dzr * h_prev[j];
                        dh[static_cast<std::size_t>(j)] += dzr * whr[j];
                    }
                } else {
                    // h_prev is zero at t=0; only dh (discarded) would change.
                }
            }
        }

        Tensor dx(in_dims);
        for (int d = 0; d < D_; ++d)
            for (int t = 0; t < T_; ++t)
                dx.data[static_cast<std::size_t>(d) * T_ + t] =
                    dxt[static_cast<std::size_t>(t) * D_ + d];
        return dx;
    }

    std::string describe() const override {
        return "lstm(" + std::to_string(J_) + (spec.return_sequences ? ",seq" : "") + ")";
    }

private:
    int T_ = 0, D_ = 0, J_ = 0;
    std::vector<double> xt_, hs_, cs_, gates_;
};

class ConvLstmLayer : public Layer {
public:
    using Layer::Layer;

    void configure(int li) override {
        if (in_dims.size() == 2) {
            C_ = 1;
            H_ = static_cast<int>(in_dims[0]);
            W_ = 1;
            T_ = static_cast<int>(in_dims[1]);
        } else if (in_dims.size() == 4) {
            C_ = static_cast<int>(in_dims[0]);
            H_ = static_cast<int>(in_dims[1]);
            W_ = static_cast<int>(in_dims[2]);
            T_ = static_cast<int>(in_dims[3]);
        } else {
            shape_error(li, "expects rank-2 (H,T) or rank-4 (C,H,W,T) input");
        }
        F_ = spec.units;
        k_ = spec.kernel;
        if (k_ % 2 == 0) shape_error(li, "kernel must be odd (same-padded gate maps)");
        S_ = H_ * W_;
        count = static_cast<std::size_t>(4 * F_) * C_ * k_ * k_ +
                static_cast<std::size_t>(4 * F_) * F_ * k_ * k_ + static_cast<std::size_t>(4 * F_);
        if (spec.return_sequences)
            out_dims = {static_cast<std::size_t>(F_), static_cast<std::size_t>(H_),
                        static_cast<std::size_t>(W_), static_cast<std::size_t>(T_)};
        else
            out_dims = {static_cast<std::size_t>(F_), static_cast<std::size_t>(H_),
                        static_cast<std::size_t>(W_)};
    }

    void init(double* w, Rng& rng) override {
        std::size_t nwx = static_cast<std::size_t>(4 * F_) * C_ * k_ * k_;
        std::size_t nwh = static_cast<std::size_t>(4 * F_) * F_ * k_ * k_;
        fan_in_uniform(w, nwx, static_cast<std::size_t>(C_) * k_ * k_, rng);
        fan_in_uniform(w + nwx, nwh, static_cast<std::size_t>(F_) * k_ * k_, rng);
        double* b = w + nwx + nwh;
        std::fill(b, b + 4 * F_, 0.0);
        std::fill(b + F_, b + 2 * F_, 1.0);
    }

    ConvLstmCellView view(const double* w) const {
        std::size_t nwx = static_cast<std::size_t>(4 * F_) * C_ * k_ * k_;
        std::size_t nwh = static_cast<std::size_t>(4 * F_) * F_ * k_ * k_;
        return ConvLstmCellView{{w, nwx},
                                {w + nwx, nwh},
                                {w + nwx + nwh, static_cast<std::size_t>(4 * F_)},
                                C_, F_, k_, H_, W_};
    }

    Tensor forward(const double* w, const Tensor& x, bool, Rng*) override {
        auto cell = view(w);
        const std::size_t xs = static_cast<std::size_t>(C_) * S_;
        const std::size_t hs = static_cast<std::size_t>(F_) * S_;
        xt_.assign(static_cast<std::size_t>(T_) * xs, 0.0);
        for (std::size_t d = 0; d < xs; ++d)
            for (int t = 0; t < T_; ++t)
                xt_[static_cast<std::size_t>(t) * xs + d] = x.data[d * T_ + static_cast<std::size_t>(t)];
        hs_.assign(static_cast<std::size_t>(T_) * hs, 0.0);
        cs_.assign(static_cast<std::size_t>(T_) * hs, 0.0);
        gates_.assign(static_cast<std::size_t>(T_) * 4 * hs, 0.0);
        std::vector<double> zero(hs, 0.0);
        for (int t = 0; t < T_; ++t) {
            std::span<const double> hp =
                t == 0 ? std::span<const double>(zero)
                       : std::span<const double>(hs_).subspan(static_cast<std::size_t>(t - 1) * hs, hs);
            std::span<const double> cp =
                t == 0 ? std::span<const double>(zero)
                       : std::span<const double>(cs_).subspan(static_cast<std::size_t>(t - 1) * hs, hs);
            convlstm_step(cell, std::span<const double>(xt_).subspan(static_cast<std::size_t>(t) * xs, xs),
                          hp, cp,
                          std::span<double>(hs_).subspan(static_cast<std::size_t>(t) * hs, hs),
                          std::span<double>(cs_).subspan(static_cast<std::size_t>(t) * hs, hs),
                          std::span<double>(gates_).subspan(static_cast<std::size_t>(t) * 4 * hs, 4 * hs));
        }
        if (spec.return_sequences) {
            Tensor y(out_dims);
            for (std::size_t d = 0; d < hs; ++d)
                for (int t = 0; t < T_; ++t)
                    y.data[d * T_ + static_cast<std::size_t>(t)] =
                        hs_[static_cast<std::size_t>(t) * hs + d];
            return y;
        }
        Tensor y(out_dims);
        std::copy(hs_.end() - static_cast<std::ptrdiff_t>(hs), hs_.end(), y.data.begin());
        return y;
    }

    Tensor backward(const double* w, double* g, const Tensor& dy) override {
        auto cell = view(w);
        const std::size_t xs = static_cast<std::size_t>(C_) * S_;
        const std::size_t hsz = static_cast<std::size_t>(F_) * S_;
        std::size_t nwx = static_cast<std::size_t>(4 * F_) * C_ * k_ * k_;
        std::size_t nwh = static_cast<std::size_t>(4 * F_) * F_ * k_ * k_;
        double* gwx = g;
        double* gwh = g + nwx;
        double* gb = g + nwx + nwh;
        int pad = k_ / 2;

        std::vector<double> dh(hsz, 0.0), dc(hsz, 0.0), dz(4 * hsz, 0.0);
        std::vector<double> dxt(static_cast<std::size_t>(T_) * xs, 0.0);
        std::vector<double> dh_prev(hsz, 0.0);

        if (!spec.return_sequences)
            std::copy(dy.data.begin(), dy.data.end(), dh.begin());

        for (int t = T_ - 1; t >= 0; --t) {
            if (spec.return_sequences)
                for (std::size_t d = 0; d < hsz; ++d)
                    dh[d] += dy.data[d * T_ + static_cast<std::size_t>(t)];
            const double* gates = gates_.data() + static_cast<std::size_t>(t) * 4 * hsz;
            const double* c_t = cs_.data() + static_cast<std::size_t>(t) * hsz;
            const double* c_prev =
                t == 0 ? nullptr : cs_.data() + static_cast<std::size_t>(t - 1) * hsz;
            const double* h_prev =
                t == 0 ? nullptr : hs_.data() + static_cast<std::size_t>(t - 1) * hsz;
            for (std::size_t j = 0; j < hsz; ++j) {
                double i = gates[j], f = gates[hsz + j], gg = gates[2 * hsz + j],
                       o = gates[3 * hsz + j];
                double tc = std::tanh(c_t[j]);
                double dhj = dh[j];
                double doj = dhj * tc;
                double dcj = dc[j] + dhj * o * (1.0 - tc * tc);
                dz[j] = dcj * gg * i * (1.0 - i);
                dz[hsz + j] = dcj * (c_prev ? c_prev[j] : 0.0) * f * (1.0 - f);
                dz[2 * hsz + j] = dcj * i * (1.0 - gg * gg);
                dz[3 * hsz + j] = doj * o * (1.0 - o);
                dc[j] = dcj * f;
            }
            const double* x_t = xt_.data() + static_cast<std::size_t>(t) * xs;
            // dz acts as dy of the two gate convolutions.
            conv2d_backward(x_t, C_, H_, W_, cell.w_x.data(), 4 * F_, k_, pad, dz.data(), H_, W_,
                            gwx, gb, dxt.data() + static_cast<std::size_t>(t) * xs);
            std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
            if (h_prev) {
                conv2d_backward(h_prev, F_, H_, W_, cell.w_h.data(), 4 * F_, k_, pad, dz.data(),
                                H_, W_, gwh, nullptr, dh_prev.data());
            }
            dh = dh_prev;
        }

        Tensor dx(in_dims);
        for (std::size_t d = 0; d < xs; ++d)
            for (int t = 0; t < T_; ++t)
                dx.data[d * T_ + static_cast<std::size_t>(t)] =
                    dxt[static_cast<std::size_t>(t) * xs + d];
        return dx;
    }

    std::string describe() const override {
        return "conv_lstm(" + std::to_string(F_) + ",k" + std::to_string(k_) +
               (spec.return_sequences ? ",seq" : "") + ")";
    }

private:
    int C_ = 1, H_ = 1, W_ = 1, T_ = 0, F_ = 0, k_ = 3, S_ = 1;
    std::vector<double> xt_, hs_, cs_, gates_;
};

class DropoutLayer : public Layer {
public:
    using Layer::Layer;

    void configure(int) override {
        count = 0;
        out_dims = in_dims;
    }

    Tensor forward(const double*, const Tensor& x, bool training, Rng* rng) override {
        if (!training || spec.p <= 0.0) {
            mask_.clear();
            return x;
        }
        if (!rng) throw DataError("dropout: training forward requires an RNG");
        double keep = 1.0 - spec.p;
        mask_.resize(x.size());
        Tensor y = x;
        for (std::size_t i = 0; i < x.size(); ++i) {
            bool kept = rng->uniform01() >= spec.p;
            mask_[i] = kept ? 1.0 / keep : 0.0;
            y.data[i] *= mask_[i];
        }
        return y;
    }

    Tensor backward(const double*, double*, const Tensor& dy) override {
        if (mask_.empty()) return dy;
        Tensor dx = dy;
        for (std::size_t i = 0; i < dx.size(); ++i) dx.data[i] *= mask_[i];
        return dx;
    }

    std::string describe() const override {
        return "dropout(" + std::to_string(spec.p) + ")";
    }

private:
    std::vector<double> mask_;
};

class FlattenLayer : public Layer {
public:
    using Layer::Layer;

    void configure(int) override {
        count = 0;
        out_dims = {Tensor::count(in_dims)};
    }

    Tensor forward(const double*, const Tensor& x, bool, Rng*) override {
        Tensor y = x;
        y.dims = out_dims;
        return y;
    }

    Tensor backward(const double*, double*, const Tensor& dy) override {
        Tensor dx = dy;
        dx.dims = in_dims;
        return dx;
    }
};

class ActivationLayer : public Layer {
public:
    using Layer::Layer;

    void configure(int) override {
        count = 0;
        out_dims = in_dims;
    }

    Tensor forward(const double*, const Tensor& x, bool, Rng*) override {
        Tensor y = x;
        for (auto& v : y.data) v = apply_act(spec.act, v);
        y_ = y;
        return y;
    }

    Tensor backward(const double*, double*, const Tensor& dy) override {
        Tensor dx = dy;
        for (std::size_t i = 0; i < dx.size(); ++i)
            dx.data[i] *= act_grad_from_output(spec.act, y_.data[i]);
        return dx;
    }

    std::string describe() const override { return "activation(" + to_string(spec.act) + ")"; }

private:
    Tensor y_;
};

class ConcatAuxLayer : public Layer {
public:
    using Layer::Layer;

    void configure(int li) override {
        if (in_dims.size() != 1) shape_error(li, "expects rank-1 input; add flatten()");
        count = 0;
        main_ = in_dims[0];
        out_dims = {main_ + static_cast<std::size_t>(spec.aux_size)};
    }

    void set_aux(const Tensor& aux) {
        if (aux.size() != static_cast<std::size_t>(spec.aux_size))
            throw DataError("concat_aux: side input has size " + std::to_string(aux.size()) +
                            ", expected " + std::to_string(spec.aux_size));
        aux_ = aux;
    }

    Tensor forward(const double*, const Tensor& x, bool, Rng*) override {
        if (aux_.size() != static_cast<std::size_t>(spec.aux_size))
            throw DataError("concat_aux: side input not provided");
        Tensor y(out_dims);
        std::copy(x.data.begin(), x.data.end(), y.data.begin());
        std::copy(aux_.data.begin(), aux_.data.end(), y.data.begin() + static_cast<std::ptrdiff_t>(main_));
        return y;
    }

    Tensor backward(const double*, double*, const Tensor& dy) override {
        Tensor dx({main_});
        std::copy(dy.data.begin(), dy.data.begin() + static_cast<std::ptrdiff_t>(main_),
                  dx.data.begin());
        return dx;
    }

    std::string describe() const override {
        return "concat_aux(" + std::to_string(spec.aux_size) + ")";
    }

private:
    std::size_t main_ = 0;
    Tensor aux_;
};

std::unique_ptr<Layer> make_layer(const LayerSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case LayerKind::Dense: return std::make_unique<DenseLayer>(spec);
        case LayerKind::Conv2D: return std::make_unique<Conv2DLayer>(spec);
        case LayerKind::Lstm: return std::make_unique<LstmLayer>(spec);
        case LayerKind::ConvLstm: return std::make_unique<ConvLstmLayer>(spec);
        case LayerKind::Dropout: return std::make_unique<DropoutLayer>(spec);
        case LayerKind::Flatten: return std::make_unique<FlattenLayer>(spec);
        case LayerKind::Activation: return std::make_unique<ActivationLayer>(spec);
        case LayerKind::ConcatAux: return std::make_unique<ConcatAuxLayer>(spec);
    }
    throw DataError("unknown layer kind");
}

}  // namespace

// ---------------------------------------------------------------------------
// ModelGraph
// ---------------------------------------------------------------------------

ModelGraph& ModelGraph::operator=(const ModelGraph& other) {
    if (this == &other) return *this;
    specs_ = other.specs_;
    input_dims_ = other.input_dims_;
    params = other.params;
    grads = other.grads;
    train_rng_ = other.train_rng_;
    has_forward_ = false;
    rebuild_layers();
    return *this;
}

void ModelGraph::rebuild_layers() {
    layers_.clear();
    std::vector<std::size_t> dims = input_dims_;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        auto layer = make_layer(specs_[i]);
        layer->in_dims = dims;
        layer->configure(static_cast<int>(i));
        layer->offset = offset;
        offset += layer->count;
        dims = layer->out_dims;
        layers_.push_back(std::move(layer));
    }
    output_dims_ = dims;
    if (params.size() != offset) params.assign(offset, 0.0);
    grads.assign(offset, 0.0);
}

ModelGraph ModelGraph::build(const std::vector<LayerSpec>& specs,
                             const std::vector<std::size_t>& input_dims, std::uint64_t seed) {
    ModelGraph g;
    g.specs_ = specs;
    g.input_dims_ = input_dims;
    g.rebuild_layers();
    for (std::size_t i = 0; i < g.layers_.size(); ++i) {
        Rng layer_rng(split_seed(seed, 0x1a7e5ULL, static_cast<std::uint64_t>(i)));
        g.layers_[i]->init(g.params.data() + g.layers_[i]->offset, layer_rng);
    }
    g.train_rng_ = Rng(split_seed(seed, 0xd87ULL));
    return g;
}

Tensor ModelGraph::forward(const Tensor& input, bool training) {
    return forward(std::vector<Tensor>{input}, training);
}

Tensor ModelGraph::forward(const std::vector<Tensor>& inputs, bool training) {
    if (inputs.empty()) throw DataError("forward: no inputs");
    if (inputs[0].dims != input_dims_) {
        Tensor probe(input_dims_);
        throw DataError("forward: input shape " + inputs[0].shape_str() + " does not match model input " +
                        probe.shape_str());
    }
    std::size_t aux_index = 1;
    for (auto& layer : layers_) {
        if (layer->spec.kind == LayerKind::ConcatAux) {
            if (aux_index >= inputs.size())
                throw DataError("forward: model needs " + std::to_string(aux_index + 1) +
                                " inputs, got " + std::to_string(inputs.size()));
            static_cast<ConcatAuxLayer*>(layer.get())->set_aux(inputs[aux_index++]);
        }
    }
    if (aux_index != inputs.size())
        throw DataError("forward: model takes " + std::to_string(aux_index) + " inputs, got " +
                        std::to_string(inputs.size()));

    Tensor x = inputs[0];
    for (auto& layer : layers_)
        x = layer->forward(params.data() + layer->offset, x, training, training ? &train_rng_ : nullptr);
    has_forward_ = true;
    return x;
}

void ModelGraph::backward(const Tensor& loss_grad) {
    if (!has_forward_) throw DataError("backward called before forward");
    if (loss_grad.dims != output_dims_)
        throw DataError("backward: loss gradient shape " + loss_grad.shape_str() +
                        " does not match model output");
    Tensor d = loss_grad;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
        d = (*it)->backward(params.data() + (*it)->offset, grads.data() + (*it)->offset, d);
}

void ModelGraph::zero_grad() { std::fill(grads.begin(), grads.end(), 0.0); }

std::string ModelGraph::layer_desc(std::size_t i) const { return layers_.at(i)->describe(); }

std::string ModelGraph::param_block_name(std::size_t param_index) const {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (param_index >= layers_[i]->offset &&
            param_index < layers_[i]->offset + layers_[i]->count)
            return "layer " + std::to_string(i) + " [" + layers_[i]->describe() + "]";
    }
    return "unknown parameter block";
}

std::pair<std::size_t, std::size_t> ModelGraph::param_block(std::size_t layer) const {
    return {layers_.at(layer)->offset, layers_.at(layer)->count};
}

// ---------------------------------------------------------------------------
// Checkpoint I/O: magic, input dims, layer table, little-endian f64 params.
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'A', 'R', 'N', 'N', '0', '0', '0', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n) {
        if (pos + n > buf.size()) throw DataError("checkpoint truncated");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
};

}  // namespace

void ModelGraph::save(const std::string& path) const {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    put_u32(out, static_cast<std::uint32_t>(input_dims_.size()));
    for (std::size_t d : input_dims_) put_u64(out, d);
    put_u32(out, static_cast<std::uint32_t>(specs_.size()));
    for (const auto& s : specs_) {
        put_u32(out, static_cast<std::uint32_t>(s.kind));
        put_u32(out, static_cast<std::uint32_t>(s.units));
        put_u32(out, static_cast<std::uint32_t>(s.kernel));
        put_u32(out, static_cast<std::uint32_t>(s.padding));
        put_u32(out, static_cast<std::uint32_t>(s.act));
        put_u32(out, s.return_sequences ? 1u : 0u);
        put_u32(out, static_cast<std::uint32_t>(s.aux_size));
        put_f64(out, s.p);
    }
    put_u64(out, params.size());
    for (double v : params) put_f64(out, v);
    write_file_atomic(path, out);
}

ModelGraph ModelGraph::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Reader r{buf};
    r.need(sizeof(kMagic));
    if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
        throw DataError("bad checkpoint magic in " + path);
    r.pos = sizeof(kMagic);

    ModelGraph g;
    std::uint32_t nd = r.u32();
    for (std::uint32_t i = 0; i < nd; ++i) g.input_dims_.push_back(r.u64());
    std::uint32_t nl = r.u32();
    for (std::uint32_t i = 0; i < nl; ++i) {
        LayerSpec s;
        s.kind = static_cast<LayerKind>(r.u32());
        s.units = static_cast<int>(r.u32());
        s.kernel = static_cast<int>(r.u32());
        s.padding = static_cast<Padding>(r.u32());
        s.act = static_cast<Act>(r.u32());
        s.return_sequences = r.u32() != 0;
        s.aux_size = static_cast<int>(r.u32());
        s.p = r.f64();
        g.specs_.push_back(s);
    }
    std::uint64_t np = r.u64();
    g.params.resize(np);
    for (std::uint64_t i = 0; i < np; ++i) g.params[i] = r.f64();
    std::vector<double> loaded = std::move(g.params);
    g.params.clear();
    g.rebuild_layers();
    if (loaded.size() != g.grads.size())
        throw DataError("checkpoint parameter count does not match layer table");
    g.params = std::move(loaded);
    return g;
}

// ---------------------------------------------------------------------------
// Loss and optimizer
// ---------------------------------------------------------------------------

double mse(const Tensor& pred, const Tensor& target) {
    if (pred.size() != target.size()) throw DataError("mse: size mismatch");
    if (pred.size() == 0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double d = pred.data[i] - target.data[i];
        s += d * d;
    }
    return s / static_cast<double>(pred.size());
}

Tensor mse_grad(const Tensor& pred, const Tensor& target) {
    if (pred.size() != target.size()) throw DataError("mse_grad: size mismatch");
    Tensor g(pred.dims);
    double scale = 2.0 / static_cast<double>(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i)
        g.data[i] = scale * (pred.data[i] - target.data[i]);
    return g;
}

void adam_step(AdamState& s, std::span<double> params, std::span<const double> grads) {
    if (params.size() != grads.size()) throw DataError("adam_step: size mismatch");
    if (s.m.empty()) {
        s.m.assign(params.size(), 0.0);
        s.v.assign(params.size(), 0.0);
    }
    if (s.m.size() != params.size())
        throw DataError("adam_step: moment vectors sized for a different model");
    ++s.step;
    double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
    double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        double g = grads[i];
        if (!std::isfinite(g))
            throw DataError("adam_step: non-finite gradient at parameter " + std::to_string(i));
        s.m[i] = s.beta1 * s.m[i] + (1.0 - s.beta1) * g;
        s.v[i] = s.beta2 * s.v[i] + (1.0 - s.beta2) * g * g;
        double mhat = s.m[i] / bc1;
        double vhat = s.v[i] / bc2;
        params[i] -= s.learning_rate * mhat / (std::sqrt(vhat) + s.eps_hat);
    }
}

void adam_step_model(AdamState& state, ModelGraph& model) {
    for (std::size_t i = 0; i < model.grads.size(); ++i) {
        if (!std::isfinite(model.grads[i]))
            throw DataError("adam_step: non-finite gradient in " + model.param_block_name(i));
    }
    adam_step(state, model.params, model.grads);
}

}  // namespace arena::nn
