#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cfnav/rng.hpp"
#include "cfnav/tensor.hpp"

namespace cfnav::nn {

// Named parameter with its gradient accumulator and Adam state. Training
// resumes bit-exactly from a saved block because the moments and step count
// travel with the value.
template <class S>
struct ParamBlockT {
    std::string name;
    TensorT<S> value;
    TensorT<S> grad;
    TensorT<S> adam_m;
    TensorT<S> adam_v;
    long step_count = 0;

    static ParamBlockT zeros(std::string name, std::vector<int> shape) {
        ParamBlockT b;
        b.name = std::move(name);
        b.value = TensorT<S>::zeros(shape);
        b.grad = TensorT<S>::zeros(shape);
        b.adam_m = TensorT<S>::zeros(shape);
        b.adam_v = TensorT<S>::zeros(std::move(shape));
        return b;
    }

    void init_uniform(Rng& rng, double scale) {
        for (S& v : value.data)
            v = static_cast<S>((rng.uniform() * 2.0 - 1.0) * scale);
    }

    void zero_grad() { grad.fill(S(0)); }
};

using ParamBlock = ParamBlockT<float>;

// ---------------------------------------------------------------- activations

template <class S>
inline S sigmoid(S z) {
    return S(1) / (S(1) + std::exp(-z));
}

template <class S>
inline void softmax(std::span<const S> logits, std::span<S> probs) {
    S m = logits[0];
    for (S v : logits) m = std::max(m, v);
    S sum = 0;
    for (size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - m);
        sum += probs[i];
    }
    for (size_t i = 0; i < probs.size(); ++i) probs[i] /= sum;
}

inline constexpr double kBceEps = 1e-7;

// Binary cross-entropy with epsilon clamping so log(0) can never occur.
template <class S>
inline S bce(S p_true, S p_hat) {
    const S eps = static_cast<S>(kBceEps);
    const S p = std::clamp(p_hat, eps, S(1) - eps);
    return -p_true * std::log(p) - (S(1) - p_true) * std::log(S(1) - p);
}

// ---------------------------------------------------------------- dense layer

// y = W x + b, W: [out, in]
template <class S>
inline void dense_forward(const TensorT<S>& W, const TensorT<S>& b,
                          std::span<const S> x, std::span<S> y) {
    const int out = W.rows(), in = W.cols();
    if (static_cast<int>(x.size()) != in || static_cast<int>(y.size()) != out ||
        b.numel() != out)
        throw ShapeError("dense_forward");
    for (int r = 0; r < out; ++r) {
        S acc = b.data[r];
        const S* wr = &W.data[static_cast<size_t>(r) * in];
        for (int c = 0; c < in; ++c) acc += wr[c] * x[c];
        y[r] = acc;
    }
}

// Accumulates dW, db, dx. dx may be empty when the input gradient is unused.
template <class S>
inline void dense_backward(const TensorT<S>& W, std::span<const S> x,
                           std::span<const S> dy, TensorT<S>& dW, TensorT<S>& db,
                           std::span<S> dx) {
    const int out = W.rows(), in = W.cols();
    if (static_cast<int>(x.size()) != in || static_cast<int>(dy.size()) != out)
        throw ShapeError("dense_backward");
    for (int r = 0; r < out; ++r) {
        const S g = dy[r];
        S* dwr = &dW.data[static_cast<size_t>(r) * in];
        for (int c = 0; c < in; ++c) dwr[c] += g * x[c];
        db.data[r] += g;
    }
    if (!dx.empty()) {
        for (int r = 0; r < out; ++r) {
            const S g = dy[r];
            const S* wr = &W.data[static_cast<size_t>(r) * in];
            for (int c = 0; c < in; ++c) dx[c] += wr[c] * g;
        }
    }
}

// ------------------------------------------------------------------ LSTM cell

// Single LSTM cell with gates packed in i, f, g, o order:
//   z = Wx x + Wh h_prev + b
//   c = sigmoid(f) * c_prev + sigmoid(i) * tanh(g)
//   h = sigmoid(o) * tanh(c)
template <class S>
struct LstmCellT {
    int input_size = 0;
    int hidden_size = 0;
    ParamBlockT<S> Wx;  // [4H, X]
    ParamBlockT<S> Wh;  // [4H, H]
    ParamBlockT<S> b;   // [4H]

    struct State {
        std::vector<S> h, c;
        void reset(int hidden) {
            h.assign(hidden, S(0));
            c.assign(hidden, S(0));
        }
    };

    struct Cache {
        std::vector<S> x, h_prev, c_prev;
        std::vector<S> i, f, g, o;  // post-activation gates
        std::vector<S> c, tanh_c;
    };

    void create(std::string prefix, int input, int hidden) {
        input_size = input;
        hidden_size = hidden;
        Wx = ParamBlockT<S>::zeros(prefix + ".Wx", {4 * hidden, input});
        Wh = ParamBlockT<S>::zeros(prefix + ".Wh", {4 * hidden, hidden});
        b = ParamBlockT<S>::zeros(prefix + ".b", {4 * hidden});
    }

    void init_params(Rng& rng) {
        Wx.init_uniform(rng, 1.0 / std::sqrt(static_cast<double>(input_size)));
        Wh.init_uniform(rng, 1.0 / std::sqrt(static_cast<double>(hidden_size)));
        b.value.fill(S(0));
        // forget-gate bias starts at 1 so memory is retained early in training
        for (int j = 0; j < hidden_size; ++j) b.value.data[hidden_size + j] = S(1);
    }

    void forward(std::span<const S> x, State& st, Cache* cache) const {
        const int H = hidden_size;
        if (static_cast<int>(x.size()) != input_size ||
            static_cast<int>(st.h.size()) != H)
            throw ShapeError("lstm_forward");
        std::vector<S> z(4 * H);
        for (int r = 0; r < 4 * H; ++r) {
            S acc = b.value.data[r];
            const S* wx = &Wx.value.data[static_cast<size_t>(r) * input_size];
            for (int c = 0; c < input_size; ++c) acc += wx[c] * x[c];
            const S* wh = &Wh.value.data[static_cast<size_t>(r) * H];
            for (int c = 0; c < H; ++c) acc += wh[c] * st.h[c];
            z[r] = acc;
        }
        if (cache) {
            cache->x.assign(x.begin(), x.end());
            cache->h_prev = st.h;
            cache->c_prev = st.c;
            cache->i.resize(H);
            cache->f.resize(H);
            cache->g.resize(H);
            cache->o.resize(H);
            cache->c.resize(H);
            cache->tanh_c.resize(H);
        }
        for (int j = 0; j < H; ++j) {
            const S gi = sigmoid(z[j]);
            const S gf = sigmoid(z[H + j]);
            const S gg = std::tanh(z[2 * H + j]);
            const S go = sigmoid(z[3 * H + j]);
            const S c_new = gf * st.c[j] + gi * gg;
            const S tc = std::tanh(c_new);
            st.c[j] = c_new;
            st.h[j] = go * tc;
            if (cache) {
                cache->i[j] = gi;
                cache->f[j] = gf;
                cache->g[j] = gg;
                cache->o[j] = go;
                cache->c[j] = c_new;
                cache->tanh_c[j] = tc;
            }
        }
    }

    // dh: total gradient on h (local + future); dc_in: gradient flowing into c
    // from the future. Accumulates parameter grads and dx; writes dh_prev and
    // dc_prev for the next (earlier) step.
    void backward(const Cache& cc, std::span<const S> dh, std::span<const S> dc_in,
                  std::span<S> dx, std::span<S> dh_prev, std::span<S> dc_prev) {
        const int H = hidden_size;
        std::vector<S> dz(4 * H);
        for (int j = 0; j < H; ++j) {
            const S tc = cc.tanh_c[j];
            const S d_o = dh[j] * tc;
            const S dc = dc_in[j] + dh[j] * cc.o[j] * (S(1) - tc * tc);
            const S d_i = dc * cc.g[j];
            const S d_f = dc * cc.c_prev[j];
            const S d_g = dc * cc.i[j];
            dz[j] = d_i * cc.i[j] * (S(1) - cc.i[j]);
            dz[H + j] = d_f * cc.f[j] * (S(1) - cc.f[j]);
            dz[2 * H + j] = d_g * (S(1) - cc.g[j] * cc.g[j]);
            dz[3 * H + j] = d_o * cc.o[j] * (S(1) - cc.o[j]);
            dc_prev[j] = dc * cc.f[j];
        }
        for (int r = 0; r < 4 * H; ++r) {
            const S g = dz[r];
            S* dwx = &Wx.grad.data[static_cast<size_t>(r) * input_size];
            for (int c = 0; c < input_size; ++c) dwx[c] += g * cc.x[c];
            S* dwh = &Wh.grad.data[static_cast<size_t>(r) * H];
            for (int c = 0; c < H; ++c) dwh[c] += g * cc.h_prev[c];
            b.grad.data[r] += g;
        }
        std::fill(dh_prev.begin(), dh_prev.end(), S(0));
        for (int r = 0; r < 4 * H; ++r) {
            const S g = dz[r];
            if (!dx.empty()) {
                const S* wx = &Wx.value.data[static_cast<size_t>(r) * input_size];
                for (int c = 0; c < input_size; ++c) dx[c] += wx[c] * g;
            }
            const S* wh = &Wh.value.data[static_cast<size_t>(r) * H];
            for (int c = 0; c < H; ++c) dh_prev[c] += wh[c] * g;
        }
    }
};

using LstmCell = LstmCellT<float>;

// ------------------------------------------------------------------ optimizer

// Standard bias-corrected Adam. Consumes block.grad and zeroes it afterward.
template <class S>
inline void adam_step(ParamBlockT<S>& block, S lr, S beta1 = S(0.9),
                      S beta2 = S(0.999), S eps = S(1e-8)) {
    if (!block.grad.all_finite())
        throw NumericError("non-finite gradient in block " + block.name);
    block.step_count += 1;
    const double t = static_cast<double>(block.step_count);
    const S bc1 = static_cast<S>(1.0 - std::pow(static_cast<double>(beta1), t));
    const S bc2 = static_cast<S>(1.0 - std::pow(static_cast<double>(beta2), t));
    const int n = block.value.numel();
    for (int j = 0; j < n; ++j) {
        const S g = block.grad.data[j];
        S& m = block.adam_m.data[j];
        S& v = block.adam_v.data[j];
        m = beta1 * m + (S(1) - beta1) * g;
        v = beta2 * v + (S(1) - beta2) * g * g;
        const S m_hat = m / bc1;
        const S v_hat = v / bc2;
        block.value.data[j] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
    block.zero_grad();
}

// --------------------------------------------------------------- grad checker

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::string worst_param;
    int params_checked = 0;

    bool pass(double tol) const { return max_rel_err <= tol; }
};

// Central finite differences against analytic gradients already stored in the
// blocks' grad tensors. loss_fn must recompute the checked scalar from the
// blocks' current values.
template <class S>
inline GradCheckResult grad_check(std::span<ParamBlockT<S>* const> blocks,
                                  const std::function<double()>& loss_fn,
                                  double h = 1e-3) {
    GradCheckResult res;
    for (ParamBlockT<S>* blk : blocks) {
        for (int j = 0; j < blk->value.numel(); ++j) {
            const S saved = blk->value.data[j];
            blk->value.data[j] = saved + static_cast<S>(h);
            const double lp = loss_fn();
            blk->value.data[j] = saved - static_cast<S>(h);
            const double lm = loss_fn();
            blk->value.data[j] = saved;
            const double fd = (lp - lm) / (2.0 * h);
            const double an = static_cast<double>(blk->grad.data[j]);
            const double denom = std::max({std::abs(fd), std::abs(an), 1e-6});
            const double rel = std::abs(fd - an) / denom;
            if (rel > res.max_rel_err) {
                res.max_rel_err = rel;
                res.worst_param = blk->name + "[" + std::to_string(j) + "]";
            }
            res.params_checked += 1;
        }
    }
    return res;
}

}  // namespace cfnav::nn
