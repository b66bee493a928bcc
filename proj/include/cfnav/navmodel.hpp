#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "cfnav/gridworld.hpp"
#include "cfnav/nn.hpp"

namespace cfnav {

// Desk-scale architecture. The paper-scale backbone zoo is replaced by one
// generic encoder + LSTM policy; the collision module mirrors the two-LSTM
// design with a sigmoid head.
struct ModelDims {
    int image_dim = 0;
    int goal_dim = 0;
    int encoder_dim = 48;
    int policy_hidden = 64;
    int collision_hidden = 32;
    bool has_collision = true;
    bool shared_encoder = false;  // collision consumes the policy encoder output

    int collision_input_dim() const {
        return (shared_encoder ? encoder_dim : image_dim) + kNumActions;
    }
    int policy_lstm_input_dim() const { return encoder_dim + goal_dim + 1; }
};

// ------------------------------------------------------------------ policy net

// pi(a | image, goal, p_hat) and V share the encoder + LSTM trunk (theta);
// the critic head is the separately-updated theta_v block set.
template <class S>
struct PolicyNetT {
    int image_dim = 0, goal_dim = 0, enc_dim = 0, hidden = 0;
    nn::ParamBlockT<S> enc_W, enc_b;
    nn::LstmCellT<S> lstm;
    nn::ParamBlockT<S> actor_W, actor_b;
    nn::ParamBlockT<S> critic_W, critic_b;

    using State = typename nn::LstmCellT<S>::State;

    struct StepCache {
        std::vector<S> image;
        std::vector<S> enc_out;
        std::vector<S> lstm_in;
        typename nn::LstmCellT<S>::Cache lstm;
        std::vector<S> logits, probs, log_probs;
        S value = 0;
    };

    void create(const ModelDims& d) {
        image_dim = d.image_dim;
        goal_dim = d.goal_dim;
        enc_dim = d.encoder_dim;
        hidden = d.policy_hidden;
        enc_W = nn::ParamBlockT<S>::zeros("policy.encoder.W", {enc_dim, image_dim});
        enc_b = nn::ParamBlockT<S>::zeros("policy.encoder.b", {enc_dim});
        lstm.create("policy.lstm", d.policy_lstm_input_dim(), hidden);
        actor_W = nn::ParamBlockT<S>::zeros("policy.actor.W", {kNumActions, hidden});
        actor_b = nn::ParamBlockT<S>::zeros("policy.actor.b", {kNumActions});
        critic_W = nn::ParamBlockT<S>::zeros("critic.head.W", {1, hidden});
        critic_b = nn::ParamBlockT<S>::zeros("critic.head.b", {1});
    }

    void encode(std::span<const S> image, StepCache& cache) const {
        cache.image.assign(image.begin(), image.end());
        cache.enc_out.resize(enc_dim);
        nn::dense_forward(enc_W.value, enc_b.value, image, std::span<S>(cache.enc_out));
        for (S& v : cache.enc_out) v = std::tanh(v);
    }

    // Requires encode() to have filled the cache for this step.
    void core(std::span<const S> goal, S p_hat_input, State& st, StepCache& cache) const {
        cache.lstm_in.clear();
        cache.lstm_in.insert(cache.lstm_in.end(), cache.enc_out.begin(), cache.enc_out.end());
        cache.lstm_in.insert(cache.lstm_in.end(), goal.begin(), goal.end());
        cache.lstm_in.push_back(p_hat_input);
        lstm.forward(std::span<const S>(cache.lstm_in), st, &cache.lstm);
        cache.logits.resize(kNumActions);
        nn::dense_forward(actor_W.value, actor_b.value, std::span<const S>(st.h),
                          std::span<S>(cache.logits));
        S value_out[1];
        nn::dense_forward(critic_W.value, critic_b.value, std::span<const S>(st.h),
                          std::span<S>(value_out, 1));
        cache.value = value_out[0];
        // log-softmax + probs, kept for the backward pass
        cache.log_probs.resize(kNumActions);
        cache.probs.resize(kNumActions);
        S m = cache.logits[0];
        for (S v : cache.logits) m = std::max(m, v);
        S sum = 0;
        for (int k = 0; k < kNumActions; ++k) sum += std::exp(cache.logits[k] - m);
        const S lse = m + std::log(sum);
        for (int k = 0; k < kNumActions; ++k) {
            cache.log_probs[k] = cache.logits[k] - lse;
            cache.probs[k] = std::exp(cache.log_probs[k]);
        }
    }

    void forward(std::span<const S> image, std::span<const S> goal, S p_hat_input,
                 State& st, StepCache& cache) const {
        encode(image, cache);
        core(goal, p_hat_input, st, cache);
    }

    // LSTM output of the cached step.
    static std::vector<S> cached_h(const StepCache& cache) {
        std::vector<S> h(cache.lstm.o.size());
        for (size_t j = 0; j < h.size(); ++j) h[j] = cache.lstm.o[j] * cache.lstm.tanh_c[j];
        return h;
    }

    // Accumulates parameter gradients; d_enc_extra carries gradient arriving at
    // the encoder output from elsewhere (shared-encoder collision path).
    void backward(const StepCache& cache, std::span<const S> dlogits, S dvalue,
                  std::span<const S> dh_future, std::span<const S> dc_future,
                  std::span<const S> d_enc_extra,
                  std::span<S> dh_prev, std::span<S> dc_prev) {
        const std::vector<S> h = cached_h(cache);
        std::vector<S> dh(dh_future.begin(), dh_future.end());
        nn::dense_backward(actor_W.value, std::span<const S>(h), dlogits, actor_W.grad,
                           actor_b.grad, std::span<S>(dh));
        const S dv[1] = {dvalue};
        nn::dense_backward(critic_W.value, std::span<const S>(h),
                           std::span<const S>(dv, 1), critic_W.grad, critic_b.grad,
                           std::span<S>(dh));
        std::vector<S> d_lstm_in(cache.lstm_in.size(), S(0));
        lstm.backward(cache.lstm, std::span<const S>(dh), dc_future,
                      std::span<S>(d_lstm_in), dh_prev, dc_prev);
        std::vector<S> dz_enc(enc_dim);
        for (int j = 0; j < enc_dim; ++j) {
            S d = d_lstm_in[j];
            if (!d_enc_extra.empty()) d += d_enc_extra[j];
            dz_enc[j] = d * (S(1) - cache.enc_out[j] * cache.enc_out[j]);
        }
        nn::dense_backward(enc_W.value, std::span<const S>(cache.image),
                           std::span<const S>(dz_enc), enc_W.grad, enc_b.grad,
                           std::span<S>());
    }
};

// --------------------------------------------------------------- collision net

// p_hat = P(features, last action) through two LSTM layers and a sigmoid head.
template <class S>
struct CollisionNetT {
    int input_dim = 0, hidden = 0;
    nn::LstmCellT<S> lstm1, lstm2;
    nn::ParamBlockT<S> head_W, head_b;

    struct State {
        typename nn::LstmCellT<S>::State s1, s2;
        void reset(int hidden) {
            s1.reset(hidden);
            s2.reset(hidden);
        }
    };

    struct StepCache {
        typename nn::LstmCellT<S>::Cache l1, l2;
        S z = 0, p = 0;
    };

    void create(const ModelDims& d) {
        input_dim = d.collision_input_dim();
        hidden = d.collision_hidden;
        lstm1.create("collision.lstm1", input_dim, hidden);
        lstm2.create("collision.lstm2", hidden, hidden);
        head_W = nn::ParamBlockT<S>::zeros("collision.head.W", {1, hidden});
        head_b = nn::ParamBlockT<S>::zeros("collision.head.b", {1});
    }

    S forward(std::span<const S> input, State& st, StepCache& cache) const {
        lstm1.forward(input, st.s1, &cache.l1);
        lstm2.forward(std::span<const S>(st.s1.h), st.s2, &cache.l2);
        S z[1];
        nn::dense_forward(head_W.value, head_b.value, std::span<const S>(st.s2.h),
                          std::span<S>(z, 1));
        cache.z = z[0];
        cache.p = nn::sigmoid(z[0]);
        return cache.p;
    }

    // dz: gradient on the pre-sigmoid head output (sigma(z) - p_t for BCE steps,
    // 0 otherwise). d_input, when non-empty, receives the input gradient for
    // the shared-encoder path.
    void backward(const StepCache& cache, S dz,
                  std::span<const S> dh1_f, std::span<const S> dc1_f,
                  std::span<const S> dh2_f, std::span<const S> dc2_f,
                  std::span<S> d_input,
                  std::span<S> dh1_prev, std::span<S> dc1_prev,
                  std::span<S> dh2_prev, std::span<S> dc2_prev) {
        std::vector<S> h2(cache.l2.o.size());
        for (size_t j = 0; j < h2.size(); ++j) h2[j] = cache.l2.o[j] * cache.l2.tanh_c[j];
        std::vector<S> dh2(dh2_f.begin(), dh2_f.end());
        const S dzv[1] = {dz};
        nn::dense_backward(head_W.value, std::span<const S>(h2), std::span<const S>(dzv, 1),
                           head_W.grad, head_b.grad, std::span<S>(dh2));
        std::vector<S> dh1(dh1_f.begin(), dh1_f.end());
        lstm2.backward(cache.l2, std::span<const S>(dh2), dc2_f, std::span<S>(dh1),
                       dh2_prev, dc2_prev);
        lstm1.backward(cache.l1, std::span<const S>(dh1), dc1_f, d_input, dh1_prev,
                       dc1_prev);
    }
};

// ----------------------------------------------------------------- nav model

template <class S>
struct NavModelT {
    ModelDims dims;
    PolicyNetT<S> policy;
    CollisionNetT<S> collision;

    static NavModelT create(const ModelDims& dims) {
        NavModelT m;
        m.dims = dims;
        m.policy.create(dims);
        if (dims.has_collision) m.collision.create(dims);
        return m;
    }

    void init_params(Rng rng) {
        auto scaled = [&rng](nn::ParamBlockT<S>& b, int fan_in) {
            b.init_uniform(rng, 1.0 / std::sqrt(static_cast<double>(fan_in)));
        };
        scaled(policy.enc_W, policy.image_dim);
        policy.enc_b.value.fill(S(0));
        policy.lstm.init_params(rng);
        scaled(policy.actor_W, policy.hidden);
        policy.actor_b.value.fill(S(0));
        scaled(policy.critic_W, policy.hidden);
        policy.critic_b.value.fill(S(0));
        if (dims.has_collision) {
            collision.lstm1.init_params(rng);
            collision.lstm2.init_params(rng);
            scaled(collision.head_W, collision.hidden);
            collision.head_b.value.fill(S(0));
        }
    }

    // theta: encoder + LSTM trunk + actor head
    std::vector<nn::ParamBlockT<S>*> policy_blocks() {
        return {&policy.enc_W, &policy.enc_b, &policy.lstm.Wx, &policy.lstm.Wh,
                &policy.lstm.b, &policy.actor_W, &policy.actor_b};
    }
    // theta_v
    std::vector<nn::ParamBlockT<S>*> critic_blocks() {
        return {&policy.critic_W, &policy.critic_b};
    }
    // phi
    std::vector<nn::ParamBlockT<S>*> collision_blocks() {
        if (!dims.has_collision) return {};
        return {&collision.lstm1.Wx, &collision.lstm1.Wh, &collision.lstm1.b,
                &collision.lstm2.Wx, &collision.lstm2.Wh, &collision.lstm2.b,
                &collision.head_W, &collision.head_b};
    }
    std::vector<nn::ParamBlockT<S>*> all_blocks() {
        auto out = policy_blocks();
        for (auto* b : critic_blocks()) out.push_back(b);
        for (auto* b : collision_blocks()) out.push_back(b);
        return out;
    }

    void zero_grads() {
        for (auto* b : all_blocks()) b->zero_grad();
    }

    template <class S2>
    void copy_values_from(NavModelT<S2>& other) {
        auto src = other.all_blocks();
        auto dst = all_blocks();
        for (size_t i = 0; i < dst.size(); ++i)
            for (int j = 0; j < dst[i]->value.numel(); ++j)
                dst[i]->value.data[j] = static_cast<S>(src[i]->value.data[j]);
    }
};

using NavModel = NavModelT<float>;

template <class S>
struct AgentStateT {
    typename PolicyNetT<S>::State policy;
    typename CollisionNetT<S>::State collision;

    void reset(const ModelDims& dims) {
        policy.reset(dims.policy_hidden);
        collision.reset(dims.collision_hidden);
    }
};

using AgentState = AgentStateT<float>;

// -------------------------------------------------------------------- actions

template <class S>
Action sample_action(std::span<const S> logits, Rng& rng) {
    std::vector<S> probs(logits.size());
    nn::softmax(logits, std::span<S>(probs));
    const double u = rng.uniform();
    double acc = 0.0;
    for (size_t k = 0; k < probs.size(); ++k) {
        acc += static_cast<double>(probs[k]);
        if (u < acc) return static_cast<Action>(k);
    }
    return static_cast<Action>(probs.size() - 1);
}

template <class S>
Action greedy_action(std::span<const S> logits) {
    size_t best = 0;
    for (size_t k = 1; k < logits.size(); ++k)
        if (logits[k] > logits[best]) best = k;
    return static_cast<Action>(best);
}

// ----------------------------------------------------------- segment backprop

// One acted step, with the constants the A3C surrogate loss needs. advantage
// and return_target are treated as constants; the gated p_hat_input is the
// exact scalar the policy consumed when acting (detached from phi).
template <class S>
struct SegmentStepInput {
    std::vector<S> image;
    std::vector<S> goal;
    std::array<S, kNumActions> last_action{};
    S p_hat_input = 0;
    int action = 0;
    S advantage = 0;
    S return_target = 0;
    bool cp_supervised = false;
    S collision_label = 0;
};

template <class S>
struct SegmentStats {
    S policy_loss = 0;   // sum of -log pi(a_i) * delta_i
    S value_loss = 0;    // sum of (R_i - V_i)^2
    S entropy = 0;       // sum of H(pi_i)
    S cp_loss = 0;       // sum of BCE over supervised steps
    int cp_steps = 0;
    bool finite = true;

    double total_loss(double entropy_beta) const {
        return static_cast<double>(policy_loss) - entropy_beta * static_cast<double>(entropy) +
               static_cast<double>(value_loss) + static_cast<double>(cp_loss);
    }
};

namespace detail {

template <class S>
void build_collision_input(const NavModelT<S>& model,
                           const typename PolicyNetT<S>::StepCache& pol_cache,
                           const SegmentStepInput<S>& step, std::vector<S>& out) {
    out.clear();
    if (model.dims.shared_encoder)
        out.insert(out.end(), pol_cache.enc_out.begin(), pol_cache.enc_out.end());
    else
        out.insert(out.end(), step.image.begin(), step.image.end());
    out.insert(out.end(), step.last_action.begin(), step.last_action.end());
}

}  // namespace detail

template <class S>
struct SegmentForward {
    std::vector<typename PolicyNetT<S>::StepCache> pol;
    std::vector<typename CollisionNetT<S>::StepCache> col;
    SegmentStats<S> stats;
};

// Replays the segment with the current parameters, reproducing the acting
// forward pass bit for bit, and evaluates the surrogate loss terms.
template <class S>
SegmentForward<S> segment_forward(const NavModelT<S>& model,
                                  typename PolicyNetT<S>::State pol_state,
                                  typename CollisionNetT<S>::State col_state,
                                  std::span<const SegmentStepInput<S>> steps) {
    SegmentForward<S> fwd;
    const size_t n = steps.size();
    fwd.pol.resize(n);
    if (model.dims.has_collision) fwd.col.resize(n);
    std::vector<S> col_in;
    for (size_t i = 0; i < n; ++i) {
        const auto& st = steps[i];
        auto& pc = fwd.pol[i];
        model.policy.encode(std::span<const S>(st.image), pc);
        if (model.dims.has_collision) {
            detail::build_collision_input(model, pc, st, col_in);
            model.collision.forward(std::span<const S>(col_in), col_state, fwd.col[i]);
        }
        model.policy.core(std::span<const S>(st.goal), st.p_hat_input, pol_state, pc);

        fwd.stats.policy_loss += -pc.log_probs[st.action] * st.advantage;
        S h = 0;
        for (int k = 0; k < kNumActions; ++k) h -= pc.probs[k] * pc.log_probs[k];
        fwd.stats.entropy += h;
        const S dv = st.return_target - pc.value;
        fwd.stats.value_loss += dv * dv;
        if (st.cp_supervised) {
            fwd.stats.cp_loss += nn::bce(st.collision_label, fwd.col[i].p);
            fwd.stats.cp_steps += 1;
        }
    }
    const double t = fwd.stats.total_loss(1.0) + static_cast<double>(fwd.stats.entropy);
    fwd.stats.finite = std::isfinite(t);
    return fwd;
}

// Loss-only evaluation, used by finite-difference checks.
template <class S>
double segment_loss(const NavModelT<S>& model,
                    const typename PolicyNetT<S>::State& pol_state,
                    const typename CollisionNetT<S>::State& col_state,
                    std::span<const SegmentStepInput<S>> steps, double entropy_beta) {
    return segment_forward(model, pol_state, col_state, steps).stats.total_loss(entropy_beta);
}

// Accumulates the gradients of the A3C surrogate into the model's blocks:
//   d theta   <- sum_i [ grad(-log pi(a_i) delta_i) - beta grad H_i ] (+ value
//                loss flowing through the shared trunk)
//   d theta_v <- sum_i grad (R_i - V_i)^2
//   d phi     <- sum over supervised steps of grad BCE
// Truncated BPTT over the segment: state gradients stop at the segment start.
template <class S>
SegmentStats<S> backprop_segment(NavModelT<S>& model,
                                 const typename PolicyNetT<S>::State& pol_state0,
                                 const typename CollisionNetT<S>::State& col_state0,
                                 std::span<const SegmentStepInput<S>> steps,
                                 double entropy_beta) {
    SegmentForward<S> fwd = segment_forward(model, pol_state0, col_state0, steps);
    if (!fwd.stats.finite || steps.empty()) return fwd.stats;

    const int H = model.dims.policy_hidden;
    const int CH = model.dims.collision_hidden;
    const bool has_col = model.dims.has_collision;
    const S beta = static_cast<S>(entropy_beta);

    std::vector<S> dh(H, S(0)), dc(H, S(0));
    std::vector<S> dh1(CH, S(0)), dc1(CH, S(0)), dh2(CH, S(0)), dc2(CH, S(0));
    std::vector<S> dh_prev(H), dc_prev(H);
    std::vector<S> dh1_prev(CH), dc1_prev(CH), dh2_prev(CH), dc2_prev(CH);
    std::vector<S> dlogits(kNumActions);
    std::vector<S> d_col_in, d_enc_extra;

    for (size_t ri = steps.size(); ri-- > 0;) {
        const auto& st = steps[ri];
        const auto& pc = fwd.pol[ri];

        d_enc_extra.clear();
        if (has_col) {
            const S dz = st.cp_supervised ? fwd.col[ri].p - st.collision_label : S(0);
            d_col_in.assign(model.collision.input_dim, S(0));
            model.collision.backward(fwd.col[ri], dz,
                                     std::span<const S>(dh1), std::span<const S>(dc1),
                                     std::span<const S>(dh2), std::span<const S>(dc2),
                                     std::span<S>(d_col_in),
                                     std::span<S>(dh1_prev), std::span<S>(dc1_prev),
                                     std::span<S>(dh2_prev), std::span<S>(dc2_prev));
            dh1.swap(dh1_prev);
            dc1.swap(dc1_prev);
            dh2.swap(dh2_prev);
            dc2.swap(dc2_prev);
            if (model.dims.shared_encoder)
                d_enc_extra.assign(d_col_in.begin(),
                                   d_col_in.begin() + model.dims.encoder_dim);
        }

        // d/dlogits of [-log pi(a) * delta - beta * H]
        S h_ent = 0;
        for (int k = 0; k < kNumActions; ++k) h_ent -= pc.probs[k] * pc.log_probs[k];
        for (int k = 0; k < kNumActions; ++k) {
            const S onehot = k == st.action ? S(1) : S(0);
            dlogits[k] = st.advantage * (pc.probs[k] - onehot) +
                         beta * pc.probs[k] * (pc.log_probs[k] + h_ent);
        }
        const S dvalue = S(2) * (pc.value - st.return_target);

        model.policy.backward(pc, std::span<const S>(dlogits), dvalue,
                              std::span<const S>(dh), std::span<const S>(dc),
                              std::span<const S>(d_enc_extra),
                              std::span<S>(dh_prev), std::span<S>(dc_prev));
        dh.swap(dh_prev);
        dc.swap(dc_prev);
    }
    return fwd.stats;
}

}  // namespace cfnav
