#pragma once
#include <cstdint>
#include <random>
#include <vector>

namespace imad {

// Two-headed MLP: a shared fully-connected encoder (linear -> batch norm ->
// ReLU -> dropout per layer) feeding a correctness head and a hesitation
// head, fused with the LLM confidence in logit space:
//   l_llm = log(p_llm / (1 - p_llm))
//   p     = sigmoid(w1 * l_llm + w2 * l_p + epsilon)
//   u     = sigmoid(l_u)
struct MlpConfig {
    int input_dim = 41;
    int hidden_width = 200;
    int hidden_layers = 6;
    double dropout_rate = 0.2;
    double bn_momentum = 0.1;
    double bn_epsilon = 1e-5;

    bool operator==(const MlpConfig&) const = default;
};

class Mlp {
public:
    // Fan-in-scaled uniform init for weights; w1=1, w2=0, epsilon=0 so the
    // untrained network starts at the fusion identity p = p_llm.
    Mlp(MlpConfig cfg, std::uint64_t seed);

    const MlpConfig& config() const { return cfg_; }

    // Flat trainable parameters: per layer W, b, bn_gamma, bn_beta; then
    // head_p (w, b), head_u (w, b); then w1, w2, epsilon.
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    // Batch-norm running mean/var buffers, frozen at inference.
    std::vector<double>& running_stats() { return running_; }
    const std::vector<double>& running_stats() const { return running_; }

    double w1() const { return params_[fusion_off_]; }
    double w2() const { return params_[fusion_off_ + 1]; }
    double epsilon() const { return params_[fusion_off_ + 2]; }
    void set_fusion(double w1, double w2, double epsilon);

    struct ForwardResult {
        int n = 0;
        std::vector<double> l_llm, l_p, l_u, p, u;
    };

    // Training pass over a batch: batch statistics and dropout active
    // (rng required when dropout_rate > 0), running stats updated, and
    // backward caches retained. x is row-major n x input_dim of
    // standardized features; p_llm holds n clamped probabilities.
    ForwardResult train_forward(const double* x, int n, const double* p_llm,
                                std::mt19937_64* dropout_rng);

    // Deterministic inference pass: stored statistics, no dropout, no
    // mutation. Safe to call concurrently.
    ForwardResult infer(const double* x, int n, const double* p_llm) const;

    // Gradients of the batch loss wrt all params, given dLoss/dp and
    // dLoss/du for the last train_forward batch. Same layout as params().
    std::vector<double> backward(const std::vector<double>& d_p, const std::vector<double>& d_u);

    int param_count() const { return static_cast<int>(params_.size()); }

private:
    struct LayerOffsets {
        int w = 0, b = 0, gamma = 0, beta = 0;
        int in = 0, out = 0;
        int run_mean = 0, run_var = 0;
    };
    struct LayerCache {
        std::vector<double> input;          // n x in
        std::vector<double> xhat;           // n x out
        std::vector<double> mean, var;      // out (batch statistics)
        std::vector<double> inv_std;        // out
        std::vector<double> relu_mask;      // n x out (0/1)
        std::vector<double> drop_mask;      // n x out (0 or 1/keep)
    };

    ForwardResult run(const double* x, int n, const double* p_llm, bool train_mode,
                      std::mt19937_64* dropout_rng, std::vector<LayerCache>* caches,
                      std::vector<double>* hidden_out) const;

    MlpConfig cfg_;
    std::vector<LayerOffsets> layers_;
    int head_p_off_ = 0;  // w (width) + b
    int head_u_off_ = 0;
    int fusion_off_ = 0;  // w1, w2, epsilon
    std::vector<double> params_;
    std::vector<double> running_;

    // caches from the last train_forward
    std::vector<LayerCache> cache_;
    std::vector<double> cache_hidden_;  // final representation, n x width
    ForwardResult cache_fwd_;
    bool cache_valid_ = false;
};

double sigmoid(double x);
double logit(double p);

}  // namespace imad
