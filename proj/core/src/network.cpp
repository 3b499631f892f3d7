#include "imad/network.hpp"

#include <cmath>

#include "imad/errors.hpp"

namespace imad {
namespace {

// y[n x out] = x[n x in] * W[out x in]^T + b[out]
void linear_forward(const double* x, int n, int in, int out, const double* w, const double* b,
                    double* y) {
    for (int r = 0; r < n; ++r) {
        const double* xr = x + static_cast<std::size_t>(r) * in;
        double* yr = y + static_cast<std::size_t>(r) * out;
        for (int o = 0; o < out; ++o) {
            const double* wo = w + static_cast<std::size_t>(o) * in;
            double acc = b[o];
            for (int i = 0; i < in; ++i) acc += wo[i] * xr[i];
            yr[o] = acc;
        }
    }
}

}  // namespace

double sigmoid(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double logit(double p) {
    return std::log(p / (1.0 - p));
}

Mlp::Mlp(MlpConfig cfg, std::uint64_t seed) : cfg_(cfg) {
    if (cfg_.hidden_layers < 1 || cfg_.hidden_width < 1 || cfg_.input_dim < 1)
        throw DomainError("invalid network configuration");

    int off = 0, run_off = 0;
    for (int l = 0; l < cfg_.hidden_layers; ++l) {
        LayerOffsets lo;
        lo.in = l == 0 ? cfg_.input_dim : cfg_.hidden_width;
        lo.out = cfg_.hidden_width;
        lo.w = off; off += lo.in * lo.out;
        lo.b = off; off += lo.out;
        lo.gamma = off; off += lo.out;
        lo.beta = off; off += lo.out;
        lo.run_mean = run_off; run_off += lo.out;
        lo.run_var = run_off; run_off += lo.out;
        layers_.push_back(lo);
    }
    head_p_off_ = off; off += cfg_.hidden_width + 1;
    head_u_off_ = off; off += cfg_.hidden_width + 1;
    fusion_off_ = off; off += 3;

    params_.assign(off, 0.0);
    running_.assign(run_off, 0.0);

    std::mt19937_64 rng(seed);
    auto uniform_fan_in = [&](int fan_in, double* dst, int count) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (int i = 0; i < count; ++i) dst[i] = dist(rng);
    };

    for (const auto& lo : layers_) {
        uniform_fan_in(lo.in, params_.data() + lo.w, lo.in * lo.out);
        uniform_fan_in(lo.in, params_.data() + lo.b, lo.out);
        for (int j = 0; j < lo.out; ++j) {
            params_[lo.gamma + j] = 1.0;
            params_[lo.beta + j] = 0.0;
            running_[lo.run_mean + j] = 0.0;
            running_[lo.run_var + j] = 1.0;
        }
    }
    uniform_fan_in(cfg_.hidden_width, params_.data() + head_p_off_, cfg_.hidden_width + 1);
    uniform_fan_in(cfg_.hidden_width, params_.data() + head_u_off_, cfg_.hidden_width + 1);
    set_fusion(1.0, 0.0, 0.0);
}

void Mlp::set_fusion(double w1, double w2, double epsilon) {
    params_[fusion_off_] = w1;
    params_[fusion_off_ + 1] = w2;
    params_[fusion_off_ + 2] = epsilon;
}

Mlp::ForwardResult Mlp::run(const double* x, int n, const double* p_llm, bool train_mode,
                            std::mt19937_64* dropout_rng, std::vector<LayerCache>* caches,
                            std::vector<double>* hidden_out) const {
    if (n < 1) throw DomainError("forward: empty batch");
    if (train_mode && cfg_.dropout_rate > 0.0 && dropout_rng == nullptr)
        throw DomainError("forward: dropout requires an rng in train mode");

    std::vector<double> cur(x, x + static_cast<std::size_t>(n) * cfg_.input_dim);
    std::vector<double> z;

    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& lo = layers_[l];
        z.assign(static_cast<std::size_t>(n) * lo.out, 0.0);
        linear_forward(cur.data(), n, lo.in, lo.out, params_.data() + lo.w, params_.data() + lo.b,
                       z.data());

        LayerCache* cache = caches ? &(*caches)[l] : nullptr;
        if (cache) cache->input = cur;

        std::vector<double> mean(lo.out, 0.0), var(lo.out, 0.0), inv_std(lo.out, 0.0);
        if (train_mode) {
            // batch statistics, biased variance
            for (int j = 0; j < lo.out; ++j) {
                double m = 0.0;
                for (int r = 0; r < n; ++r) m += z[static_cast<std::size_t>(r) * lo.out + j];
                m /= n;
                double v = 0.0;
                for (int r = 0; r < n; ++r) {
                    const double d = z[static_cast<std::size_t>(r) * lo.out + j] - m;
                    v += d * d;
                }
                v /= n;
                mean[j] = m;
                var[j] = v;
                inv_std[j] = 1.0 / std::sqrt(v + cfg_.bn_epsilon);
            }
        } else {
            for (int j = 0; j < lo.out; ++j) {
                mean[j] = running_[lo.run_mean + j];
                inv_std[j] = 1.0 / std::sqrt(running_[lo.run_var + j] + cfg_.bn_epsilon);
            }
        }

        if (cache) {
            cache->mean = mean;
            cache->var = var;
            cache->inv_std = inv_std;
            cache->xhat.resize(z.size());
            cache->relu_mask.resize(z.size());
            cache->drop_mask.assign(z.size(), 1.0);
        }

        const double keep = 1.0 - cfg_.dropout_rate;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        cur.assign(z.size(), 0.0);
        for (int r = 0; r < n; ++r) {
            for (int j = 0; j < lo.out; ++j) {
                const std::size_t idx = static_cast<std::size_t>(r) * lo.out + j;
                const double xhat = (z[idx] - mean[j]) * inv_std[j];
                double a = params_[lo.gamma + j] * xhat + params_[lo.beta + j];
                const double relu_mask = a > 0.0 ? 1.0 : 0.0;
                a *= relu_mask;
                double drop_mask = 1.0;
                if (train_mode && cfg_.dropout_rate > 0.0) {
                    drop_mask = unit(*dropout_rng) < cfg_.dropout_rate ? 0.0 : 1.0 / keep;
                    a *= drop_mask;
                }
                if (cache) {
                    cache->xhat[idx] = xhat;
                    cache->relu_mask[idx] = relu_mask;
                    cache->drop_mask[idx] = drop_mask;
                }
                cur[idx] = a;
            }
        }
    }

    const int width = cfg_.hidden_width;
    ForwardResult out;
    out.n = n;
    out.l_llm.resize(n);
    out.l_p.resize(n);
    out.l_u.resize(n);
    out.p.resize(n);
    out.u.resize(n);

    const double* wp = params_.data() + head_p_off_;
    const double bp = params_[head_p_off_ + width];
    const double* wu = params_.data() + head_u_off_;
    const double bu = params_[head_u_off_ + width];
    const double w1v = w1(), w2v = w2(), epsv = epsilon();

    for (int r = 0; r < n; ++r) {
        const double* h = cur.data() + static_cast<std::size_t>(r) * width;
        double lp = bp, lu = bu;
        for (int j = 0; j < width; ++j) {
            lp += wp[j] * h[j];
            lu += wu[j] * h[j];
        }
        const double lllm = logit(p_llm[r]);
        out.l_llm[r] = lllm;
        out.l_p[r] = lp;
        out.l_u[r] = lu;
        out.p[r] = sigmoid(w1v * lllm + w2v * lp + epsv);
        out.u[r] = sigmoid(lu);
    }

    if (hidden_out) *hidden_out = std::move(cur);
    return out;
}

Mlp::ForwardResult Mlp::train_forward(const double* x, int n, const double* p_llm,
                                      std::mt19937_64* dropout_rng) {
    cache_.assign(layers_.size(), {});
    cache_fwd_ = run(x, n, p_llm, /*train_mode=*/true, dropout_rng, &cache_, &cache_hidden_);
    cache_valid_ = true;

    // Momentum update of the running statistics from the batch statistics.
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& lo = layers_[l];
        for (int j = 0; j < lo.out; ++j) {
            running_[lo.run_mean + j] = (1.0 - cfg_.bn_momentum) * running_[lo.run_mean + j] +
                                        cfg_.bn_momentum * cache_[l].mean[j];
            running_[lo.run_var + j] = (1.0 - cfg_.bn_momentum) * running_[lo.run_var + j] +
                                       cfg_.bn_momentum * cache_[l].var[j];
        }
    }
    return cache_fwd_;
}

Mlp::ForwardResult Mlp::infer(const double* x, int n, const double* p_llm) const {
    return run(x, n, p_llm, /*train_mode=*/false, nullptr, nullptr, nullptr);
}

std::vector<double> Mlp::backward(const std::vector<double>& d_p, const std::vector<double>& d_u) {
    if (!cache_valid_) throw DomainError("backward: no cached train-mode forward");
    const int n = cache_fwd_.n;
    if (static_cast<int>(d_p.size()) != n || static_cast<int>(d_u.size()) != n)
        throw DomainError("backward: gradient length mismatch");

    std::vector<double> grads(params_.size(), 0.0);
    const int width = cfg_.hidden_width;

    // Fusion and heads.
    std::vector<double> d_lp(n), d_lu(n);
    double g_w1 = 0.0, g_w2 = 0.0, g_eps = 0.0;
    for (int r = 0; r < n; ++r) {
        const double p = cache_fwd_.p[r];
        const double ds = d_p[r] * p * (1.0 - p);
        g_w1 += ds * cache_fwd_.l_llm[r];
        g_w2 += ds * cache_fwd_.l_p[r];
        g_eps += ds;
        d_lp[r] = ds * w2();
        const double u = cache_fwd_.u[r];
        d_lu[r] = d_u[r] * u * (1.0 - u);
    }
    grads[fusion_off_] = g_w1;
    grads[fusion_off_ + 1] = g_w2;
    grads[fusion_off_ + 2] = g_eps;

    std::vector<double> d_hidden(static_cast<std::size_t>(n) * width, 0.0);
    const double* wp = params_.data() + head_p_off_;
    const double* wu = params_.data() + head_u_off_;
    for (int r = 0; r < n; ++r) {
        const double* h = cache_hidden_.data() + static_cast<std::size_t>(r) * width;
        double* dh = d_hidden.data() + static_cast<std::size_t>(r) * width;
        for (int j = 0; j < width; ++j) {
            grads[head_p_off_ + j] += d_lp[r] * h[j];
            grads[head_u_off_ + j] += d_lu[r] * h[j];
            dh[j] = d_lp[r] * wp[j] + d_lu[r] * wu[j];
        }
        grads[head_p_off_ + width] += d_lp[r];
        grads[head_u_off_ + width] += d_lu[r];
    }

    // Encoder layers, reversed.
    std::vector<double> d_out = std::move(d_hidden);
    for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
        const auto& lo = layers_[l];
        const auto& cache = cache_[l];

        // Dropout and ReLU.
        std::vector<double> d_act(d_out.size());
        for (std::size_t idx = 0; idx < d_out.size(); ++idx)
            d_act[idx] = d_out[idx] * cache.drop_mask[idx] * cache.relu_mask[idx];

        // Batch norm.
        std::vector<double> sum_dxhat(lo.out, 0.0), sum_dxhat_xhat(lo.out, 0.0);
        for (int r = 0; r < n; ++r) {
            for (int j = 0; j < lo.out; ++j) {
                const std::size_t idx = static_cast<std::size_t>(r) * lo.out + j;
                const double dxhat = d_act[idx] * params_[lo.gamma + j];
                sum_dxhat[j] += dxhat;
                sum_dxhat_xhat[j] += dxhat * cache.xhat[idx];
                grads[lo.gamma + j] += d_act[idx] * cache.xhat[idx];
                grads[lo.beta + j] += d_act[idx];
            }
        }

        std::vector<double> d_z(d_out.size());
        const double inv_n = 1.0 / static_cast<double>(n);
        for (int r = 0; r < n; ++r) {
            for (int j = 0; j < lo.out; ++j) {
                const std::size_t idx = static_cast<std::size_t>(r) * lo.out + j;
                const double dxhat = d_act[idx] * params_[lo.gamma + j];
                d_z[idx] = cache.inv_std[j] *
                           (dxhat - inv_n * sum_dxhat[j] - inv_n * cache.xhat[idx] * sum_dxhat_xhat[j]);
            }
        }

        // Linear.
        std::vector<double> d_in(static_cast<std::size_t>(n) * lo.in, 0.0);
        for (int r = 0; r < n; ++r) {
            const double* xr = cache.input.data() + static_cast<std::size_t>(r) * lo.in;
            const double* dzr = d_z.data() + static_cast<std::size_t>(r) * lo.out;
            double* dir = d_in.data() + static_cast<std::size_t>(r) * lo.in;
            for (int o = 0; o < lo.out; ++o) {
                const double dz = dzr[o];
                if (dz == 0.0) continue;
                double* gw = grads.data() + lo.w + static_cast<std::size_t>(o) * lo.in;
                const double* wo = params_.data() + lo.w + static_cast<std::size_t>(o) * lo.in;
                for (int i = 0; i < lo.in; ++i) {
                    gw[i] += dz * xr[i];
                    dir[i] += dz * wo[i];
                }
                grads[lo.b + o] += dz;
            }
        }
        d_out = std::move(d_in);
    }
    return grads;
}

}  // namespace imad
