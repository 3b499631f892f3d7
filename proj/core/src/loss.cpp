#include "imad/loss.hpp"

#include <algorithm>
#include <cmath>

#include "imad/errors.hpp"

namespace imad {
namespace {

constexpr double kProbEps = 1e-7;  // log/pow computed after clamping to [eps, 1-eps]

double clamp_prob(double p) {
    return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

void check_batch(const BatchScores& batch) {
    if (batch.p.empty()) throw EmptyBatch();
    if (batch.p.size() != batch.u.size() || batch.p.size() != batch.y.size())
        throw DomainError("batch component lengths differ");
    for (std::size_t i = 0; i < batch.p.size(); ++i) {
        if (!(batch.p[i] > 0.0 && batch.p[i] < 1.0))
            throw DomainError("p out of (0,1) at index " + std::to_string(i));
        if (!(batch.u[i] > 0.0 && batch.u[i] < 1.0))
            throw DomainError("u out of (0,1) at index " + std::to_string(i));
        if (batch.y[i] != 0 && batch.y[i] != 1)
            throw DomainError("y not binary at index " + std::to_string(i));
    }
}

double sign(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
}

}  // namespace

const char* to_string(CalibrationTerm term) {
    switch (term) {
        case CalibrationTerm::ECE: return "ece";
        case CalibrationTerm::BCE: return "bce";
        case CalibrationTerm::MSE: return "mse";
    }
    return "unknown";
}

CalibrationTerm calibration_term_from_string(const std::string& name) {
    if (name == "ece" || name == "ECE") return CalibrationTerm::ECE;
    if (name == "bce" || name == "BCE") return CalibrationTerm::BCE;
    if (name == "mse" || name == "MSE") return CalibrationTerm::MSE;
    throw DomainError("unknown calibration term '" + name + "'");
}

double loss_af(int y, double p, const LossConfig& cfg) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("loss_af: p out of (0,1)");
    const double pc = clamp_prob(p);
    if (y == 1) return -cfg.alpha1 * std::pow(1.0 - pc, cfg.gamma) * std::log(pc);
    return -cfg.alpha0 * std::pow(pc, cfg.gamma) * std::log(1.0 - pc);
}

double loss_cp(int y, double p, double u, const LossConfig& cfg) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("loss_cp: p out of (0,1)");
    if (!(u > 0.0 && u < 1.0)) throw DomainError("loss_cp: u out of (0,1)");
    if (y == 0 && p > cfg.tau) return u * u;
    if (y == 1 && p < cfg.tau) return (1.0 - u) * (1.0 - u);
    return 0.0;
}

int ece_bin(double p, int bins) {
    const int b = static_cast<int>(std::floor(p * bins));
    return std::clamp(b, 0, bins - 1);
}

double ece(const BatchScores& batch, const LossConfig& cfg) {
    check_batch(batch);
    const std::size_t n = batch.p.size();
    std::vector<double> sum_p(cfg.bins, 0.0), sum_y(cfg.bins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const int b = ece_bin(batch.p[i], cfg.bins);
        sum_p[b] += batch.p[i];
        sum_y[b] += batch.y[i];
    }
    double total = 0.0;
    for (int b = 0; b < cfg.bins; ++b) total += std::abs(sum_p[b] - sum_y[b]);
    return total / static_cast<double>(n);
}

double calibration_bce(const BatchScores& batch) {
    check_batch(batch);
    double total = 0.0;
    for (std::size_t i = 0; i < batch.p.size(); ++i) {
        const double p = clamp_prob(batch.p[i]);
        total += batch.y[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(batch.p.size());
}

double calibration_mse(const BatchScores& batch) {
    check_batch(batch);
    double total = 0.0;
    for (std::size_t i = 0; i < batch.p.size(); ++i) {
        const double d = batch.p[i] - batch.y[i];
        total += d * d;
    }
    return total / static_cast<double>(batch.p.size());
}

LossParts loss_focuscal(const BatchScores& batch, const LossConfig& cfg) {
    check_batch(batch);
    const std::size_t n = batch.p.size();
    LossParts parts;
    for (std::size_t i = 0; i < n; ++i) {
        parts.af += loss_af(batch.y[i], batch.p[i], cfg);
        parts.cp += loss_cp(batch.y[i], batch.p[i], batch.u[i], cfg);
    }
    parts.af /= static_cast<double>(n);
    parts.cp /= static_cast<double>(n);
    switch (cfg.calibration_term) {
        case CalibrationTerm::ECE: parts.cal = ece(batch, cfg); break;
        case CalibrationTerm::BCE: parts.cal = calibration_bce(batch); break;
        case CalibrationTerm::MSE: parts.cal = calibration_mse(batch); break;
    }
    parts.total = parts.af + cfg.lambda * parts.cp + cfg.mu * parts.cal;
    return parts;
}

LossGradients loss_gradients(const BatchScores& batch, const LossConfig& cfg) {
    check_batch(batch);
    const std::size_t n = batch.p.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    LossGradients g;
    g.d_p.assign(n, 0.0);
    g.d_u.assign(n, 0.0);

    // Per-bin signed gaps for the detached ECE gradient.
    std::vector<double> gap;
    if (cfg.calibration_term == CalibrationTerm::ECE) {
        gap.assign(cfg.bins, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            gap[ece_bin(batch.p[i], cfg.bins)] += batch.p[i] - batch.y[i];
    }

    for (std::size_t i = 0; i < n; ++i) {
        const int y = batch.y[i];
        const double p = clamp_prob(batch.p[i]);
        const double u = batch.u[i];

        // d af / d p
        double d_af;
        if (y == 1) {
            d_af = cfg.alpha1 * (cfg.gamma * std::pow(1.0 - p, cfg.gamma - 1.0) * std::log(p) -
                                 std::pow(1.0 - p, cfg.gamma) / p);
        } else {
            d_af = cfg.alpha0 * (-cfg.gamma * std::pow(p, cfg.gamma - 1.0) * std::log(1.0 - p) +
                                 std::pow(p, cfg.gamma) / (1.0 - p));
        }
        g.d_p[i] = inv_n * d_af;

        // Calibration gradient.
        switch (cfg.calibration_term) {
            case CalibrationTerm::ECE:
                g.d_p[i] += cfg.mu * inv_n * sign(gap[ece_bin(batch.p[i], cfg.bins)]);
                break;
            case CalibrationTerm::BCE:
                g.d_p[i] += cfg.mu * inv_n * (p - y) / (p * (1.0 - p));
                break;
            case CalibrationTerm::MSE:
                g.d_p[i] += cfg.mu * inv_n * 2.0 * (batch.p[i] - y);
                break;
        }

        // d cp / d u (the p-dependence is branch selection only).
        if (y == 0 && batch.p[i] > cfg.tau) {
            g.d_u[i] = cfg.lambda * inv_n * 2.0 * u;
        } else if (y == 1 && batch.p[i] < cfg.tau) {
            g.d_u[i] = cfg.lambda * inv_n * (-2.0 * (1.0 - u));
        }
    }
    return g;
}

}  // namespace imad
