#pragma once
#include <string>
#include <vector>

namespace imad {

enum class CalibrationTerm { ECE, BCE, MSE };

const char* to_string(CalibrationTerm term);
CalibrationTerm calibration_term_from_string(const std::string& name);

// Composite loss configuration. Defaults are the trained configuration:
// alpha0=2, alpha1=1, gamma=2, lambda=6, mu=5, B=15, tau=0.7.
struct LossConfig {
    double alpha0 = 2.0;
    double alpha1 = 1.0;
    double gamma = 2.0;
    double lambda = 6.0;
    double mu = 5.0;
    int bins = 15;
    double tau = 0.7;
    CalibrationTerm calibration_term = CalibrationTerm::ECE;
};

// A scored batch: predicted debate-skip scores p, hesitation scores u and
// binary labels y (1 = the single-agent answer was correct).
struct BatchScores {
    std::vector<double> p;
    std::vector<double> u;
    std::vector<int> y;
};

// Asymmetric focal term:
//   y=1 -> -alpha1 * (1-p)^gamma * ln(p)
//   y=0 -> -alpha0 * p^gamma     * ln(1-p)
double loss_af(int y, double p, const LossConfig& cfg);

// Confidence penalty: u^2 when (y=0, p>tau); (1-u)^2 when (y=1, p<tau);
// 0 otherwise (strict inequalities; p == tau takes the zero branch).
double loss_cp(int y, double p, double u, const LossConfig& cfg);

// Equal-width-bin calibration gap: sum_b (1/N) |sum_{i in I_b} p_i -
// sum_{i in I_b} y_i|, bin b covering [(b-1)/B, b/B), last bin closed above.
double ece(const BatchScores& batch, const LossConfig& cfg);

// Calibration substitutes for ablations: mean binary cross-entropy and mean
// squared error of p against y.
double calibration_bce(const BatchScores& batch);
double calibration_mse(const BatchScores& batch);

struct LossParts {
    double af = 0.0;   // batch mean of the asymmetric focal term
    double cp = 0.0;   // batch mean of the confidence penalty
    double cal = 0.0;  // ECE / BCE / MSE per cfg.calibration_term
    double total = 0.0;
};

// total = mean(af) + lambda * mean(cp) + mu * cal.
LossParts loss_focuscal(const BatchScores& batch, const LossConfig& cfg);

struct LossGradients {
    std::vector<double> d_p;
    std::vector<double> d_u;
};

// Analytic gradients of the batch total. ECE bin assignment is treated as
// constant: the gradient flows only through the summed p with
// sign(sum p - sum y)/N per bin member. The confidence penalty contributes
// to d_u only (its p-dependence is the piecewise-constant branch).
LossGradients loss_gradients(const BatchScores& batch, const LossConfig& cfg);

// Bin index under the equal-width rule shared by value and gradient paths.
int ece_bin(double p, int bins);

}  // namespace imad
