#pragma once
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "imad/features.hpp"
#include "imad/loss.hpp"
#include "imad/network.hpp"

namespace imad {

// Per-feature standardization statistics, fit on the training split only.
struct ScalerStats {
    std::vector<double> mean;
    std::vector<double> std;  // floored at 1e-8

    static ScalerStats fit(const std::vector<const FeatureVector*>& examples);
};

inline constexpr double kScalerStdFloor = 1e-8;

// Which confidence feeds the logit fusion.
enum class PLlmSource { FinalConfidence, InitialConfidence };

const char* to_string(PLlmSource source);
PLlmSource p_llm_source_from_string(const std::string& name);

double p_llm_of(const FeatureVector& z, PLlmSource source);

struct LabeledExample {
    FeatureVector features;
    int y = 0;  // 1 = single-agent answer matched ground truth
};

struct TrainConfig {
    int epochs = 50;
    double learning_rate = 0.001;
    int batch_size = 64;
    double validation_fraction = 0.1;
    std::uint64_t seed = 0;
    PLlmSource p_llm_source = PLlmSource::FinalConfidence;
};

// Everything needed to score and decide: scaler, network weights (including
// the fusion parameters), threshold, and the data versions the model was
// trained against.
struct DecisionModel {
    int format_version = 1;
    MlpConfig arch;
    LossConfig loss;
    TrainConfig train_cfg;
    ScalerStats scaler;
    Mlp net;
    double tau = 0.7;
    std::uint64_t feature_manifest_hash = 0;
    std::string lexicon_version;
};

// (z_i - mean_i) / std_i; rejects vectors produced under a different feature
// manifest. p_llm is carried through unscaled.
std::vector<double> standardize(const FeatureVector& z, const ScalerStats& scaler,
                                std::uint64_t expected_manifest_hash);

struct ClassifierForward {
    double l_llm = 0.0;
    double l_p = 0.0;
    double l_u = 0.0;
    double p = 0.5;
    double u = 0.5;
};

// Deterministic inference forward for one feature vector.
ClassifierForward classifier_forward(const DecisionModel& model, const FeatureVector& z);

enum class Decision { Skip, TriggerDebate };

const char* to_string(Decision decision);

struct DecideResult {
    Decision action = Decision::Skip;
    double p = 0.5;
    double u = 0.5;
};

// TriggerDebate iff p < tau (strict); p == tau skips.
DecideResult decide(const DecisionModel& model, const FeatureVector& z);

struct EpochMetrics {
    int epoch = 0;
    double loss = 0.0;
    double af = 0.0;
    double cp = 0.0;
    double cal = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    DecisionModel final_model;  // after the last epoch
    DecisionModel best_model;   // lowest validation loss
    std::vector<EpochMetrics> metrics;
};

// Adam over the FocusCal loss; seeded shuffles, scaler fit on the training
// split, best checkpoint selected by validation loss.
TrainResult train(const std::vector<LabeledExample>& examples, const LossConfig& loss_cfg,
                  const TrainConfig& train_cfg, const MlpConfig& arch,
                  std::uint64_t manifest_hash, const std::string& lexicon_version);

// Structured-text model file with a whole-file checksum; round-trips are
// bit-exact on forward outputs.
void save_model(const DecisionModel& model, const std::filesystem::path& path);
DecisionModel load_model(const std::filesystem::path& path);

// Raises ManifestMismatch / VersionMismatch when the extractor's manifest or
// lexicon version differs from what the model was trained with.
void check_compatibility(const DecisionModel& model, const FeatureExtractor& extractor);

}  // namespace imad
