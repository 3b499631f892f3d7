#include "imad/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "imad/checksum.hpp"
#include "imad/errors.hpp"
#include "imad/self_critique.hpp"

namespace imad {
namespace {

using json = nlohmann::ordered_json;

struct Adam {
    double lr;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::vector<double> m, v;
    long t = 0;

    explicit Adam(double lr, std::size_t n) : lr(lr), m(n, 0.0), v(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grads) {
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, t);
        const double bc2 = 1.0 - std::pow(beta2, t);
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
            params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
        }
    }
};

double clamp_unit(double p) {
    return std::clamp(p, 1e-7, 1.0 - 1e-7);
}

// Forward a set of examples in inference mode; returns clamped (p, u).
std::pair<std::vector<double>, std::vector<double>> infer_set(
    const Mlp& net, const ScalerStats& scaler, std::uint64_t manifest,
    const std::vector<const LabeledExample*>& set, PLlmSource source) {
    const int dim = net.config().input_dim;
    std::vector<double> x(set.size() * dim), pl(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto std_z = standardize(set[i]->features, scaler, manifest);
        std::copy(std_z.begin(), std_z.end(), x.begin() + i * dim);
        pl[i] = p_llm_of(set[i]->features, source);
    }
    auto fwd = net.infer(x.data(), static_cast<int>(set.size()), pl.data());
    for (auto& p : fwd.p) p = clamp_unit(p);
    for (auto& u : fwd.u) u = clamp_unit(u);
    return {std::move(fwd.p), std::move(fwd.u)};
}

json scaler_to_json(const ScalerStats& s) {
    return json{{"mean", s.mean}, {"std", s.std}};
}

std::string manifest_hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::uint64_t parse_hash_hex(const std::string& s) {
    if (s.size() != 16) throw CorruptModel("bad hash field");
    std::uint64_t h = 0;
    for (char c : s) {
        h <<= 4;
        if (c >= '0' && c <= '9') h |= static_cast<std::uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f') h |= static_cast<std::uint64_t>(c - 'a' + 10);
        else throw CorruptModel("bad hash field");
    }
    return h;
}

}  // namespace

const char* to_string(PLlmSource source) {
    return source == PLlmSource::FinalConfidence ? "final" : "initial";
}

PLlmSource p_llm_source_from_string(const std::string& name) {
    if (name == "final") return PLlmSource::FinalConfidence;
    if (name == "initial") return PLlmSource::InitialConfidence;
    throw DomainError("unknown p_llm source '" + name + "'");
}

double p_llm_of(const FeatureVector& z, PLlmSource source) {
    // InitialConfidence sits at canonical index 20; FinalConfidence is the
    // p_llm carried on the vector.
    const double raw = source == PLlmSource::FinalConfidence ? z.p_llm : z.values[20];
    return std::clamp(raw, kConfidenceClamp, 1.0 - kConfidenceClamp);
}

const char* to_string(Decision decision) {
    return decision == Decision::Skip ? "Skip" : "TriggerDebate";
}

ScalerStats ScalerStats::fit(const std::vector<const FeatureVector*>& examples) {
    if (examples.empty()) throw EmptyTrainingSet();
    const std::size_t dim = examples.front()->values.size();
    ScalerStats s;
    s.mean.assign(dim, 0.0);
    s.std.assign(dim, 0.0);
    for (const auto* ex : examples)
        for (std::size_t j = 0; j < dim; ++j) s.mean[j] += ex->values[j];
    for (double& m : s.mean) m /= static_cast<double>(examples.size());
    for (const auto* ex : examples)
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = ex->values[j] - s.mean[j];
            s.std[j] += d * d;
        }
    for (double& v : s.std) v = std::max(std::sqrt(v / static_cast<double>(examples.size())), kScalerStdFloor);
    return s;
}

std::vector<double> standardize(const FeatureVector& z, const ScalerStats& scaler,
                                std::uint64_t expected_manifest_hash) {
    if (z.manifest_hash != expected_manifest_hash)
        throw ManifestMismatch("feature vector manifest hash does not match the model's");
    if (scaler.mean.size() != z.values.size() || scaler.std.size() != z.values.size())
        throw ManifestMismatch("scaler dimensionality does not match the feature vector");
    std::vector<double> out(z.values.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = (z.values[j] - scaler.mean[j]) / scaler.std[j];
    return out;
}

ClassifierForward classifier_forward(const DecisionModel& model, const FeatureVector& z) {
    const auto x = standardize(z, model.scaler, model.feature_manifest_hash);
    const double pl = p_llm_of(z, model.train_cfg.p_llm_source);
    const auto fwd = model.net.infer(x.data(), 1, &pl);
    return {fwd.l_llm[0], fwd.l_p[0], fwd.l_u[0], fwd.p[0], fwd.u[0]};
}

DecideResult decide(const DecisionModel& model, const FeatureVector& z) {
    const auto fwd = classifier_forward(model, z);
    DecideResult r;
    r.p = fwd.p;
    r.u = fwd.u;
    r.action = fwd.p < model.tau ? Decision::TriggerDebate : Decision::Skip;
    return r;
}

TrainResult train(const std::vector<LabeledExample>& examples, const LossConfig& loss_cfg,
                  const TrainConfig& train_cfg, const MlpConfig& arch,
                  std::uint64_t manifest_hash, const std::string& lexicon_version) {
    if (examples.empty()) throw EmptyTrainingSet();

    std::mt19937_64 rng(train_cfg.seed);

    // Seeded shuffle, then held-out validation split.
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::size_t n_val = 0;
    if (examples.size() >= 2) {
        n_val = static_cast<std::size_t>(std::llround(train_cfg.validation_fraction *
                                                      static_cast<double>(examples.size())));
        n_val = std::clamp<std::size_t>(n_val, 1, examples.size() - 1);
    }
    std::vector<const LabeledExample*> train_set, val_set;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < order.size() - n_val ? train_set : val_set).push_back(&examples[order[i]]);
    }
    if (val_set.empty()) val_set = train_set;  // degenerate single-example set

    // Scaler fit on the training split only.
    std::vector<const FeatureVector*> train_features;
    train_features.reserve(train_set.size());
    for (const auto* ex : train_set) train_features.push_back(&ex->features);
    const ScalerStats scaler = ScalerStats::fit(train_features);

    DecisionModel model{
        .format_version = 1,
        .arch = arch,
        .loss = loss_cfg,
        .train_cfg = train_cfg,
        .scaler = scaler,
        .net = Mlp(arch, rng()),
        .tau = loss_cfg.tau,
        .feature_manifest_hash = manifest_hash,
        .lexicon_version = lexicon_version,
    };

    const int dim = arch.input_dim;
    std::vector<double> std_x(train_set.size() * dim), pls(train_set.size());
    std::vector<int> labels(train_set.size());
    for (std::size_t i = 0; i < train_set.size(); ++i) {
        const auto z = standardize(train_set[i]->features, scaler, manifest_hash);
        std::copy(z.begin(), z.end(), std_x.begin() + i * dim);
        pls[i] = p_llm_of(train_set[i]->features, train_cfg.p_llm_source);
        labels[i] = train_set[i]->y;
    }

    Adam adam(train_cfg.learning_rate, model.net.params().size());
    std::mt19937_64 dropout_rng(rng());

    TrainResult result;
    double best_val_loss = std::numeric_limits<double>::infinity();
    result.best_model = model;

    std::vector<std::size_t> batch_order(train_set.size());
    std::iota(batch_order.begin(), batch_order.end(), 0);

    for (int epoch = 1; epoch <= train_cfg.epochs; ++epoch) {
        std::shuffle(batch_order.begin(), batch_order.end(), rng);

        double ep_total = 0.0, ep_af = 0.0, ep_cp = 0.0, ep_cal = 0.0;
        std::size_t seen = 0;
        int batch_index = 0;

        for (std::size_t start = 0; start < batch_order.size();
             start += train_cfg.batch_size, ++batch_index) {
            const std::size_t end =
                std::min(start + static_cast<std::size_t>(train_cfg.batch_size), batch_order.size());
            const int bn = static_cast<int>(end - start);

            std::vector<double> bx(static_cast<std::size_t>(bn) * dim), bpl(bn);
            BatchScores batch;
            batch.y.resize(bn);
            for (int k = 0; k < bn; ++k) {
                const std::size_t src = batch_order[start + k];
                std::copy(std_x.begin() + src * dim, std_x.begin() + (src + 1) * dim,
                          bx.begin() + static_cast<std::size_t>(k) * dim);
                bpl[k] = pls[src];
                batch.y[k] = labels[src];
            }

            auto fwd = model.net.train_forward(bx.data(), bn, bpl.data(), &dropout_rng);
            batch.p = fwd.p;
            batch.u = fwd.u;
            for (auto& p : batch.p) p = clamp_unit(p);
            for (auto& u : batch.u) u = clamp_unit(u);

            const LossParts parts = loss_focuscal(batch, loss_cfg);
            if (!std::isfinite(parts.total)) throw NonFiniteLoss(epoch, batch_index);

            const LossGradients lg = loss_gradients(batch, loss_cfg);
            const auto grads = model.net.backward(lg.d_p, lg.d_u);
            adam.step(model.net.params(), grads);

            ep_total += parts.total * bn;
            ep_af += parts.af * bn;
            ep_cp += parts.cp * bn;
            ep_cal += parts.cal * bn;
            seen += bn;
        }

        EpochMetrics em;
        em.epoch = epoch;
        em.loss = ep_total / static_cast<double>(seen);
        em.af = ep_af / static_cast<double>(seen);
        em.cp = ep_cp / static_cast<double>(seen);
        em.cal = ep_cal / static_cast<double>(seen);

        // Validation in inference mode.
        auto [vp, vu] = infer_set(model.net, scaler, manifest_hash, val_set,
                                  train_cfg.p_llm_source);
        BatchScores vbatch;
        vbatch.p = std::move(vp);
        vbatch.u = std::move(vu);
        vbatch.y.resize(val_set.size());
        int correct = 0;
        for (std::size_t i = 0; i < val_set.size(); ++i) {
            vbatch.y[i] = val_set[i]->y;
            if ((vbatch.p[i] >= 0.5 ? 1 : 0) == vbatch.y[i]) ++correct;
        }
        const LossParts vparts = loss_focuscal(vbatch, loss_cfg);
        em.val_loss = vparts.total;
        em.val_accuracy = static_cast<double>(correct) / static_cast<double>(val_set.size());
        result.metrics.push_back(em);

        if (em.val_loss < best_val_loss) {
            best_val_loss = em.val_loss;
            result.best_model = model;
        }
    }

    result.final_model = std::move(model);
    return result;
}

void save_model(const DecisionModel& model, const std::filesystem::path& path) {
    json j;
    j["format_version"] = model.format_version;
    j["arch"] = {{"input_dim", model.arch.input_dim},
                 {"hidden_width", model.arch.hidden_width},
                 {"hidden_layers", model.arch.hidden_layers},
                 {"dropout_rate", model.arch.dropout_rate},
                 {"bn_momentum", model.arch.bn_momentum},
                 {"bn_epsilon", model.arch.bn_epsilon}};
    j["loss"] = {{"alpha0", model.loss.alpha0},
                 {"alpha1", model.loss.alpha1},
                 {"gamma", model.loss.gamma},
                 {"lambda", model.loss.lambda},
                 {"mu", model.loss.mu},
                 {"bins", model.loss.bins},
                 {"tau", model.loss.tau},
                 {"calibration_term", to_string(model.loss.calibration_term)}};
    j["train"] = {{"epochs", model.train_cfg.epochs},
                  {"learning_rate", model.train_cfg.learning_rate},
                  {"batch_size", model.train_cfg.batch_size},
                  {"validation_fraction", model.train_cfg.validation_fraction},
                  {"seed", model.train_cfg.seed},
                  {"p_llm_source", to_string(model.train_cfg.p_llm_source)}};
    j["tau"] = model.tau;
    j["feature_manifest_hash"] = manifest_hash_hex(model.feature_manifest_hash);
    j["lexicon_version"] = model.lexicon_version;
    j["scaler"] = scaler_to_json(model.scaler);
    j["params"] = model.net.params();
    j["running_stats"] = model.net.running_stats();
    j["checksum"] = fnv1a64_hex(j.dump());

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write model file " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing model file " + path.string());
}

DecisionModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();

    json j = json::parse(ss.str(), nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) throw CorruptModel("model file is not valid JSON");

    try {
        if (!j.contains("checksum")) throw CorruptModel("model file lacks a checksum");
        const std::string stored = j.at("checksum").get<std::string>();
        j.erase("checksum");
        if (fnv1a64_hex(j.dump()) != stored) throw CorruptModel("model file checksum mismatch");

        const int version = j.at("format_version").get<int>();
        if (version != 1)
            throw VersionMismatch("unsupported model format version " + std::to_string(version));

        MlpConfig arch;
        arch.input_dim = j.at("arch").at("input_dim").get<int>();
        arch.hidden_width = j.at("arch").at("hidden_width").get<int>();
        arch.hidden_layers = j.at("arch").at("hidden_layers").get<int>();
        arch.dropout_rate = j.at("arch").at("dropout_rate").get<double>();
        arch.bn_momentum = j.at("arch").at("bn_momentum").get<double>();
        arch.bn_epsilon = j.at("arch").at("bn_epsilon").get<double>();

        LossConfig loss;
        loss.alpha0 = j.at("loss").at("alpha0").get<double>();
        loss.alpha1 = j.at("loss").at("alpha1").get<double>();
        loss.gamma = j.at("loss").at("gamma").get<double>();
        loss.lambda = j.at("loss").at("lambda").get<double>();
        loss.mu = j.at("loss").at("mu").get<double>();
        loss.bins = j.at("loss").at("bins").get<int>();
        loss.tau = j.at("loss").at("tau").get<double>();
        loss.calibration_term =
            calibration_term_from_string(j.at("loss").at("calibration_term").get<std::string>());

        TrainConfig tc;
        tc.epochs = j.at("train").at("epochs").get<int>();
        tc.learning_rate = j.at("train").at("learning_rate").get<double>();
        tc.batch_size = j.at("train").at("batch_size").get<int>();
        tc.validation_fraction = j.at("train").at("validation_fraction").get<double>();
        tc.seed = j.at("train").at("seed").get<std::uint64_t>();
        tc.p_llm_source = p_llm_source_from_string(j.at("train").at("p_llm_source").get<std::string>());

        DecisionModel model{
            .format_version = version,
            .arch = arch,
            .loss = loss,
            .train_cfg = tc,
            .scaler = {},
            .net = Mlp(arch, 0),
            .tau = j.at("tau").get<double>(),
            .feature_manifest_hash = parse_hash_hex(j.at("feature_manifest_hash").get<std::string>()),
            .lexicon_version = j.at("lexicon_version").get<std::string>(),
        };
        model.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
        model.scaler.std = j.at("scaler").at("std").get<std::vector<double>>();

        auto params = j.at("params").get<std::vector<double>>();
        auto running = j.at("running_stats").get<std::vector<double>>();
        if (params.size() != model.net.params().size() ||
            running.size() != model.net.running_stats().size())
            throw CorruptModel("parameter tensor sizes do not match the architecture");
        model.net.params() = std::move(params);
        model.net.running_stats() = std::move(running);

        if (model.scaler.mean.size() != static_cast<std::size_t>(arch.input_dim) ||
            model.scaler.std.size() != static_cast<std::size_t>(arch.input_dim))
            throw CorruptModel("scaler dimensionality does not match the architecture");
        return model;
    } catch (const Error&) {
        throw;
    } catch (const json::exception& e) {
        throw CorruptModel(std::string("model file structure invalid: ") + e.what());
    }
}

void check_compatibility(const DecisionModel& model, const FeatureExtractor& extractor) {
    if (model.feature_manifest_hash != FeatureExtractor::manifest_hash())
        throw ManifestMismatch("model was trained under a different feature manifest");
    if (model.lexicon_version != extractor.lexicon_version())
        throw VersionMismatch("model was trained with lexicon version '" + model.lexicon_version +
                              "' but the extractor has '" + extractor.lexicon_version() + "'");
}

}  // namespace imad
