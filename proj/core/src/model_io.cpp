#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flakelex/error.hpp"
#include "flakelex/io.hpp"
#include "learn_internal.hpp"

namespace flakelex {

using nlohmann::ordered_json;
using detail::ForestModel;
using detail::GaussianNbModel;
using detail::KnnModel;
using detail::LinearModel;
using detail::ModelParams;
using detail::TreeModel;
using detail::TreeNode;

namespace {

constexpr int kFormatVersion = 1;

ordered_json tree_to_json(const TreeModel& tree) {
    ordered_json feature = ordered_json::array();
    ordered_json threshold = ordered_json::array();
    ordered_json left = ordered_json::array();
    ordered_json right = ordered_json::array();
    ordered_json value = ordered_json::array();
    for (const auto& n : tree.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
    }
    ordered_json t;
    t["feature"] = std::move(feature);
    t["threshold"] = std::move(threshold);
    t["left"] = std::move(left);
    t["right"] = std::move(right);
    t["value"] = std::move(value);
    return t;
}

TreeModel tree_from_json(const ordered_json& t) {
    TreeModel tree;
    const auto& feature = t.at("feature");
    const auto& threshold = t.at("threshold");
    const auto& left = t.at("left");
    const auto& right = t.at("right");
    const auto& value = t.at("value");
    tree.nodes.resize(feature.size());
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        tree.nodes[i] = TreeNode{feature[i].get<std::int32_t>(),
                                 threshold[i].get<double>(),
                                 left[i].get<std::int32_t>(),
                                 right[i].get<std::int32_t>(),
                                 value[i].get<double>()};
    }
    return tree;
}

ordered_json params_to_json(const ModelParams& p) {
    ordered_json out;
    std::visit(
        [&](const auto& impl) {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, ForestModel>) {
                ordered_json trees = ordered_json::array();
                for (const auto& tree : impl.trees) trees.push_back(tree_to_json(tree));
                out["trees"] = std::move(trees);
            } else if constexpr (std::is_same_v<T, TreeModel>) {
                out["tree"] = tree_to_json(impl);
            } else if constexpr (std::is_same_v<T, GaussianNbModel>) {
                out["log_prior_flaky"] = impl.log_prior_flaky;
                out["log_prior_nonflaky"] = impl.log_prior_nonflaky;
                out["mean_flaky"] = impl.mean_flaky;
                out["var_flaky"] = impl.var_flaky;
                out["mean_nonflaky"] = impl.mean_nonflaky;
                out["var_nonflaky"] = impl.var_nonflaky;
            } else if constexpr (std::is_same_v<T, LinearModel>) {
                out["weights"] = impl.weights;
                out["bias"] = impl.bias;
                out["sigmoid"] = impl.sigmoid;
            } else {  // KnnModel
                out["k"] = impl.k;
                ordered_json rows = ordered_json::array();
                for (const auto& row : impl.rows) {
                    ordered_json r = ordered_json::array();
                    for (const auto& [col, val] : row.entries)
                        r.push_back(ordered_json::array({col, val}));
                    rows.push_back(std::move(r));
                }
                out["rows"] = std::move(rows);
                out["flaky"] = impl.flaky;
            }
        },
        p.impl);
    return out;
}

void params_from_json(const ordered_json& in, ClassifierKind kind, ModelParams& p) {
    switch (kind) {
        case ClassifierKind::RandomForest: {
            ForestModel forest;
            for (const auto& t : in.at("trees")) forest.trees.push_back(tree_from_json(t));
            p.impl = std::move(forest);
            break;
        }
        case ClassifierKind::DecisionTree:
            p.impl = tree_from_json(in.at("tree"));
            break;
        case ClassifierKind::NaiveBayes: {
            GaussianNbModel nb;
            nb.log_prior_flaky = in.at("log_prior_flaky").get<double>();
            nb.log_prior_nonflaky = in.at("log_prior_nonflaky").get<double>();
            nb.mean_flaky = in.at("mean_flaky").get<std::vector<double>>();
            nb.var_flaky = in.at("var_flaky").get<std::vector<double>>();
            nb.mean_nonflaky = in.at("mean_nonflaky").get<std::vector<double>>();
            nb.var_nonflaky = in.at("var_nonflaky").get<std::vector<double>>();
            nb.refresh_baselines();
            p.impl = std::move(nb);
            break;
        }
        case ClassifierKind::NearestNeighbour: {
            KnnModel knn;
            knn.k = in.at("k").get<std::int32_t>();
            for (const auto& r : in.at("rows")) {
                SparseRow row;
                for (const auto& e : r)
                    row.entries.emplace_back(e[0].get<std::uint32_t>(), e[1].get<double>());
                knn.rows.push_back(std::move(row));
            }
            knn.flaky = in.at("flaky").get<std::vector<std::uint8_t>>();
            knn.refresh_norms();
            p.impl = std::move(knn);
            break;
        }
        default: {  // the linear family
            LinearModel lin;
            lin.weights = in.at("weights").get<std::vector<double>>();
            lin.bias = in.at("bias").get<double>();
            lin.sigmoid = in.at("sigmoid").get<bool>();
            p.impl = std::move(lin);
            break;
        }
    }
}

ordered_json hyper_to_json(const Hyperparameters& h) {
    return ordered_json{{"forest_trees", h.forest_trees},
                        {"nb_variance_floor", h.nb_variance_floor},
                        {"svm_cost", h.svm_cost},
                        {"svm_max_epochs", h.svm_max_epochs},
                        {"svm_tolerance", h.svm_tolerance},
                        {"knn_neighbors", h.knn_neighbors},
                        {"lr_cost", h.lr_cost},
                        {"lr_tolerance", h.lr_tolerance},
                        {"lr_max_iterations", h.lr_max_iterations},
                        {"lda_ridge", h.lda_ridge},
                        {"perceptron_rate", h.perceptron_rate},
                        {"perceptron_max_epochs", h.perceptron_max_epochs}};
}

Hyperparameters hyper_from_json(const ordered_json& j) {
    Hyperparameters h;
    h.forest_trees = j.at("forest_trees").get<std::int32_t>();
    h.nb_variance_floor = j.at("nb_variance_floor").get<double>();
    h.svm_cost = j.at("svm_cost").get<double>();
    h.svm_max_epochs = j.at("svm_max_epochs").get<std::int32_t>();
    h.svm_tolerance = j.at("svm_tolerance").get<double>();
    h.knn_neighbors = j.at("knn_neighbors").get<std::int32_t>();
    h.lr_cost = j.at("lr_cost").get<double>();
    h.lr_tolerance = j.at("lr_tolerance").get<double>();
    h.lr_max_iterations = j.at("lr_max_iterations").get<std::int32_t>();
    h.lda_ridge = j.at("lda_ridge").get<double>();
    h.perceptron_rate = j.at("perceptron_rate").get<double>();
    h.perceptron_max_epochs = j.at("perceptron_max_epochs").get<std::int32_t>();
    return h;
}

std::string fingerprint_hex(std::uint64_t fp) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx",
                  static_cast<unsigned long long>(fp));
    return buf;
}

std::uint64_t fingerprint_parse(const std::string& s) {
    return std::stoull(s, nullptr, 16);
}

}  // namespace

void TrainedModel::save(const std::filesystem::path& path,
                        const Vocabulary* vocab) const {
    const ModelParams& p = *params_;
    ordered_json out;
    out["format"] = "flakelex-model";
    out["version"] = kFormatVersion;
    out["classifier"] = classifier_id(p.spec.kind);
    out["seed"] = p.spec.seed;
    out["hyper"] = hyper_to_json(p.spec.hyper);
    out["width"] = p.width;
    out["fingerprint"] = fingerprint_hex(p.fingerprint);
    out["threshold"] = p.threshold;
    out["prior_flaky"] = p.prior_flaky;
    // duration is run metadata, deliberately not serialized
    out["training"] = ordered_json{{"iterations", p.info.iterations},
                                   {"converged", p.info.converged}};
    if (vocab) {
        if (vocab->fingerprint() != p.fingerprint)
            throw ConfigMismatch("vocabulary does not match the trained model");
        out["ablation"] = ablation_id(vocab->ablation());
        out["vocabulary"] = vocab->tokens();
    }
    out["params"] = params_to_json(p);
    atomic_write(path, out.dump(2) + "\n");
}

TrainedModel::Loaded TrainedModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const ordered_json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
    if (j.value("format", "") != "flakelex-model")
        throw Error(path.string() + ": not a model file");
    if (j.value("version", 0) != kFormatVersion)
        throw Error(path.string() + ": unsupported model version");

    Loaded loaded{TrainedModel{}, std::nullopt, AblationConfig::AllFeatures};
    ModelParams& p = *loaded.model.params_;
    const auto kind = parse_classifier(j.at("classifier").get<std::string>());
    if (!kind) throw Error(path.string() + ": unknown classifier kind");
    p.spec.kind = *kind;
    p.spec.seed = j.at("seed").get<std::uint64_t>();
    p.spec.hyper = hyper_from_json(j.at("hyper"));
    p.width = j.at("width").get<std::size_t>();
    p.fingerprint = fingerprint_parse(j.at("fingerprint").get<std::string>());
    p.threshold = j.at("threshold").get<double>();
    p.prior_flaky = j.at("prior_flaky").get<double>();
    p.info.iterations = j.at("training").at("iterations").get<std::int64_t>();
    p.info.converged = j.at("training").at("converged").get<bool>();
    params_from_json(j.at("params"), p.spec.kind, p);

    if (j.contains("vocabulary")) {
        const auto ablation = parse_ablation(j.at("ablation").get<std::string>());
        if (!ablation) throw Error(path.string() + ": unknown ablation");
        loaded.ablation = *ablation;
        loaded.vocabulary = Vocabulary::from_tokens(
            j.at("vocabulary").get<std::vector<std::string>>(), *ablation);
        if (loaded.vocabulary->fingerprint() != p.fingerprint)
            throw ConfigMismatch(path.string() +
                                 ": embedded vocabulary does not match the model");
    }
    return loaded;
}

}  // namespace flakelex
