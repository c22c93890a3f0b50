#include <algorithm>
#include <cmath>

#include "learn_internal.hpp"

namespace flakelex::detail {

void train_naive_bayes(const TrainingView& view, ModelParams& params) {
    const std::size_t width = params.width;
    GaussianNbModel nb;
    nb.mean_flaky.assign(width, 0.0);
    nb.var_flaky.assign(width, 0.0);
    nb.mean_nonflaky.assign(width, 0.0);
    nb.var_nonflaky.assign(width, 0.0);

    // first and second moments per class, implicit zeros included
    std::vector<double> sum[2], sum_sq[2];
    sum[0].assign(width, 0.0);
    sum[1].assign(width, 0.0);
    sum_sq[0].assign(width, 0.0);
    sum_sq[1].assign(width, 0.0);
    double count[2] = {0.0, 0.0};

    for (std::size_t i = 0; i < view.size(); ++i) {
        const int c = view.is_flaky(i) ? 0 : 1;
        count[c] += 1.0;
        for (const auto& [col, val] : view.row(i).entries) {
            sum[c][col] += val;
            sum_sq[c][col] += val * val;
        }
    }

    const double floor_ = params.spec.hyper.nb_variance_floor;
    for (std::size_t f = 0; f < width; ++f) {
        const double mf = sum[0][f] / count[0];
        const double mn = sum[1][f] / count[1];
        nb.mean_flaky[f] = mf;
        nb.mean_nonflaky[f] = mn;
        nb.var_flaky[f] = std::max(floor_, sum_sq[0][f] / count[0] - mf * mf);
        nb.var_nonflaky[f] = std::max(floor_, sum_sq[1][f] / count[1] - mn * mn);
    }
    const double n = count[0] + count[1];
    nb.log_prior_flaky = std::log(count[0] / n);
    nb.log_prior_nonflaky = std::log(count[1] / n);
    nb.refresh_baselines();

    params.impl = std::move(nb);
    params.threshold = 0.5;
}

void train_knn(const TrainingView& view, ModelParams& params) {
    KnnModel knn;
    knn.k = std::max<std::int32_t>(1, params.spec.hyper.knn_neighbors);
    knn.rows.reserve(view.size());
    knn.flaky.reserve(view.size());
    for (std::size_t i = 0; i < view.size(); ++i) {
        knn.rows.push_back(view.row(i));
        knn.flaky.push_back(view.is_flaky(i) ? 1 : 0);
    }
    knn.refresh_norms();
    params.impl = std::move(knn);
    params.threshold = 0.5;
}

}  // namespace flakelex::detail
