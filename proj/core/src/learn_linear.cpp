#include <algorithm>
#include <cmath>

#include "learn_internal.hpp"

namespace flakelex::detail {
namespace {

inline double label_sign(bool flaky) { return flaky ? 1.0 : -1.0; }

// log(1 + exp(t)) without overflow
inline double log1p_exp(double t) {
    return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

}  // namespace

// L2-regularized logistic loss, f(w,b) = 0.5 w'w + C sum log(1+exp(-y z)),
// minimized by gradient descent with Armijo backtracking. The bias is not
// regularized.
void train_logistic_regression(const TrainingView& view, ModelParams& params) {
    const std::size_t n = view.size();
    const std::size_t width = params.width;
    const double C = params.spec.hyper.lr_cost;
    const double tol = params.spec.hyper.lr_tolerance;
    const auto max_iter = params.spec.hyper.lr_max_iterations;

    std::vector<double> w(width, 0.0);
    double b = 0.0;
    std::vector<double> z(n, 0.0);       // margins w.x + b
    std::vector<double> zd(n, 0.0);      // margins of the search direction

    // the bias is unregularized, so it enters only through the margins
    auto objective = [&](const std::vector<double>& weights,
                         const std::vector<double>& margins) {
        double f = 0.0;
        for (double wi : weights) f += wi * wi;
        f *= 0.5;
        for (std::size_t i = 0; i < n; ++i)
            f += C * log1p_exp(-label_sign(view.is_flaky(i)) * margins[i]);
        return f;
    };

    std::vector<double> grad(width, 0.0);
    double fval = objective(w, z);
    std::int64_t iter = 0;
    bool converged = false;

    for (; iter < max_iter; ++iter) {
        std::copy(w.begin(), w.end(), grad.begin());
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = label_sign(view.is_flaky(i));
            const double s = -y * C / (1.0 + std::exp(y * z[i]));
            add_scaled(grad, s, view.row(i));
            grad_b += s;
        }
        double gmax = std::abs(grad_b);
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax <= tol) {
            converged = true;
            break;
        }

        // direction d = -grad; per-sample margins of d computed once
        double dir_dot_grad = -grad_b * grad_b;
        for (double g : grad) dir_dot_grad -= g * g;
        for (std::size_t i = 0; i < n; ++i)
            zd[i] = -(dot(view.row(i), grad) + grad_b);

        double step = 1.0;
        bool moved = false;
        std::vector<double> w_try(width);
        std::vector<double> z_try(n);
        for (int halvings = 0; halvings < 60; ++halvings) {
            for (std::size_t j = 0; j < width; ++j) w_try[j] = w[j] - step * grad[j];
            const double b_try = b - step * grad_b;
            for (std::size_t i = 0; i < n; ++i) z_try[i] = z[i] + step * zd[i];
            const double f_try = objective(w_try, z_try);
            if (f_try <= fval + 1e-4 * step * dir_dot_grad) {
                w.swap(w_try);
                b = b_try;
                z.swap(z_try);
                fval = f_try;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;  // no representable progress along -grad
    }

    params.impl = LinearModel{std::move(w), b, true};
    params.threshold = 0.5;
    params.info.iterations = iter;
    params.info.converged = converged;
}

// L1-loss SVM dual coordinate descent with the bias folded in as a constant
// feature: Q_ii = x_i.x_i + 1, updates sweep a fixed seeded order.
void train_linear_svm(const TrainingView& view, ModelParams& params) {
    const std::size_t n = view.size();
    const double C = params.spec.hyper.svm_cost;
    const double tol = params.spec.hyper.svm_tolerance;
    const auto max_epochs = params.spec.hyper.svm_max_epochs;

    std::vector<double> w(params.width, 0.0);
    double b = 0.0;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = squared_norm(view.row(i)) + 1.0;

    std::int64_t epoch = 0;
    bool converged = false;
    for (; epoch < max_epochs; ++epoch) {
        double max_violation = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = label_sign(view.is_flaky(i));
            const double g = y * (dot(view.row(i), w) + b) - 1.0;
            double pg = g;
            if (alpha[i] <= 0.0) pg = std::min(g, 0.0);
            else if (alpha[i] >= C) pg = std::max(g, 0.0);
            max_violation = std::max(max_violation, std::abs(pg));
            if (pg == 0.0) continue;
            const double next = std::clamp(alpha[i] - g / q[i], 0.0, C);
            const double delta = next - alpha[i];
            if (delta == 0.0) continue;
            alpha[i] = next;
            add_scaled(w, delta * y, view.row(i));
            b += delta * y;
        }
        if (max_violation < tol) {
            converged = true;
            ++epoch;
            break;
        }
    }

    params.impl = LinearModel{std::move(w), b, false};
    params.threshold = 0.0;
    params.info.iterations = epoch;
    params.info.converged = converged;
}

// Classic online perceptron; one seeded shuffle per epoch, early exit on an
// error-free epoch.
void train_perceptron(const TrainingView& view, ModelParams& params) {
    const std::size_t n = view.size();
    const double rate = params.spec.hyper.perceptron_rate;
    const auto max_epochs = params.spec.hyper.perceptron_max_epochs;

    std::vector<double> w(params.width, 0.0);
    double b = 0.0;
    std::vector<std::size_t> visit(n);
    for (std::size_t i = 0; i < n; ++i) visit[i] = i;
    Rng rng(params.spec.seed);

    std::int64_t epoch = 0;
    bool converged = false;
    for (; epoch < max_epochs; ++epoch) {
        rng.shuffle(visit);
        std::size_t mistakes = 0;
        for (auto i : visit) {
            const double y = label_sign(view.is_flaky(i));
            if (y * (dot(view.row(i), w) + b) <= 0.0) {
                add_scaled(w, rate * y, view.row(i));
                b += rate * y;
                ++mistakes;
            }
        }
        if (mistakes == 0) {
            converged = true;
            ++epoch;
            break;
        }
    }

    params.impl = LinearModel{std::move(w), b, false};
    params.threshold = 0.0;
    params.info.iterations = epoch;
    params.info.converged = converged;
}

// Fisher discriminant: solve (S_pooled + ridge I) w = mu_f - mu_n with
// conjugate gradients, never materializing the covariance. The intercept
// places the boundary halfway between the projected means, shifted by the
// log prior odds.
void train_linear_discriminant(const TrainingView& view, ModelParams& params) {
    const std::size_t n = view.size();
    const std::size_t width = params.width;
    const double ridge = params.spec.hyper.lda_ridge;

    std::vector<double> mean_f(width, 0.0), mean_n(width, 0.0);
    double nf = 0.0, nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (view.is_flaky(i)) {
            add_scaled(mean_f, 1.0, view.row(i));
            nf += 1.0;
        } else {
            add_scaled(mean_n, 1.0, view.row(i));
            nn += 1.0;
        }
    }
    for (auto& v : mean_f) v /= nf;
    for (auto& v : mean_n) v /= nn;

    const double denom = std::max(1.0, static_cast<double>(n) - 2.0);

    // (sum_i x_i (x_i.v) - nf mu_f (mu_f.v) - nn mu_n (mu_n.v)) / (n-2) + ridge v
    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = dot(view.row(i), v);
            add_scaled(out, s, view.row(i));
        }
        double mf_v = 0.0, mn_v = 0.0;
        for (std::size_t j = 0; j < width; ++j) {
            mf_v += mean_f[j] * v[j];
            mn_v += mean_n[j] * v[j];
        }
        for (std::size_t j = 0; j < width; ++j) {
            out[j] -= nf * mean_f[j] * mf_v + nn * mean_n[j] * mn_v;
            out[j] = out[j] / denom + ridge * v[j];
        }
    };

    std::vector<double> rhs(width);
    for (std::size_t j = 0; j < width; ++j) rhs[j] = mean_f[j] - mean_n[j];

    std::vector<double> w(width, 0.0), r = rhs, p = rhs, ap(width);
    double rr = 0.0;
    for (double v : r) rr += v * v;
    const double target = 1e-20 * rr;  // relative tolerance 1e-10 on the norm

    const std::int64_t cap = 500;
    std::int64_t iter = 0;
    for (; iter < cap && rr > target && rr > 0.0; ++iter) {
        apply(p, ap);
        double pap = 0.0;
        for (std::size_t j = 0; j < width; ++j) pap += p[j] * ap[j];
        if (pap <= 0.0) break;
        const double alpha = rr / pap;
        for (std::size_t j = 0; j < width; ++j) {
            w[j] += alpha * p[j];
            r[j] -= alpha * ap[j];
        }
        double rr_next = 0.0;
        for (double v : r) rr_next += v * v;
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t j = 0; j < width; ++j) p[j] = r[j] + beta * p[j];
    }

    double mid = 0.0;
    for (std::size_t j = 0; j < width; ++j) mid += w[j] * 0.5 * (mean_f[j] + mean_n[j]);
    const double bias = -mid + std::log(nf / nn);

    params.impl = LinearModel{std::move(w), bias, false};
    params.threshold = 0.0;
    params.info.iterations = iter;
    params.info.converged = rr <= target;
}

}  // namespace flakelex::detail
