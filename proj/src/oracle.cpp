#include "svmap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "svmap/errors.hpp"

namespace svmap {

namespace {

// Kernel math duplicated on purpose; the oracle must not share the
// implementation path it is checking.
double oracle_kernel(const TrainConfig& c, const std::vector<double>& a,
                     const std::vector<double>& b) {
    if (c.kernel.kind == KernelKind::linear) {
        double dot = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
        return dot;
    }
    double d2 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double t = a[j] - b[j];
        d2 += t * t;
    }
    return std::exp(-c.kernel.gamma * d2);
}

// Euclidean projection onto {0 <= a <= C, y'a = 0}: clip(z - lambda*y) with
// lambda found by bisection; the constraint sum is monotone in lambda.
std::vector<double> project(const std::vector<double>& z, const std::vector<int>& y, double C) {
    auto eq_residual = [&](double lambda) {
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i)
            s += y[i] * std::clamp(z[i] - lambda * y[i], 0.0, C);
        return s;
    };
    double span = C + 1.0;
    for (double v : z) span = std::max(span, std::abs(v) + C + 1.0);
    double lo = -span, hi = span;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (eq_residual(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    double lambda = 0.5 * (lo + hi);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::clamp(z[i] - lambda * y[i], 0.0, C);
    return out;
}

}  // namespace

SvmModel oracle_solve(const Dataset& d, const TrainConfig& config) {
    const std::size_t n = d.size();
    if (n > 50) throw TrainingError("oracle_solve is limited to n <= 50");
    if (n < 2) throw TrainingError("need at least 2 samples to train");
    const double C = config.C;

    std::vector<int> y(n);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = d.samples[i].label;
        if (y[i] == 1) has_pos = true;
        else if (y[i] == -1) has_neg = true;
        else throw DataError("oracle_solve requires -1/+1 labels");
    }
    if (!has_pos || !has_neg) throw TrainingError("single-class dataset, cannot train");

    std::vector<std::vector<double>> Q(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double q = y[i] * y[j] *
                       oracle_kernel(config, d.samples[i].features, d.samples[j].features);
            Q[i][j] = q;
            Q[j][i] = q;
        }

    // Gershgorin bound on the largest eigenvalue sets the base step.
    double lipschitz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(Q[i][j]);
        lipschitz = std::max(lipschitz, row);
    }
    if (lipschitz <= 0.0) lipschitz = 1.0;
    const double base_step = 1.0 / lipschitz;

    std::vector<double> alpha(n, 0.0), grad(n, -1.0), z(n), dir(n), qd(n);
    auto objective = [&]() {
        double quad = 0.0, lin = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double qi = 0.0;
            for (std::size_t j = 0; j < n; ++j) qi += Q[i][j] * alpha[j];
            quad += alpha[i] * qi;
            lin += alpha[i];
        }
        return 0.5 * quad - lin;
    };

    double best = objective();
    int stall = 0;
    for (int it = 0; it < 500000 && stall < 200; ++it) {
        for (std::size_t i = 0; i < n; ++i) z[i] = alpha[i] - base_step * grad[i];
        std::vector<double> p = project(z, y, C);
        double dir_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dir[i] = p[i] - alpha[i];
            dir_norm = std::max(dir_norm, std::abs(dir[i]));
        }
        if (dir_norm < 1e-14) break;

        // Exact line search along dir within [0,1]: F is quadratic in t.
        double gd = 0.0, dqd = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double qi = 0.0;
            for (std::size_t j = 0; j < n; ++j) qi += Q[i][j] * dir[j];
            qd[i] = qi;
            gd += grad[i] * dir[i];
            dqd += dir[i] * qi;
        }
        double t = dqd > 0.0 ? std::clamp(-gd / dqd, 0.0, 1.0) : 1.0;
        if (t <= 0.0) break;
        for (std::size_t i = 0; i < n; ++i) {
            alpha[i] += t * dir[i];
            grad[i] += t * qd[i];
        }

        double f = objective();
        if (f < best - (1.0 + std::abs(best)) * 1e-16) {
            best = f;
            stall = 0;
        } else {
            ++stall;
        }
    }

    // Bias rule mirrors the trained-model contract: average y_i - (Q alpha)_i
    // over unbounded alphas, else midpoint of the feasible interval.
    double bias;
    {
        double guard = std::min(1e-9, C * 1e-9);
        double sum = 0.0;
        std::size_t count = 0;
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            double v = -y[k] * grad[k];
            if (alpha[k] > guard && alpha[k] < C - guard) {
                sum += v;
                ++count;
            }
            bool in_up = (y[k] == 1 && alpha[k] < C) || (y[k] == -1 && alpha[k] > 0.0);
            bool in_low = (y[k] == 1 && alpha[k] > 0.0) || (y[k] == -1 && alpha[k] < C);
            if (in_up) m_up = std::max(m_up, v);
            if (in_low) m_low = std::min(m_low, v);
        }
        bias = count > 0 ? sum / static_cast<double>(count) : (m_up + m_low) / 2.0;
    }

    SvmModel model;
    model.kernel = config.kernel;
    model.bias = bias;
    model.objective = objective();
    model.converged = true;
    for (std::size_t k = 0; k < n; ++k) {
        if (alpha[k] > config.sv_epsilon) {
            model.support_vectors.push_back(d.samples[k]);
            model.alphas.push_back(alpha[k]);
        }
    }
    if (config.kernel.kind == KernelKind::linear) {
        model.weights.assign(d.dim, 0.0);
        for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
            const Sample& sv = model.support_vectors[s];
            double coef = model.alphas[s] * sv.label;
            for (std::size_t f = 0; f < d.dim; ++f) model.weights[f] += coef * sv.features[f];
        }
    }
    return model;
}

}  // namespace svmap
