#include "arena/arima.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace arena::forecast {

std::vector<double> difference(std::span<const double> series, int d) {
    if (d < 0) throw DataError("difference: d must be >= 0");
    if (d >= static_cast<int>(series.size()))
        throw DataError("difference: d >= series length");
    std::vector<double> out(series.begin(), series.end());
    for (int k = 0; k < d; ++k) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

std::vector<double> difference_heads(std::span<const double> series, int d) {
    std::vector<double> heads;
    std::vector<double> cur(series.begin(), series.end());
    for (int k = 0; k < d; ++k) {
        heads.push_back(cur.front());
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) cur[i] = cur[i + 1] - cur[i];
        cur.pop_back();
    }
    return heads;
}

std::vector<double> undifference(std::span<const double> series, int d,
                                 std::span<const double> initial_values) {
    if (static_cast<int>(initial_values.size()) != d)
        throw DataError("undifference: need exactly d initial values");
    std::vector<double> cur(series.begin(), series.end());
    for (int level = d - 1; level >= 0; --level) {
        std::vector<double> out(cur.size() + 1);
        out[0] = initial_values[static_cast<std::size_t>(level)];
        for (std::size_t i = 0; i < cur.size(); ++i) out[i + 1] = out[i] + cur[i];
        cur = std::move(out);
    }
    return cur;
}

namespace {

void check_finite(std::span<const double> series) {
    for (double v : series)
        if (!std::isfinite(v)) throw DataError("arima: series contains non-finite values");
}

bool near_constant(std::span<const double> w) {
    if (w.empty()) return true;
    double lo = w[0], hi = w[0];
    for (double v : w) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double scale = std::max(std::abs(lo), std::abs(hi));
    return hi - lo <= 1e-12 * std::max(1.0, scale);
}

// Ridge-stabilized least squares: beta = argmin |X b - y|^2 + lambda |b|^2.
Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::MatrixXd gram = X.transpose() * X;
    double lambda = 1e-8 * std::max(1.0, gram.trace() / static_cast<double>(gram.rows()));
    gram.diagonal().array() += lambda;
    Eigen::VectorXd beta = gram.ldlt().solve(X.transpose() * y);
    if (!beta.allFinite()) throw DataError("arima: singular design matrix");
    return beta;
}

// Residuals of the ARMA recursion with zero pre-sample shocks, starting at
// index p of w.
std::vector<double> css_residuals(const std::vector<double>& w, double c,
                                  const std::vector<double>& phi,
                                  const std::vector<double>& theta) {
    int p = static_cast<int>(phi.size()), q = static_cast<int>(theta.size());
    int n = static_cast<int>(w.size());
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (int t = p; t < n; ++t) {
        double pred = c;
        for (int i = 1; i <= p; ++i) pred += phi[static_cast<std::size_t>(i - 1)] * w[static_cast<std::size_t>(t - i)];
        for (int j = 1; j <= q; ++j) {
            int idx = t - j;
            if (idx >= p) pred += theta[static_cast<std::size_t>(j - 1)] * e[static_cast<std::size_t>(idx)];
        }
        e[static_cast<std::size_t>(t)] = w[static_cast<std::size_t>(t)] - pred;
    }
    return e;
}

double css_value(const std::vector<double>& w, double c, const std::vector<double>& phi,
                 const std::vector<double>& theta) {
    auto e = css_residuals(w, c, phi, theta);
    double s = 0.0;
    for (std::size_t t = phi.size(); t < e.size(); ++t) s += e[t] * e[t];
    return s;
}

// Gradient of the conditional sum of squares w.r.t. [c, phi..., theta...],
// using the recursive sensitivities of the residuals.
std::vector<double> css_gradient(const std::vector<double>& w, double c,
                                 const std::vector<double>& phi,
                                 const std::vector<double>& theta) {
    int p = static_cast<int>(phi.size()), q = static_cast<int>(theta.size());
    int n = static_cast<int>(w.size());
    int dim = 1 + p + q;
    auto e = css_residuals(w, c, phi, theta);
    // de[t][k]: sensitivity of e_t to parameter k; only the last q rows of
    // history are needed but n is small enough to keep all.
    std::vector<std::vector<double>> de(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    std::vector<double> grad(static_cast<std::size_t>(dim), 0.0);
    for (int t = p; t < n; ++t) {
        auto& row = de[static_cast<std::size_t>(t)];
        row[0] = -1.0;
        for (int i = 1; i <= p; ++i) row[static_cast<std::size_t>(i)] = -w[static_cast<std::size_t>(t - i)];
        for (int j = 1; j <= q; ++j) {
            int idx = t - j;
            if (idx >= p) row[static_cast<std::size_t>(1 + p + j - 1)] -= e[static_cast<std::size_t>(idx)];
        }
        for (int j = 1; j <= q; ++j) {
            int idx = t - j;
            if (idx >= p) {
                const auto& prev = de[static_cast<std::size_t>(idx)];
                double th = theta[static_cast<std::size_t>(j - 1)];
                for (int k = 0; k < dim; ++k) row[static_cast<std::size_t>(k)] -= th * prev[static_cast<std::size_t>(k)];
            }
        }
        for (int k = 0; k < dim; ++k)
            grad[static_cast<std::size_t>(k)] += 2.0 * e[static_cast<std::size_t>(t)] * row[static_cast<std::size_t>(k)];
    }
    return grad;
}

}  // namespace

ArimaModel arima_fit(std::span<const double> series, int p, int d, int q) {
    if (p < 0 || d < 0 || q < 0) throw DataError("arima: orders must be >= 0");
    check_finite(series);
    std::vector<double> w = difference(series, d);
    int n = static_cast<int>(w.size());
    if (n < 10 * (p + q + 1))
        throw DataError("arima: need length >= " + std::to_string(10 * (p + q + 1)) +
                        " after differencing, got " + std::to_string(n));

    ArimaModel model;
    model.p = p;
    model.d = d;
    model.q = q;
    model.phi.assign(static_cast<std::size_t>(p), 0.0);
    model.theta.assign(static_cast<std::size_t>(q), 0.0);

    if (near_constant(w)) {
        model.intercept = w.empty() ? 0.0 : w[0];
    } else if (q == 0) {
        if (p == 0) {
            double mean = 0.0;
            for (double v : w) mean += v;
            model.intercept = mean / static_cast<double>(n);
        } else {
            Eigen::MatrixXd X(n - p, p + 1);
            Eigen::VectorXd y(n - p);
            for (int t = p; t < n; ++t) {
                X(t - p, 0) = 1.0;
                for (int i = 1; i <= p; ++i) X(t - p, i) = w[static_cast<std::size_t>(t - i)];
                y(t - p) = w[static_cast<std::size_t>(t)];
            }
            Eigen::VectorXd beta = ridge_solve(X, y);
            model.intercept = beta(0);
            for (int i = 0; i < p; ++i) model.phi[static_cast<std::size_t>(i)] = beta(i + 1);
        }
    } else {
        // Hannan-Rissanen start: long-AR residuals, then joint regression on
        // lagged values and lagged residuals.
        int m = std::min(std::max(10, 2 * (p + q)), n / 3);
        std::vector<double> resid(static_cast<std::size_t>(n), 0.0);
        {
            Eigen::MatrixXd X(n - m, m + 1);
            Eigen::VectorXd y(n - m);
            for (int t = m; t < n; ++t) {
                X(t - m, 0) = 1.0;
                for (int i = 1; i <= m; ++i) X(t - m, i) = w[static_cast<std::size_t>(t - i)];
                y(t - m) = w[static_cast<std::size_t>(t)];
            }
            Eigen::VectorXd beta = ridge_solve(X, y);
            for (int t = m; t < n; ++t) {
                double pred = beta(0);
                for (int i = 1; i <= m; ++i) pred += beta(i) * w[static_cast<std::size_t>(t - i)];
                resid[static_cast<std::size_t>(t)] = w[static_cast<std::size_t>(t)] - pred;
            }
        }
        int start = std::max(m, std::max(p, q));
        Eigen::MatrixXd X(n - start, 1 + p + q);
        Eigen::VectorXd y(n - start);
        for (int t = start; t < n; ++t) {
            X(t - start, 0) = 1.0;
            for (int i = 1; i <= p; ++i) X(t - start, i) = w[static_cast<std::size_t>(t - i)];
            for (int j = 1; j <= q; ++j)
                X(t - start, p + j) = resid[static_cast<std::size_t>(t - j)];
            y(t - start) = w[static_cast<std::size_t>(t)];
        }
        Eigen::VectorXd beta = ridge_solve(X, y);
        model.intercept = beta(0);
        for (int i = 0; i < p; ++i) model.phi[static_cast<std::size_t>(i)] = beta(i + 1);
        for (int j = 0; j < q; ++j) model.theta[static_cast<std::size_t>(j)] = beta(1 + p + j);

        // CSS polish with backtracking gradient descent.
        double cur = css_value(w, model.intercept, model.phi, model.theta);
        for (int iter = 0; iter < 200; ++iter) {
            auto grad = css_gradient(w, model.intercept, model.phi, model.theta);
            double gnorm2 = 0.0;
            for (double g : grad) gnorm2 += g * g;
            if (gnorm2 <= 1e-18) break;
            double step = 1.0;
            bool improved = false;
            for (int bt = 0; bt < 50; ++bt) {
                double c2 = model.intercept - step * grad[0];
                std::vector<double> phi2 = model.phi, theta2 = model.theta;
                for (int i = 0; i < p; ++i) phi2[static_cast<std::size_t>(i)] -= step * grad[static_cast<std::size_t>(1 + i)];
                for (int j = 0; j < q; ++j) theta2[static_cast<std::size_t>(j)] -= step * grad[static_cast<std::size_t>(1 + p + j)];
                double trial = css_value(w, c2, phi2, theta2);
                if (std::isfinite(trial) && trial < cur - 1e-12 * std::max(1.0, cur)) {
                    model.intercept = c2;
                    model.phi = std::move(phi2);
                    model.theta = std::move(theta2);
                    double rel = (cur - trial) / std::max(1.0, cur);
                    cur = trial;
                    improved = true;
                    if (rel < 1e-10) iter = 200;  // converged
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
    }

    auto e = css_residuals(w, model.intercept, model.phi, model.theta);
    double css = 0.0;
    for (std::size_t t = static_cast<std::size_t>(p); t < e.size(); ++t) css += e[t] * e[t];
    model.css = css;

    if (p > 0) model.diff_tail.assign(w.end() - p, w.end());
    if (q > 0) model.resid_tail.assign(e.end() - q, e.end());
    if (d > 0) model.orig_tail.assign(series.end() - d, series.end());
    return model;
}

std::vector<double> arima_forecast(const ArimaModel& model, int n_steps) {
    if (n_steps < 0) throw DataError("arima_forecast: n_steps must be >= 0");
    std::vector<double> recent = model.diff_tail;   // chronological, most recent last
    std::vector<double> shocks = model.resid_tail;  // chronological
    std::vector<double> diffs;
    diffs.reserve(static_cast<std::size_t>(n_steps));
    for (int s = 0; s < n_steps; ++s) {
        double v = model.intercept;
        for (int i = 1; i <= model.p; ++i)
            v += model.phi[static_cast<std::size_t>(i - 1)] * recent[recent.size() - static_cast<std::size_t>(i)];
        for (int j = 1; j <= model.q; ++j)
            v += model.theta[static_cast<std::size_t>(j - 1)] * shocks[shocks.size() - static_cast<std::size_t>(j)];
        diffs.push_back(v);
        if (model.p > 0) {
            recent.erase(recent.begin());
            recent.push_back(v);
        }
        if (model.q > 0) {
            shocks.erase(shocks.begin());
            shocks.push_back(0.0);  // future shocks unknown
        }
    }

    if (model.d == 0) return diffs;
    // Per-step undifferencing seeded from the observed tails at each level.
    std::vector<double> tails(static_cast<std::size_t>(model.d));
    {
        std::vector<double> cur = model.orig_tail;
        for (int k = 0; k < model.d; ++k) {
            tails[static_cast<std::size_t>(k)] = cur.back();
            for (std::size_t i = 0; i + 1 < cur.size(); ++i) cur[i] = cur[i + 1] - cur[i];
            cur.pop_back();
        }
    }
    std::vector<double> out;
    out.reserve(diffs.size());
    for (double v : diffs) {
        for (int k = model.d - 1; k >= 0; --k) {
            v = tails[static_cast<std::size_t>(k)] + v;
            tails[static_cast<std::size_t>(k)] = v;
        }
        out.push_back(v);
    }
    return out;
}

GridSearchResult arima_grid_search(std::span<const double> series, int p_max, int d_max,
                                   int q_max) {
    if (p_max < 0 || d_max < 0 || q_max < 0) throw DataError("arima_grid_search: empty grid");
    int n = static_cast<int>(series.size());
    int val_len = std::max(8, n / 4);
    if (n - val_len < 12) throw DataError("arima_grid_search: series too short");
    std::span<const double> train = series.subspan(0, static_cast<std::size_t>(n - val_len));
    std::span<const double> val = series.subspan(static_cast<std::size_t>(n - val_len));

    bool found = false;
    GridSearchResult best;
    for (int d = 0; d <= d_max; ++d) {
        for (int p = 0; p <= p_max; ++p) {
            for (int q = 0; q <= q_max; ++q) {
                double m = 0.0;
                try {
                    ArimaModel model = arima_fit(train, p, d, q);
                    auto fc = arima_forecast(model, val_len);
                    for (int i = 0; i < val_len; ++i) {
                        double diff = fc[static_cast<std::size_t>(i)] - val[static_cast<std::size_t>(i)];
                        m += diff * diff;
                    }
                    m /= static_cast<double>(val_len);
                    if (!std::isfinite(m)) continue;
                } catch (const DataError&) {
                    continue;  // infeasible candidate (too short, singular)
                }
                bool better = false;
                if (!found) {
                    better = true;
                } else {
                    double tie = std::max(1e-15, 1e-9 * std::max(best.validation_mse, m));
                    if (m < best.validation_mse - tie) {
                        better = true;
                    } else if (std::abs(m - best.validation_mse) <= tie) {
                        auto key = [](const ArimaOrder& o) {
                            return std::tuple<int, int, int>(o.p + o.q, o.d, o.p);
                        };
                        better = key(ArimaOrder{p, d, q}) < key(best.order);
                    }
                }
                if (better) {
                    best.order = ArimaOrder{p, d, q};
                    best.validation_mse = m;
                    found = true;
                }
            }
        }
    }
    if (!found) throw DataError("arima_grid_search: no feasible candidate in grid");
    return best;
}

}  // namespace arena::forecast
