#ifndef ARENA_ARIMA_HPP
#define ARENA_ARIMA_HPP

#include <span>
#include <vector>

#include "arena/common.hpp"

namespace arena::forecast {

/// d-fold first differencing; output length shrinks by d.
std::vector<double> difference(std::span<const double> series, int d);

/// Inverse of difference. `initial_values[k]` is the level-k value that
/// immediately precedes series[0] (for full reconstruction: the dropped
/// heads; for forecast continuation: the tails of the observed series).
/// Returns length(series) + d values whose first d entries reproduce the
/// seeds' levels; undifference(difference(x,d), d, heads(x,d)) == x.
std::vector<double> undifference(std::span<const double> series, int d,
                                 std::span<const double> initial_values);

/// The level-k heads dropped by difference(), as needed to undo it.
std::vector<double> difference_heads(std::span<const double> series, int d);

struct ArimaModel {
    int p = 0, d = 0, q = 0;
    double intercept = 0.0;
    std::vector<double> phi;     // AR coefficients, lag 1..p
    std::vector<double> theta;   // MA coefficients, lag 1..q
    std::vector<double> diff_tail;   // last p values of the differenced series
    std::vector<double> resid_tail;  // last q in-sample residuals
    std::vector<double> orig_tail;   // last d original values, for undifferencing
    double css = 0.0;                // conditional sum of squares at the fit
};

/// Fits ARIMA(p,d,q). AR-only models use least squares; q > 0 uses a
/// Hannan-Rissanen start refined by conditional-sum-of-squares descent.
/// Requires length >= 10*(p+q+1) after differencing.
ArimaModel arima_fit(std::span<const double> series, int p, int d, int q);

/// Iterates the fitted recursion n_steps ahead (future shocks zero) and
/// undifferences back to the original scale.
std::vector<double> arima_forecast(const ArimaModel& model, int n_steps);

struct ArimaOrder {
    int p = 0, d = 0, q = 0;
};

struct GridSearchResult {
    ArimaOrder order;
    double validation_mse = 0.0;
};

/// Exhaustive search over p <= p_max, d <= d_max, q <= q_max scored by
/// forecast MSE on a chronological validation suffix (last 25%, at least 8
/// points). Ties break on smallest p+q, then smallest d. Deterministic.
GridSearchResult arima_grid_search(std::span<const double> series, int p_max, int d_max,
                                   int q_max);

}  // namespace arena::forecast

#endif
