#ifndef ARENA_ANALYTICS_HPP
#define ARENA_ANALYTICS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arena/trace.hpp"

namespace arena::analytics {

/// Sample Pearson correlation. Requires equal lengths >= 2; returns 0 when
/// either series is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
    std::vector<std::string> feature_names;
    Matrix values;  // symmetric, unit diagonal, entries in [-1, 1]

    void validate() const;
};

/// Pairwise Pearson correlation over the selected feature columns of one
/// day's trace. A day_filter that does not match the trace leaves no epochs
/// and is an error.
CorrelationMatrix correlation_matrix(const SectorTrace& trace,
                                     const std::vector<Feature>& features,
                                     std::optional<DayLabel> day_filter = std::nullopt);

/// Multi-day variant: concatenates the epochs of all traces matching the
/// filter before correlating.
CorrelationMatrix correlation_matrix(const std::vector<SectorTrace>& traces,
                                     const std::vector<Feature>& features,
                                     std::optional<DayLabel> day_filter = std::nullopt);

/// Per-epoch peak/average active-user ratio; epochs with zero average get 1.
std::vector<double> peak_to_average(const SectorTrace& trace);

/// Least-squares estimate of the user count that exhausts a sector's PRBs,
/// from regular-day epochs with util below util_threshold: fits
/// util = a*users + c and returns (util_threshold - c) / a. A non-positive
/// slope yields +infinity and sets *degenerate.
double estimate_saturation_users(const std::vector<SectorTrace>& regular_traces,
                                 double util_threshold = 0.95,
                                 bool* degenerate = nullptr);

enum class DayPeriod { Morning, Afternoon, Evening, Night };

/// Time-of-day partition: morning 6-12h, afternoon 12-18h, evening 18-24h,
/// night 0-6h.
DayPeriod period_of(int start_minutes);
std::string to_string(DayPeriod period);

/// Counts local maxima of the series after smoothing with a centered
/// moving average of `smooth_window` epochs, within [begin, end] inclusive.
/// A plateau (run of equal smoothed values strictly above both neighbours)
/// counts as one maximum.
int count_smoothed_local_maxima(std::span<const double> series, int smooth_window,
                                int begin, int end);

}  // namespace arena::analytics

#endif
