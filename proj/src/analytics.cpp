#include "arena/analytics.hpp"

#include <cmath>
#include <limits>

namespace arena::analytics {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("pearson: length mismatch");
    std::size_t n = x.size();
    if (n < 2) throw DataError("pearson: need at least 2 samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;  // constant input
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

void CorrelationMatrix::validate() const {
    if (values.rows != values.cols || values.rows != feature_names.size())
        throw DataError("correlation matrix shape mismatch");
    for (std::size_t i = 0; i < values.rows; ++i) {
        if (values.at(i, i) != 1.0) throw DataError("correlation diagonal must be 1.0");
        for (std::size_t j = 0; j < values.cols; ++j) {
            if (std::abs(values.at(i, j)) > 1.0)
                throw DataError("correlation entry outside [-1,1]");
            if (values.at(i, j) != values.at(j, i))
                throw DataError("correlation matrix must be symmetric");
        }
    }
}

namespace {

CorrelationMatrix correlate_columns(const std::vector<std::vector<double>>& columns,
                                    const std::vector<Feature>& features) {
    CorrelationMatrix cm;
    cm.values = Matrix(features.size(), features.size());
    for (const Feature f : features) cm.feature_names.push_back(feature_name(f));
    for (std::size_t i = 0; i < features.size(); ++i) {
        cm.values.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < features.size(); ++j) {
            double r = pearson(columns[i], columns[j]);
            cm.values.at(i, j) = r;
            cm.values.at(j, i) = r;
        }
    }
    cm.validate();
    return cm;
}

}  // namespace

CorrelationMatrix correlation_matrix(const SectorTrace& trace,
                                     const std::vector<Feature>& features,
                                     std::optional<DayLabel> day_filter) {
    return correlation_matrix(std::vector<SectorTrace>{trace}, features, day_filter);
}

CorrelationMatrix correlation_matrix(const std::vector<SectorTrace>& traces,
                                     const std::vector<Feature>& features,
                                     std::optional<DayLabel> day_filter) {
    if (features.empty()) throw DataError("correlation_matrix: no features selected");
    std::vector<std::vector<double>> columns(features.size());
    for (const auto& trace : traces) {
        if (day_filter && trace.day_label != *day_filter) continue;
        for (const auto& [ep, rec] : trace.epochs)
            for (std::size_t i = 0; i < features.size(); ++i)
                columns[i].push_back(feature_value(rec, features[i]));
    }
    if (columns[0].size() < 2)
        throw DataError("correlation_matrix: fewer than 2 epochs after filtering");
    return correlate_columns(columns, features);
}

std::vector<double> peak_to_average(const SectorTrace& trace) {
    std::vector<double> out;
    out.reserve(trace.epochs.size());
    for (const auto& [ep, rec] : trace.epochs) {
        if (rec.avg_active_users > 0.0)
            out.push_back(rec.peak_active_users / rec.avg_active_users);
        else
            out.push_back(1.0);
    }
    return out;
}

double estimate_saturation_users(const std::vector<SectorTrace>& regular_traces,
                                 double util_threshold, bool* degenerate) {
    if (degenerate) *degenerate = false;
    if (regular_traces.empty()) throw DataError("estimate_saturation_users: no traces");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (const auto& trace : regular_traces) {
        for (const auto& [ep, rec] : trace.epochs) {
            if (rec.dl_prb_util >= util_threshold) continue;
            double x = rec.avg_active_users, y = rec.dl_prb_util;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    }
    if (n < 2) throw DataError("estimate_saturation_users: fewer than 2 usable epochs");
    double denom = static_cast<double>(n) * sxx - sx * sx;
    if (denom <= 0.0) {
        if (degenerate) *degenerate = true;
        return std::numeric_limits<double>::infinity();
    }
    double a = (static_cast<double>(n) * sxy - sx * sy) / denom;
    double c = (sy - a * sx) / static_cast<double>(n);
    if (a <= 0.0) {
        if (degenerate) *degenerate = true;
        return std::numeric_limits<double>::infinity();
    }
    return (util_threshold - c) / a;
}

DayPeriod period_of(int start_minutes) {
    int h = (start_minutes / 60) % 24;
    if (h >= 6 && h < 12) return DayPeriod::Morning;
    if (h >= 12 && h < 18) return DayPeriod::Afternoon;
    if (h >= 18) return DayPeriod::Evening;
    return DayPeriod::Night;
}

std::string to_string(DayPeriod period) {
    switch (period) {
        case DayPeriod::Morning: return "morning";
        case DayPeriod::Afternoon: return "afternoon";
        case DayPeriod::Evening: return "evening";
        case DayPeriod::Night: return "night";
    }
    return "?";
}

int count_smoothed_local_maxima(std::span<const double> series, int smooth_window,
                                int begin, int end) {
    if (series.empty() || smooth_window < 1) return 0;
    int n = static_cast<int>(series.size());
    begin = std::max(begin, 0);
    end = std::min(end, n - 1);
    if (begin >= end) return 0;

    int half = smooth_window / 2;
    std::vector<double> smooth(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        int lo = std::max(0, i - half), hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (int k = lo; k <= hi; ++k) sum += series[static_cast<std::size_t>(k)];
        smooth[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }

    int count = 0;
    int i = begin + 1;
    while (i <= end - 1) {
        // Find the extent of a plateau of equal values starting at i.
        int j = i;
        while (j + 1 <= end - 1 &&
               smooth[static_cast<std::size_t>(j + 1)] == smooth[static_cast<std::size_t>(i)])
            ++j;
        double left = smooth[static_cast<std::size_t>(i - 1)];
        double right = smooth[static_cast<std::size_t>(j + 1)];
        double v = smooth[static_cast<std::size_t>(i)];
        if (v > left && v > right) ++count;
        i = j + 1;
    }
    return count;
}

}  // namespace arena::analytics
