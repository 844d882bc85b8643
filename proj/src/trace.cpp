#include "arena/trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace arena {

namespace {

void require_finite_nonneg(double v, const char* name) {
    if (!std::isfinite(v)) throw DataError(std::string(name) + " is not finite");
    if (v < 0.0) throw DataError(std::string(name) + " is negative");
}

}  // namespace

std::string SectorId::label() const {
    return "enb" + std::to_string(enb_id) + "s" + std::to_string(sector_index) + "b" +
           std::to_string(band_mhz);
}

std::string to_string(DayLabel label) {
    return label == DayLabel::Regular ? "Regular" : "EventDay";
}

DayLabel day_label_from_string(const std::string& s) {
    if (s == "Regular") return DayLabel::Regular;
    if (s == "EventDay") return DayLabel::EventDay;
    throw DataError("unknown day label: " + s);
}

void EpochRecord::validate() const {
    require_finite_nonneg(avg_active_users, "avg_active_users");
    require_finite_nonneg(peak_active_users, "peak_active_users");
    require_finite_nonneg(dl_volume_bits, "dl_volume_bits");
    require_finite_nonneg(ul_volume_bits, "ul_volume_bits");
    require_finite_nonneg(dl_effective_time_s, "dl_effective_time_s");
    if (peak_active_users < avg_active_users)
        throw DataError("peak_active_users < avg_active_users");
    if (!(dl_prb_util >= 0.0 && dl_prb_util <= 1.0))
        throw DataError("dl_prb_util outside [0,1]");
    if ((dl_effective_time_s == 0.0) != (dl_volume_bits == 0.0))
        throw DataError("dl_effective_time_s == 0 must coincide with dl_volume_bits == 0");
}

const EpochRecord& SectorTrace::record(int epoch_index) const {
    for (const auto& [ep, rec] : epochs) {
        if (ep.index == epoch_index) return rec;
    }
    throw DataError("epoch index " + std::to_string(epoch_index) + " not in trace");
}

void SectorTrace::validate() const {
    for (std::size_t i = 0; i < epochs.size(); ++i) {
        const Epoch& ep = epochs[i].first;
        if (ep.duration_min <= 0) throw DataError("epoch duration must be positive");
        if (ep.day != day) throw DataError("epoch day does not match trace day");
        if (i > 0) {
            const Epoch& prev = epochs[i - 1].first;
            if (ep.index != prev.index + 1)
                throw DataError("epoch indices must be consecutive without duplicates");
        }
        epochs[i].second.validate();
    }
}

void EventContext::validate() const {
    if (attendees <= 0) throw DataError("event attendees must be positive");
    if (!(start_epoch < halftime_epoch && halftime_epoch < end_epoch))
        throw DataError("event epochs must satisfy start < halftime < end");
}

const EventContext* Dataset::event_on_day(int day) const {
    for (const auto& ev : events) {
        if (ev.day == day) return &ev;
    }
    return nullptr;
}

void Dataset::validate() const {
    for (const auto& ev : events) ev.validate();
    for (const auto& [sector, days] : traces) {
        int prev_day = -1;
        for (const auto& trace : days) {
            if (trace.sector != sector) throw DataError("trace filed under wrong sector");
            if (trace.day <= prev_day) throw DataError("trace days must be strictly increasing");
            prev_day = trace.day;
            trace.validate();
            if (trace.day_label == DayLabel::EventDay && event_on_day(trace.day) == nullptr)
                throw DataError("EventDay trace on day " + std::to_string(trace.day) +
                                " has no matching EventContext");
        }
    }
}

double qos_metric(double dl_volume_bits, double dl_effective_time_s) {
    require_finite_nonneg(dl_volume_bits, "dl_volume_bits");
    require_finite_nonneg(dl_effective_time_s, "dl_effective_time_s");
    if (dl_effective_time_s == 0.0) {
        if (dl_volume_bits > 0.0)
            throw DataError("positive dl volume with zero effective time");
        return 0.0;
    }
    return dl_volume_bits / dl_effective_time_s;
}

std::string feature_name(Feature f) {
    switch (f) {
        case Feature::AvgUsers: return "avg_users";
        case Feature::DlVolume: return "dl_volume";
        case Feature::Qos: return "qos";
        case Feature::PeakUsers: return "peak_users";
        case Feature::UlVolume: return "ul_volume";
        case Feature::PrbUtil: return "prb_util";
        case Feature::EffTime: return "eff_time";
    }
    return "?";
}

Feature feature_from_name(const std::string& name) {
    for (Feature f : {Feature::AvgUsers, Feature::DlVolume, Feature::Qos, Feature::PeakUsers,
                      Feature::UlVolume, Feature::PrbUtil, Feature::EffTime}) {
        if (feature_name(f) == name) return f;
    }
    throw DataError("unknown feature name: " + name);
}

double feature_value(const EpochRecord& rec, Feature f) {
    switch (f) {
        case Feature::AvgUsers: return rec.avg_active_users;
        case Feature::DlVolume: return rec.dl_volume_bits;
        case Feature::Qos: return qos_metric(rec.dl_volume_bits, rec.dl_effective_time_s);
        case Feature::PeakUsers: return rec.peak_active_users;
        case Feature::UlVolume: return rec.ul_volume_bits;
        case Feature::PrbUtil: return rec.dl_prb_util;
        case Feature::EffTime: return rec.dl_effective_time_s;
    }
    return 0.0;
}

const std::vector<Feature>& default_snapshot_features() {
    static const std::vector<Feature> order = {Feature::AvgUsers, Feature::DlVolume,
                                               Feature::Qos};
    return order;
}

Matrix slice_snapshot(const SectorTrace& trace, int end_epoch_index, int n_features,
                      int horizon) {
    const auto& order = default_snapshot_features();
    if (n_features < 1 || n_features > static_cast<int>(order.size()))
        throw DataError("n_features must be in [1," + std::to_string(order.size()) + "]");
    std::vector<Feature> features(order.begin(), order.begin() + n_features);
    return slice_snapshot(trace, end_epoch_index, features, horizon);
}

Matrix slice_snapshot(const SectorTrace& trace, int end_epoch_index,
                      const std::vector<Feature>& features, int horizon) {
    if (horizon < 1) throw DataError("snapshot horizon must be >= 1");
    if (trace.epochs.empty()) throw DataError("empty trace");
    int first_index = trace.epochs.front().first.index;
    int start = end_epoch_index - horizon + 1;
    int last_index = trace.epochs.back().first.index;
    if (end_epoch_index > last_index || start < first_index)
        throw DataError("insufficient history: need epochs [" + std::to_string(start) + "," +
                        std::to_string(end_epoch_index) + "], trace covers [" +
                        std::to_string(first_index) + "," + std::to_string(last_index) + "]");
    Matrix m(features.size(), static_cast<std::size_t>(horizon));
    for (std::size_t r = 0; r < features.size(); ++r) {
        for (int t = 0; t < horizon; ++t) {
            const auto& rec = trace.epochs[static_cast<std::size_t>(start - first_index + t)];
            m.at(r, static_cast<std::size_t>(t)) = feature_value(rec.second, features[r]);
        }
    }
    return m;
}

void FeatureStats::fit_row(std::size_t feature, const std::vector<double>& values) {
    if (min.size() <= feature) {
        min.resize(feature + 1, std::numeric_limits<double>::infinity());
        max.resize(feature + 1, -std::numeric_limits<double>::infinity());
    }
    for (double v : values) {
        min[feature] = std::min(min[feature], v);
        max[feature] = std::max(max[feature], v);
    }
}

double FeatureStats::normalize_value(std::size_t feature, double v,
                                     std::size_t* clamped) const {
    double lo = min.at(feature), hi = max.at(feature);
    if (!(hi > lo)) return 0.0;  // constant feature
    double x = (v - lo) / (hi - lo);
    if (x < 0.0 || x > 1.0) {
        if (clamped) ++*clamped;
        x = std::clamp(x, 0.0, 1.0);
    }
    return x;
}

double FeatureStats::denormalize_value(std::size_t feature, double v) const {
    double lo = min.at(feature), hi = max.at(feature);
    if (!(hi > lo)) return lo;
    return lo + v * (hi - lo);
}

FeatureStats fit_feature_stats(const std::vector<Matrix>& snapshots) {
    FeatureStats stats;
    for (const auto& m : snapshots) {
        for (std::size_t r = 0; r < m.rows; ++r) {
            std::vector<double> row(m.data.begin() + static_cast<std::ptrdiff_t>(r * m.cols),
                                    m.data.begin() + static_cast<std::ptrdiff_t>((r + 1) * m.cols));
            stats.fit_row(r, row);
        }
    }
    return stats;
}

Matrix normalize(const Matrix& snapshot, const FeatureStats& stats,
                 std::size_t* clamp_count) {
    if (stats.min.size() < snapshot.rows)
        throw DataError("feature stats cover fewer rows than the snapshot");
    Matrix out(snapshot.rows, snapshot.cols);
    std::size_t clamped = 0;
    for (std::size_t r = 0; r < snapshot.rows; ++r)
        for (std::size_t c = 0; c < snapshot.cols; ++c)
            out.at(r, c) = stats.normalize_value(r, snapshot.at(r, c), &clamped);
    if (clamp_count) *clamp_count += clamped;
    return out;
}

}  // namespace arena
