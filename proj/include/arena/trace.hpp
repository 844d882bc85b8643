#ifndef ARENA_TRACE_HPP
#define ARENA_TRACE_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arena/common.hpp"

namespace arena {

constexpr int kEpochsPerDay = 96;        // 15-minute epochs
constexpr int kDefaultEpochMinutes = 15;
constexpr double kEpochSeconds = 900.0;

/// One monitoring interval. `index` counts epochs within `day`; the start
/// time in minutes-since-midnight is index * duration_min.
struct Epoch {
    int day = 0;
    int index = 0;
    int duration_min = kDefaultEpochMinutes;

    int start_minutes() const { return index * duration_min; }
    double start_hours() const { return start_minutes() / 60.0; }

    auto operator<=>(const Epoch&) const = default;
};

struct SectorId {
    int enb_id = 0;
    int sector_index = 0;
    int band_mhz = 0;

    auto operator<=>(const SectorId&) const = default;
    std::string label() const;
};

enum class DayLabel { Regular, EventDay };

std::string to_string(DayLabel label);
DayLabel day_label_from_string(const std::string& s);

/// Aggregated per-epoch KPIs of one sector. Volumes and effective time are
/// per-epoch sums over users; user counts are the epoch average / maximum.
struct EpochRecord {
    double avg_active_users = 0.0;
    double peak_active_users = 0.0;
    double dl_volume_bits = 0.0;
    double ul_volume_bits = 0.0;
    double dl_prb_util = 0.0;       // in [0, 1]
    double dl_effective_time_s = 0.0;

    /// Throws DataError if any invariant is broken (peak >= avg,
    /// util in [0,1], eff_time == 0 iff volume == 0, all finite and >= 0).
    void validate() const;

    bool operator==(const EpochRecord&) const = default;
};

/// One sector, one day of consecutive epochs.
struct SectorTrace {
    SectorId sector;
    int day = 0;
    DayLabel day_label = DayLabel::Regular;
    std::vector<std::pair<Epoch, EpochRecord>> epochs;

    const EpochRecord& record(int epoch_index) const;
    void validate() const;

    bool operator==(const SectorTrace&) const = default;
};

/// Contextual description of one mass event. Epoch references are indices
/// within `day`.
struct EventContext {
    int day = 0;
    int attendees = 0;
    int start_epoch = 0;
    int halftime_epoch = 0;
    int end_epoch = 0;
    std::string event_type = "football";

    void validate() const;

    bool operator==(const EventContext&) const = default;
};

struct Dataset {
    // One trace per (sector, day); days sorted ascending per sector.
    std::map<SectorId, std::vector<SectorTrace>> traces;
    std::vector<EventContext> events;
    int epoch_duration_min = kDefaultEpochMinutes;

    const EventContext* event_on_day(int day) const;
    /// Checks all trace invariants and that every EventDay trace has a
    /// matching EventContext.
    void validate() const;

    bool operator==(const Dataset&) const = default;
};

/// Served downlink volume per unit of effective downlink time (bit/s).
/// Both zero means an idle epoch and yields 0; zero time with positive
/// volume is an inconsistent record and throws DataError.
double qos_metric(double dl_volume_bits, double dl_effective_time_s);

/// Feature rows available for snapshots and analytics, in canonical order.
enum class Feature {
    AvgUsers,
    DlVolume,
    Qos,
    PeakUsers,
    UlVolume,
    PrbUtil,
    EffTime,
};

std::string feature_name(Feature f);
Feature feature_from_name(const std::string& name);
double feature_value(const EpochRecord& rec, Feature f);

/// Default snapshot feature order: rows are [avg_users, dl_volume, qos].
const std::vector<Feature>& default_snapshot_features();

/// F x T window of feature rows ending at `end_epoch_index` inclusive.
/// n_features selects a prefix of the default feature order (1..3).
/// Throws DataError if the trace lacks T epochs of history.
Matrix slice_snapshot(const SectorTrace& trace, int end_epoch_index,
                      int n_features, int horizon);

/// Explicit-feature variant of slice_snapshot.
Matrix slice_snapshot(const SectorTrace& trace, int end_epoch_index,
                      const std::vector<Feature>& features, int horizon);

/// Per-feature min/max collected from training data only.
struct FeatureStats {
    std::vector<double> min;
    std::vector<double> max;

    void fit_row(std::size_t feature, const std::vector<double>& values);
    double normalize_value(std::size_t feature, double v, std::size_t* clamped) const;
    double denormalize_value(std::size_t feature, double v) const;
};

/// Accumulates stats over snapshots row by row.
FeatureStats fit_feature_stats(const std::vector<Matrix>& snapshots);

/// Min-max normalization to [0,1] per feature row. Values outside the
/// training range are clamped; *clamp_count (if non-null) receives the
/// number of clamped entries. Constant features map to 0.
Matrix normalize(const Matrix& snapshot, const FeatureStats& stats,
                 std::size_t* clamp_count = nullptr);

}  // namespace arena

#endif
