#include "arena/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "arena/rng.hpp"

namespace arena::sim {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr double kGolden = 0.6180339887498949;

double gauss_bump(double t, double center, double sigma) {
    double z = (t - center) / sigma;
    return std::exp(-0.5 * z * z);
}

}  // namespace

SimParams::SimParams() { diurnal_profile = default_diurnal_profile(); }

double SimParams::saturation_for_band(int band_mhz) const {
    auto it = saturation_users.find(band_mhz);
    if (it == saturation_users.end())
        throw DataError("no saturation_users entry for band " + std::to_string(band_mhz));
    return it->second;
}

void SimParams::validate() const {
    if (n_sectors < 1) throw DataError("n_sectors must be >= 1");
    if (bands.empty()) throw DataError("band set must not be empty");
    if (event_gain < 1.0) throw DataError("event_gain must be >= 1");
    if (noise_sigma < 0.0) throw DataError("noise_sigma must be >= 0");
    if (qos_free <= 0.0) throw DataError("qos_free must be positive");
    if (vol_per_user_bits <= 0.0) throw DataError("vol_per_user_bits must be positive");
    for (int band : bands) {
        if (saturation_for_band(band) <= 0.0)
            throw DataError("saturation_users must be positive for band " + std::to_string(band));
    }
}

std::array<double, kEpochsPerDay> default_diurnal_profile() {
    std::array<double, kEpochsPerDay> profile{};
    const double trough = 8.0, plateau = 60.0;
    for (int e = 0; e < kEpochsPerDay; ++e) {
        double h = (e + 0.5) * 0.25;  // hours
        double shape = logistic((h - 7.0) / 1.5) * logistic((23.0 - h) / 1.5);
        profile[static_cast<std::size_t>(e)] = trough + (plateau - trough) * shape;
    }
    return profile;
}

double sector_scale(int sector_index) {
    double frac = std::fmod(kGolden * (sector_index + 1), 1.0);
    return 0.8 + 0.4 * frac;
}

EpochRecord make_record(double avg_users, double pta, double util_noise,
                        const SimParams& params, int band_mhz) {
    double sat = params.saturation_for_band(band_mhz);
    EpochRecord rec;
    rec.avg_active_users = avg_users;
    rec.peak_active_users = avg_users * (1.0 + std::max(0.0, pta));
    double served_users = std::min(avg_users, sat);
    rec.dl_volume_bits = served_users * params.vol_per_user_bits;
    rec.ul_volume_bits = params.ul_ratio * avg_users * params.vol_per_user_bits;
    rec.dl_effective_time_s = avg_users * params.vol_per_user_bits / params.qos_free;
    if (avg_users >= sat) {
        rec.dl_prb_util = 1.0;
    } else {
        rec.dl_prb_util = std::clamp(avg_users / sat * (1.0 + util_noise), 0.0, 1.0);
    }
    return rec;
}

namespace {

struct DayNoise {
    std::vector<double> user_factor;  // mean-one lognormal per epoch
    std::vector<double> pta_factor;   // mean-one lognormal per epoch
    std::vector<double> util_noise;   // zero-mean gaussian per epoch
};

// Draw order is fixed per (seed, day, sector): parallel generation across
// days/sectors matches serial generation bit for bit.
DayNoise draw_day_noise(const SimParams& params, int day, int sector_index) {
    DayNoise n;
    n.user_factor.resize(kEpochsPerDay, 1.0);
    n.pta_factor.resize(kEpochsPerDay, 1.0);
    n.util_noise.resize(kEpochsPerDay, 0.0);
    if (params.noise_sigma <= 0.0) return n;
    Rng rng(split_seed(params.rng_seed, 0x5eed0001ULL, static_cast<std::uint64_t>(day),
                       static_cast<std::uint64_t>(sector_index)));
    double pta_sigma = params.pta_sigma_scale * params.noise_sigma;
    double util_sigma = params.util_noise_scale * params.noise_sigma;
    for (int e = 0; e < kEpochsPerDay; ++e) {
        n.user_factor[static_cast<std::size_t>(e)] = rng.lognormal_unit(params.noise_sigma);
        n.pta_factor[static_cast<std::size_t>(e)] = rng.lognormal_unit(pta_sigma);
        n.util_noise[static_cast<std::size_t>(e)] = rng.normal(0.0, util_sigma);
    }
    return n;
}

int band_for_sector(const SimParams& params, int sector_index) {
    return params.bands[static_cast<std::size_t>(sector_index) % params.bands.size()];
}

SectorTrace gen_day_for_sector(const SimParams& params, int day, int sector_index,
                               const EventContext* event) {
    double scale = sector_scale(sector_index);
    int band = band_for_sector(params, sector_index);
    DayNoise noise = draw_day_noise(params, day, sector_index);

    double regular_peak = 0.0;
    for (double v : params.diurnal_profile) regular_peak = std::max(regular_peak, v);
    regular_peak *= scale;

    // Surge amplitude calibrated so the pre-event peak reaches
    // event_gain * regular peak at the reference attendance.
    double surge_amp = 0.0;
    double pre_center = 0.0, half_center = 0.0, post_center = 0.0;
    bool in_event = event != nullptr && event->attendees > 0;
    if (in_event) {
        pre_center = event->start_epoch - params.surge_pre_offset_epochs;
        half_center = event->halftime_epoch;
        post_center = event->end_epoch + params.surge_post_offset_epochs;
        int pre_idx = std::clamp(static_cast<int>(std::lround(pre_center)), 0, kEpochsPerDay - 1);
        double base_at_pre = params.diurnal_profile[static_cast<std::size_t>(pre_idx)] * scale;
        double attendance_ratio =
            static_cast<double>(event->attendees) / static_cast<double>(params.reference_attendees);
        surge_amp = std::max(0.0, params.event_gain * regular_peak - base_at_pre) *
                    attendance_ratio;
    }

    SectorTrace trace;
    trace.sector = SectorId{sector_index / 3 + 1, sector_index, band};
    trace.day = day;
    trace.day_label = (event != nullptr) ? DayLabel::EventDay : DayLabel::Regular;
    trace.epochs.reserve(kEpochsPerDay);

    for (int e = 0; e < kEpochsPerDay; ++e) {
        double users = params.diurnal_profile[static_cast<std::size_t>(e)] * scale;
        double pta_mean = params.pta_regular_mean;
        if (in_event) {
            double t = static_cast<double>(e);
            double bump =
                params.surge_amp_pre * gauss_bump(t, pre_center, params.surge_sigma_pre) +
                params.surge_amp_half * gauss_bump(t, half_center, params.surge_sigma_half) +
                params.surge_amp_post * gauss_bump(t, post_center, params.surge_sigma_post);
            users += surge_amp * bump;
            // Control-plane volatility roughly doubles through the event window.
            if (e >= event->start_epoch - params.surge_pre_offset_epochs - 2 &&
                e <= event->end_epoch + params.surge_post_offset_epochs + 8)
                pta_mean = params.pta_event_mean;
        }
        users *= noise.user_factor[static_cast<std::size_t>(e)];
        double pta = pta_mean * noise.pta_factor[static_cast<std::size_t>(e)];
        EpochRecord rec =
            make_record(users, pta, noise.util_noise[static_cast<std::size_t>(e)], params, band);
        trace.epochs.emplace_back(Epoch{day, e, kDefaultEpochMinutes}, rec);
    }
    return trace;
}

std::vector<SectorTrace> gen_day(const SimParams& params, int day, const EventContext* event) {
    params.validate();
    std::vector<SectorTrace> traces(static_cast<std::size_t>(params.n_sectors));
    for (int s = 0; s < params.n_sectors; ++s)
        traces[static_cast<std::size_t>(s)] = gen_day_for_sector(params, day, s, event);
    return traces;
}

}  // namespace

std::vector<SectorTrace> gen_regular_day(const SimParams& params, int day) {
    return gen_day(params, day, nullptr);
}

std::vector<SectorTrace> gen_event_day(const SimParams& params, const EventContext& context) {
    if (context.attendees > 0) context.validate();
    if (context.end_epoch >= kEpochsPerDay || context.start_epoch < 0)
        throw DataError("event epochs must lie within the day");
    return gen_day(params, context.day, &context);
}

Dataset gen_season(const SimParams& params, int n_regular_days,
                   const std::vector<EventContext>& event_specs) {
    if (n_regular_days < 0) throw DataError("n_regular_days must be >= 0");
    params.validate();
    int total_days = n_regular_days + static_cast<int>(event_specs.size());

    std::map<int, const EventContext*> by_day;
    for (const auto& ev : event_specs) {
        if (ev.day < 0 || ev.day >= total_days)
            throw DataError("event day " + std::to_string(ev.day) + " outside season of " +
                            std::to_string(total_days) + " days");
        if (!by_day.emplace(ev.day, &ev).second)
            throw DataError("overlapping event days: day " + std::to_string(ev.day));
    }

    Dataset dataset;
    dataset.events = event_specs;
    std::sort(dataset.events.begin(), dataset.events.end(),
              [](const EventContext& a, const EventContext& b) { return a.day < b.day; });

    std::vector<std::vector<SectorTrace>> days(static_cast<std::size_t>(total_days));
    parallel_for(static_cast<std::size_t>(total_days), [&](std::size_t d) {
        auto it = by_day.find(static_cast<int>(d));
        const EventContext* ev = it == by_day.end() ? nullptr : it->second;
        days[d] = gen_day(params, static_cast<int>(d), ev);
    });

    for (const auto& day_traces : days)
        for (const auto& trace : day_traces) dataset.traces[trace.sector].push_back(trace);
    dataset.validate();
    return dataset;
}

EventContext default_event(int day, int attendees, const std::string& type) {
    EventContext ev;
    ev.day = day;
    ev.attendees = attendees;
    ev.start_epoch = 78;     // 19:30
    ev.halftime_epoch = 81;  // 20:15
    ev.end_epoch = 85;       // 21:15
    ev.event_type = type;
    return ev;
}

namespace {

EventContext event_from_json(const nlohmann::json& j) {
    EventContext ev;
    ev.day = j.at("day").get<int>();
    ev.attendees = j.at("attendees").get<int>();
    ev.start_epoch = j.value("start_epoch", 78);
    ev.halftime_epoch = j.value("halftime_epoch", 81);
    ev.end_epoch = j.value("end_epoch", 85);
    ev.event_type = j.value("event_type", "football");
    return ev;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open scenario file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("scenario " + path + ": " + e.what());
    }

    static const std::set<std::string> known = {
        "n_sectors", "bands", "diurnal_profile", "event_gain", "saturation_users", "qos_free",
        "noise_sigma", "rng_seed", "vol_per_user_bits", "ul_ratio", "pta_regular_mean",
        "pta_event_mean", "pta_sigma_scale", "util_noise_scale", "reference_attendees",
        "n_regular_days", "events"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) throw DataError("scenario: unknown key '" + it.key() + "'");
    }

    Scenario sc;
    SimParams& p = sc.params;
    p.n_sectors = j.value("n_sectors", p.n_sectors);
    if (j.contains("bands")) p.bands = j.at("bands").get<std::vector<int>>();
    if (j.contains("diurnal_profile")) {
        auto v = j.at("diurnal_profile").get<std::vector<double>>();
        if (v.size() != kEpochsPerDay)
            throw DataError("diurnal_profile must have 96 entries");
        std::copy(v.begin(), v.end(), p.diurnal_profile.begin());
    }
    p.event_gain = j.value("event_gain", p.event_gain);
    if (j.contains("saturation_users")) {
        p.saturation_users.clear();
        for (auto it = j.at("saturation_users").begin(); it != j.at("saturation_users").end(); ++it)
            p.saturation_users[std::stoi(it.key())] = it.value().get<double>();
    }
    p.qos_free = j.value("qos_free", p.qos_free);
    p.noise_sigma = j.value("noise_sigma", p.noise_sigma);
    p.rng_seed = j.value("rng_seed", p.rng_seed);
    p.vol_per_user_bits = j.value("vol_per_user_bits", p.vol_per_user_bits);
    p.ul_ratio = j.value("ul_ratio", p.ul_ratio);
    p.pta_regular_mean = j.value("pta_regular_mean", p.pta_regular_mean);
    p.pta_event_mean = j.value("pta_event_mean", p.pta_event_mean);
    p.pta_sigma_scale = j.value("pta_sigma_scale", p.pta_sigma_scale);
    p.util_noise_scale = j.value("util_noise_scale", p.util_noise_scale);
    p.reference_attendees = j.value("reference_attendees", p.reference_attendees);
    sc.n_regular_days = j.value("n_regular_days", sc.n_regular_days);
    for (const auto& ej : j.value("events", nlohmann::json::array()))
        sc.events.push_back(event_from_json(ej));
    p.validate();
    return sc;
}

void save_scenario(const Scenario& sc, const std::string& path) {
    nlohmann::json j;
    const SimParams& p = sc.params;
    j["n_sectors"] = p.n_sectors;
    j["bands"] = p.bands;
    j["diurnal_profile"] = std::vector<double>(p.diurnal_profile.begin(), p.diurnal_profile.end());
    j["event_gain"] = p.event_gain;
    nlohmann::json sat;
    for (const auto& [band, users] : p.saturation_users) sat[std::to_string(band)] = users;
    j["saturation_users"] = sat;
    j["qos_free"] = p.qos_free;
    j["noise_sigma"] = p.noise_sigma;
    j["rng_seed"] = p.rng_seed;
    j["vol_per_user_bits"] = p.vol_per_user_bits;
    j["ul_ratio"] = p.ul_ratio;
    j["pta_regular_mean"] = p.pta_regular_mean;
    j["pta_event_mean"] = p.pta_event_mean;
    j["pta_sigma_scale"] = p.pta_sigma_scale;
    j["util_noise_scale"] = p.util_noise_scale;
    j["reference_attendees"] = p.reference_attendees;
    j["n_regular_days"] = sc.n_regular_days;
    j["events"] = nlohmann::json::array();
    for (const auto& ev : sc.events) {
        j["events"].push_back({{"day", ev.day},
                               {"attendees", ev.attendees},
                               {"start_epoch", ev.start_epoch},
                               {"halftime_epoch", ev.halftime_epoch},
                               {"end_epoch", ev.end_epoch},
                               {"event_type", ev.event_type}});
    }
    write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace arena::sim
