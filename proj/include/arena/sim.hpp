#ifndef ARENA_SIM_HPP
#define ARENA_SIM_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arena/trace.hpp"

namespace arena::sim {

/// Generative model parameters. The diurnal shape, surge timing and the
/// saturation law encode the stadium signatures the traces must reproduce:
/// a night trough / day plateau user curve, an attendance-driven surge with
/// pre-event, halftime and post-event bumps, linear volume below saturation
/// and 1/x QoS decay above it.
struct SimParams {
    int n_sectors = 16;
    std::vector<int> bands = {800, 1800, 2600};     // assigned round-robin
    std::array<double, kEpochsPerDay> diurnal_profile{};  // base avg users
    double event_gain = 10.0;                       // event/regular peak ratio target
    std::map<int, double> saturation_users = {{800, 400.0}, {1800, 250.0}, {2600, 600.0}};
    double qos_free = 6.0e6;                        // unsaturated per-user rate, bit/s
    double noise_sigma = 0.08;                      // lognormal sigma on users; 0 = deterministic
    std::uint64_t rng_seed = 1;

    // Calibration knobs (the source material reports no absolute regular-day
    // figures; these defaults put regular peaks near 60 users/sector and event
    // peaks near 600).
    double vol_per_user_bits = 6.0e7;   // per-user downlink demand per epoch
    double ul_ratio = 0.15;             // uplink volume as a fraction of demand
    double pta_regular_mean = 0.35;     // regular-day mean of peak/avg - 1
    double pta_event_mean = 1.70;       // event-window mean (doubles the ratio)
    double pta_sigma_scale = 1.5;       // PtA lognormal sigma = scale * noise_sigma
    double util_noise_scale = 0.25;     // util measurement sigma = scale * noise_sigma
    int reference_attendees = 25097;
    double surge_pre_offset_epochs = 6.0;    // pre-event bump center: start - 1.5 h
    double surge_post_offset_epochs = 0.5;   // post-event bump center: just after end
    double surge_amp_pre = 1.0, surge_amp_half = 0.6, surge_amp_post = 1.0;
    double surge_sigma_pre = 3.0, surge_sigma_half = 1.3, surge_sigma_post = 2.2;

    SimParams();

    double saturation_for_band(int band_mhz) const;
    void validate() const;
};

/// Default diurnal curve: trough of ~8 users overnight, plateau of ~60
/// through the day and evening.
std::array<double, kEpochsPerDay> default_diurnal_profile();

/// Deterministic per-sector scale in [0.8, 1.2); independent of the seed so
/// that noise_sigma = 0 output does not depend on the seed at all.
double sector_scale(int sector_index);

/// The record-derivation law shared by both day generators: given the epoch
/// average user count, fills volumes, effective time, utilization and peak
/// users. Exact relations: dl_volume = min(u, sat) * vol_per_user,
/// eff_time = u * vol_per_user / qos_free (so QoS = qos_free * min(1, sat/u)),
/// util = 1 exactly at or above saturation.
EpochRecord make_record(double avg_users, double pta, double util_noise,
                        const SimParams& params, int band_mhz);

std::vector<SectorTrace> gen_regular_day(const SimParams& params, int day);

std::vector<SectorTrace> gen_event_day(const SimParams& params, const EventContext& context);

/// Assembles a season of n_regular_days regular days plus one day per event
/// spec. Event days are placed at their EventContext day index; all other
/// day indices in [0, n_regular_days + n_events) are regular. Duplicate
/// event days are rejected.
Dataset gen_season(const SimParams& params, int n_regular_days,
                   const std::vector<EventContext>& event_specs);

/// Scenario configuration file (JSON) mapping 1:1 onto SimParams plus the
/// event list. Unknown keys are rejected.
struct Scenario {
    SimParams params;
    int n_regular_days = 20;
    std::vector<EventContext> events;
};

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

/// Builds an EventContext with the usual match timing on `day`:
/// start 19:30, halftime 20:15, end 21:15.
EventContext default_event(int day, int attendees, const std::string& type = "football");

}  // namespace arena::sim

#endif
