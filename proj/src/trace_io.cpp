#include "arena/trace_io.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace arena {

const char* const kTraceHeader =
    "enb,sector,band_mhz,day,day_label,epoch,avg_users,peak_users,dl_bits,ul_bits,"
    "dl_prb_util,dl_eff_time_s";

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, int line_no, const char* col) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw DataError("line " + std::to_string(line_no) + ": bad value for column " + col +
                        ": '" + s + "'");
    return v;
}

int parse_int(const std::string& s, int line_no, const char* col) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw DataError("line " + std::to_string(line_no) + ": bad value for column " + col +
                        ": '" + s + "'");
    return v;
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
    std::filesystem::create_directories(path);

    std::ostringstream csv;
    csv << kTraceHeader << "\n";
    for (const auto& [sector, days] : dataset.traces) {
        for (const auto& trace : days) {
            for (const auto& [ep, rec] : trace.epochs) {
                csv << sector.enb_id << ',' << sector.sector_index << ',' << sector.band_mhz
                    << ',' << trace.day << ',' << to_string(trace.day_label) << ',' << ep.index
                    << ',' << format_double(rec.avg_active_users) << ','
                    << format_double(rec.peak_active_users) << ','
                    << format_double(rec.dl_volume_bits) << ','
                    << format_double(rec.ul_volume_bits) << ','
                    << format_double(rec.dl_prb_util) << ','
                    << format_double(rec.dl_effective_time_s) << "\n";
            }
        }
    }
    write_file_atomic((std::filesystem::path(path) / "traces.csv").string(), csv.str());

    nlohmann::json side;
    side["epoch_duration_min"] = dataset.epoch_duration_min;
    side["events"] = nlohmann::json::array();
    for (const auto& ev : dataset.events) {
        side["events"].push_back({{"day", ev.day},
                                  {"attendees", ev.attendees},
                                  {"start_epoch", ev.start_epoch},
                                  {"halftime_epoch", ev.halftime_epoch},
                                  {"end_epoch", ev.end_epoch},
                                  {"event_type", ev.event_type}});
    }
    write_file_atomic((std::filesystem::path(path) / "events.json").string(), side.dump(2) + "\n");
}

Dataset load_dataset(const std::string& path) {
    Dataset dataset;

    std::filesystem::path csv_path = std::filesystem::path(path) / "traces.csv";
    std::ifstream in(csv_path);
    if (!in) throw DataError("cannot open " + csv_path.string());

    std::string line;
    int line_no = 0;
    if (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto expected = split_csv(kTraceHeader);
        auto got = split_csv(line);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i >= got.size() || got[i] != expected[i])
                throw DataError("traces.csv: missing or misplaced column '" + expected[i] + "'");
        }
        if (got.size() != expected.size())
            throw DataError("traces.csv: unexpected extra columns");
    } else {
        return dataset;  // empty file -> empty dataset
    }

    SectorTrace* current = nullptr;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cols = split_csv(line);
        if (cols.size() != 12)
            throw DataError("line " + std::to_string(line_no) + ": expected 12 columns, got " +
                            std::to_string(cols.size()));
        SectorId sector{parse_int(cols[0], line_no, "enb"), parse_int(cols[1], line_no, "sector"),
                        parse_int(cols[2], line_no, "band_mhz")};
        int day = parse_int(cols[3], line_no, "day");
        DayLabel label = day_label_from_string(cols[4]);
        int epoch_index = parse_int(cols[5], line_no, "epoch");
        EpochRecord rec;
        rec.avg_active_users = parse_double(cols[6], line_no, "avg_users");
        rec.peak_active_users = parse_double(cols[7], line_no, "peak_users");
        rec.dl_volume_bits = parse_double(cols[8], line_no, "dl_bits");
        rec.ul_volume_bits = parse_double(cols[9], line_no, "ul_bits");
        rec.dl_prb_util = parse_double(cols[10], line_no, "dl_prb_util");
        rec.dl_effective_time_s = parse_double(cols[11], line_no, "dl_eff_time_s");

        auto& days = dataset.traces[sector];
        if (days.empty() || days.back().day != day || current == nullptr ||
            current->sector != sector) {
            days.push_back(SectorTrace{sector, day, label, {}});
            current = &days.back();
        }
        current->epochs.emplace_back(Epoch{day, epoch_index, dataset.epoch_duration_min}, rec);
    }

    std::filesystem::path side_path = std::filesystem::path(path) / "events.json";
    if (std::filesystem::exists(side_path)) {
        std::ifstream side_in(side_path);
        nlohmann::json side;
        try {
            side_in >> side;
        } catch (const nlohmann::json::exception& e) {
            throw DataError("events.json: " + std::string(e.what()));
        }
        dataset.epoch_duration_min = side.value("epoch_duration_min", kDefaultEpochMinutes);
        for (const auto& j : side.value("events", nlohmann::json::array())) {
            EventContext ev;
            ev.day = j.at("day").get<int>();
            ev.attendees = j.at("attendees").get<int>();
            ev.start_epoch = j.at("start_epoch").get<int>();
            ev.halftime_epoch = j.at("halftime_epoch").get<int>();
            ev.end_epoch = j.at("end_epoch").get<int>();
            ev.event_type = j.value("event_type", "football");
            dataset.events.push_back(ev);
        }
    }

    // Fix epoch durations now that the sidecar is known.
    if (dataset.epoch_duration_min != kDefaultEpochMinutes) {
        for (auto& [sector, days] : dataset.traces)
            for (auto& trace : days)
                for (auto& [ep, rec] : trace.epochs) ep.duration_min = dataset.epoch_duration_min;
    }

    dataset.validate();
    return dataset;
}

}  // namespace arena
