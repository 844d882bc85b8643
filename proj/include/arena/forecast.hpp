#ifndef ARENA_FORECAST_HPP
#define ARENA_FORECAST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "arena/arima.hpp"
#include "arena/nn.hpp"
#include "arena/trace.hpp"

namespace arena::forecast {

enum class ForecastKind { Arima, Lstm, CnnLstm, ConvLstm };

std::string to_string(ForecastKind k);
ForecastKind forecast_kind_from_string(const std::string& s);

struct ForecastModelSpec {
    ForecastKind kind = ForecastKind::CnnLstm;
    int units = 200;    // J: LSTM units / ConvLSTM filters
    int filters = 64;   // Phi: convolutional filters (CNN-LSTM)
    int p = 5, d = 1, q = 0;
    int input_window_days = 6;
    int output_horizon = kEpochsPerDay;

    /// True when (units, filters) sit on the reference hyperparameter grid
    /// J in {200,300,400}, Phi in {64,128,256}; other values are allowed but
    /// reported as off-grid.
    bool on_reference_grid() const;
    void validate() const;
};

struct ErrorReport {
    double mse = 0.0;
    double max_abs_error = 0.0;
    std::vector<double> per_window_mse;
    std::vector<double> per_window_max;

    /// Sets mse/max_abs_error from the per-window series.
    void finalize();
};

/// Per-sector multi-day feature series (the snapshot feature triple),
/// concatenated in day order.
struct SectorSeries {
    std::vector<double> users, dl_volume, qos;
    std::vector<DayLabel> day_labels;  // one per day
    int n_days = 0;

    static SectorSeries from_traces(const std::vector<SectorTrace>& days);
    std::size_t epochs() const { return users.size(); }
};

/// Builds the network for one forecasting model family. Inputs are
/// (n_features, input_window_days*96) windows, outputs one day (96 epochs)
/// of user counts.
nn::ModelGraph build_forecaster(const ForecastModelSpec& spec, int n_features,
                                std::uint64_t seed);

struct TrainOptions {
    int epochs = 50;
    double learning_rate = 1e-4;
    std::uint64_t seed = 1;
    int update_epochs = 10;  // warm-start epochs per walk-forward day
};

/// A fitted forecaster of either family, with the frozen normalization
/// stats it was trained under.
struct Forecaster {
    ForecastModelSpec spec;
    nn::ModelGraph net;       // empty for ARIMA
    ArimaModel arima;         // unused for network models
    FeatureStats stats;       // input feature stats from the training prefix
    int first_day_trained_on = 0;

    /// Predicts the user series of `day` from the preceding window. For
    /// network models the day must have input_window_days of history.
    std::vector<double> predict_day(const SectorSeries& series, int day) const;
};

struct TrainResult {
    Forecaster forecaster;
    ErrorReport report;                    // validation windows, normalized scale
    std::vector<double> train_loss_per_epoch;
    int first_validation_day = 0;
};

/// Trains on the chronological 60% prefix of windows and reports errors on
/// the 40% suffix. Deterministic given opts.seed.
TrainResult train_forecaster(const ForecastModelSpec& spec, const SectorSeries& series,
                             double split = 0.6, const TrainOptions& opts = {});

struct WalkForwardResult {
    ErrorReport report;                 // normalized scale
    std::vector<double> predictions;    // user counts, concatenated validation days
    std::vector<double> actuals;
    std::vector<int> window_days;       // validation day per window
    int first_validation_day = 0;
};

/// Walk-forward validation: the model that predicts day k is (re)fit on all
/// data strictly before day k, warm-starting from the previous day's model.
/// Validation days match train_forecaster's split so the two reports are
/// comparable. Normalization stats are frozen on the initial training
/// prefix to keep the evaluation causal.
WalkForwardResult walk_forward_validate(const ForecastModelSpec& spec,
                                        const SectorSeries& series,
                                        const TrainOptions& opts = {},
                                        double split = 0.6, int retrain_every_days = 1);

}  // namespace arena::forecast

#endif
