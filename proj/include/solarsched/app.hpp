#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "solarsched/battery.hpp"
#include "solarsched/error.hpp"
#include "solarsched/metrics.hpp"
#include "solarsched/report.hpp"
#include "solarsched/scheduler.hpp"
#include "solarsched/simulation.hpp"
#include "solarsched/synthetic.hpp"

namespace solarsched::app {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Usage problems (bad flag values, unknown names) as opposed to runtime errors.
class UsageError : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    std::vector<std::filesystem::path> data;
    // Optional NWP extract per dataset, same order as `data`.
    std::vector<std::filesystem::path> nwp;
    std::vector<std::string> tariffs{"tariff1"};
    std::vector<StrategyKind> strategies{kAllStrategies.begin(), kAllStrategies.end()};
    BatteryConfig battery;
    GridLimits limits;
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 20180718;
    int utc_offset_minutes = 600;
    int jobs = 0;
    bool force = false;
    bool traces = false;
    OptimizeWindow window = OptimizeWindow::non_peak;
    Weighting weighting = Weighting::load;
};

// Parses "a,b,c" or "all"; throws UsageError on an unknown name.
std::vector<StrategyKind> parse_strategy_list(const std::string& text);
std::vector<std::string> parse_tariff_list(const std::string& text);

// JSON config whose keys mirror RunConfig ("battery" is an object with
// capacity_kwh, soc_min_kwh, soc_max_kwh, rate_limit_kwh, loss_factor).
// Relative paths resolve against the config file's directory.
RunConfig load_run_config(const std::filesystem::path& path);
void apply_run_config_json(RunConfig& cfg, const std::string& json_text,
                           const std::filesystem::path& base_dir = {});

// Runs the matrix and writes costs.csv, savecounts.csv, results.csv, plot
// files and (optionally) per-run traces. Returns the aggregated rows; the
// full per-cell reports are copied to `result` when given.
std::vector<ResultRow> run_simulate(const RunConfig& cfg, std::ostream& log, MatrixResult* result = nullptr);

struct ScheduleRequest {
    std::string tariff = "tariff1";
    std::filesystem::path forecast;
    double soc_kwh = 0.0;
    BatteryConfig battery;
    GridLimits limits;
    QuantileSelection quantiles;
    std::size_t horizon = 24;
    int utc_offset_minutes = 600;
};

DispatchSchedule run_schedule(const ScheduleRequest& request);

enum class EvalModel { qrf, persist_24h, persist_1h, perfect, climatology };
std::optional<EvalModel> eval_model_from_string(const std::string& name);

struct ForecastEvalRequest {
    std::vector<std::filesystem::path> data;
    std::vector<std::filesystem::path> nwp;
    EvalModel model = EvalModel::qrf;
    int utc_offset_minutes = 600;
    std::uint64_t seed = 20180718;
    QuantileForecasterOptions forecaster;
    std::optional<std::filesystem::path> per_site_out;
};

// Hour-ahead median forecasts scored on every present hour after the first
// training window; per-site NMAE/NRMSE summarised as percentile rows.
PercentileTable run_forecast_eval(const ForecastEvalRequest& request, std::vector<SiteErrors>* per_site = nullptr);

struct ReportRequest {
    std::filesystem::path results;
    std::filesystem::path out_dir = "out";
    Weighting weighting = Weighting::load;
};

std::vector<std::filesystem::path> run_report(const ReportRequest& request);

// Writes `<dir>/<site_id>.csv` and `<dir>/<site_id>_nwp.csv`.
void write_fixture(const std::filesystem::path& dir, const FixtureOptions& options);

}  // namespace solarsched::app
