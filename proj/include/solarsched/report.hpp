#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "solarsched/simulation.hpp"

namespace solarsched {

// One simulated (site, tariff, strategy) cell in long form; the unit the
// aggregate tables are computed from. Round-trips through results.csv.
struct ResultRow {
    std::string site_id;
    std::string tariff;
    StrategyKind strategy = StrategyKind::automatic;
    double total_cost_c = 0.0;
    double total_load_kwh = 0.0;
    std::size_t hours_simulated = 0;
    std::size_t hours_fallback = 0;
    double pv_load_ratio = 0.0;
    double tariff_index = 0.0;
};

std::vector<ResultRow> result_rows(const MatrixResult& result);
void write_results(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results(std::istream& in, const std::string& source_name = "<stream>");

enum class Weighting {
    load,        // sum of cost / sum of load across sites
    unweighted,  // mean of per-site c/kWh
};

// Rows = tariffs (first-seen order) plus a trailing "average" row;
// columns = strategies present, in reporting order.
struct CostTable {
    std::vector<std::string> tariffs;
    std::vector<StrategyKind> strategies;
    std::vector<std::vector<double>> c_per_kwh;
};

CostTable cost_table(const std::vector<ResultRow>& rows, Weighting weighting = Weighting::load);
void write_cost_table(std::ostream& out, const CostTable& table);

// Sites whose cost is strictly below automatic, per tariff and optimised
// strategy, with a trailing "Total" row.
struct SaveCountTable {
    std::vector<std::string> tariffs;
    std::vector<StrategyKind> strategies;
    std::vector<std::vector<int>> counts;
};

SaveCountTable save_count_table(const std::vector<ResultRow>& rows);
void write_save_count_table(std::ostream& out, const SaveCountTable& table);

// Lower-case alphanumerics of `name`, for file names ("Tariff 1" -> "tariff1").
std::string slug(const std::string& name);

void write_trace(std::ostream& out, const CostReport& report, int utc_offset_minutes);

// Two-column plot data: per-site PV/load ratio vs annualised perfect-forecast
// bill (dollars) for each tariff, and per-tariff price index vs percentage
// saving over automatic for each optimised strategy. Returns files written.
std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& dir,
                                                   const std::vector<ResultRow>& rows);

// Writes results.csv, costs.csv and savecounts.csv (and the plot files) into
// dir. Returns files written.
std::vector<std::filesystem::path> write_reports(const std::filesystem::path& dir,
                                                 const std::vector<ResultRow>& rows,
                                                 Weighting weighting = Weighting::load);

}  // namespace solarsched
