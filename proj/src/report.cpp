#include "solarsched/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include "csv_util.hpp"
#include "solarsched/error.hpp"

namespace solarsched {

namespace {

constexpr double kHoursPerYear = 8760.0;

std::vector<std::string> tariffs_in_order(const std::vector<ResultRow>& rows) {
    std::vector<std::string> out;
    for (const auto& r : rows) {
        if (std::find(out.begin(), out.end(), r.tariff) == out.end()) out.push_back(r.tariff);
    }
    return out;
}

std::vector<StrategyKind> strategies_in_order(const std::vector<ResultRow>& rows) {
    std::vector<StrategyKind> out;
    for (auto k : kAllStrategies) {
        if (std::any_of(rows.begin(), rows.end(), [&](const ResultRow& r) { return r.strategy == k; }))
            out.push_back(k);
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

std::string slug(const std::string& name) {
    std::string out;
    for (char c : name) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) out.push_back(static_cast<char>(std::tolower(u)));
    }
    return out.empty() ? "unnamed" : out;
}

std::vector<ResultRow> result_rows(const MatrixResult& result) {
    std::vector<ResultRow> rows;
    for (std::size_t s = 0; s < result.site_ids.size(); ++s) {
        for (std::size_t t = 0; t < result.tariff_names.size(); ++t) {
            for (std::size_t k = 0; k < result.strategies.size(); ++k) {
                const auto& c = result.cell(s, t, k);
                rows.push_back({result.site_ids[s], result.tariff_names[t], result.strategies[k], c.total_cost_c,
                                c.total_load_kwh, c.hours_simulated, c.hours_automatic_fallback,
                                result.eligibility[s].pv_load_ratio, result.tariff_index[t]});
            }
        }
    }
    return rows;
}

void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "site_id,tariff,strategy,total_cost_c,total_load_kwh,hours_simulated,hours_fallback,pv_load_ratio,"
           "tariff_index\n";
    for (const auto& r : rows) {
        out << r.site_id << ',' << r.tariff << ',' << to_string(r.strategy) << ',' << csv::format(r.total_cost_c)
            << ',' << csv::format(r.total_load_kwh) << ',' << r.hours_simulated << ',' << r.hours_fallback << ','
            << csv::format(r.pv_load_ratio) << ',' << csv::format(r.tariff_index) << '\n';
    }
}

std::vector<ResultRow> read_results(std::istream& in, const std::string& source_name) {
    csv::LineReader reader(in, source_name);
    reader.expect_header({"site_id", "tariff", "strategy", "total_cost_c", "total_load_kwh", "hours_simulated",
                          "hours_fallback", "pv_load_ratio", "tariff_index"});
    std::vector<ResultRow> rows;
    std::string line;
    while (reader.next(line)) {
        const auto cols = csv::split(line);
        if (cols.size() != 9) reader.fail("expected 9 columns, got " + std::to_string(cols.size()));
        ResultRow r;
        r.site_id = std::string(cols[0]);
        r.tariff = std::string(cols[1]);
        const auto kind = strategy_from_string(cols[2]);
        if (!kind) reader.fail("unknown strategy '" + std::string(cols[2]) + "'");
        r.strategy = *kind;
        const auto num = [&](std::size_t i) {
            const auto v = csv::parse_double(cols[i]);
            if (!v) reader.fail("malformed number in column " + std::to_string(i + 1));
            return *v;
        };
        const auto count = [&](std::size_t i) {
            const auto v = csv::parse_int(cols[i]);
            if (!v || *v < 0) reader.fail("malformed count in column " + std::to_string(i + 1));
            return static_cast<std::size_t>(*v);
        };
        r.total_cost_c = num(3);
        r.total_load_kwh = num(4);
        r.hours_simulated = count(5);
        r.hours_fallback = count(6);
        r.pv_load_ratio = num(7);
        r.tariff_index = num(8);
        rows.push_back(std::move(r));
    }
    return rows;
}

CostTable cost_table(const std::vector<ResultRow>& rows, Weighting weighting) {
    CostTable table;
    table.tariffs = tariffs_in_order(rows);
    table.strategies = strategies_in_order(rows);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& tariff : table.tariffs) {
        std::vector<double> line;
        for (auto k : table.strategies) {
            double cost = 0.0;
            double load = 0.0;
            double ratio_sum = 0.0;
            int sites = 0;
            for (const auto& r : rows) {
                if (r.tariff != tariff || r.strategy != k) continue;
                cost += r.total_cost_c;
                load += r.total_load_kwh;
                if (r.total_load_kwh > 0.0) {
                    ratio_sum += r.total_cost_c / r.total_load_kwh;
                    ++sites;
                }
            }
            if (weighting == Weighting::load) line.push_back(load > 0.0 ? cost / load : nan);
            else line.push_back(sites > 0 ? ratio_sum / sites : nan);
        }
        table.c_per_kwh.push_back(std::move(line));
    }
    std::vector<double> avg;
    for (std::size_t j = 0; j < table.strategies.size(); ++j) {
        double sum = 0.0;
        int n = 0;
        for (const auto& line : table.c_per_kwh) {
            if (std::isnan(line[j])) continue;
            sum += line[j];
            ++n;
        }
        avg.push_back(n > 0 ? sum / n : nan);
    }
    table.tariffs.emplace_back("average");
    table.c_per_kwh.push_back(std::move(avg));
    return table;
}

void write_cost_table(std::ostream& out, const CostTable& table) {
    out << "tariff";
    for (auto k : table.strategies) out << ',' << display_name(k);
    out << '\n';
    for (std::size_t i = 0; i < table.tariffs.size(); ++i) {
        out << table.tariffs[i];
        for (double v : table.c_per_kwh[i]) {
            out << ',';
            if (!std::isnan(v)) out << csv::fixed(v, 4);
        }
        out << '\n';
    }
}

SaveCountTable save_count_table(const std::vector<ResultRow>& rows) {
    SaveCountTable table;
    table.tariffs = tariffs_in_order(rows);
    for (auto k : strategies_in_order(rows)) {
        if (is_optimised(k)) table.strategies.push_back(k);
    }
    std::map<std::pair<std::string, std::string>, double> automatic;
    for (const auto& r : rows) {
        if (r.strategy == StrategyKind::automatic) automatic[{r.site_id, r.tariff}] = r.total_cost_c;
    }
    std::vector<int> total(table.strategies.size(), 0);
    for (const auto& tariff : table.tariffs) {
        std::vector<int> line(table.strategies.size(), 0);
        for (const auto& r : rows) {
            if (r.tariff != tariff) continue;
            const auto it = std::find(table.strategies.begin(), table.strategies.end(), r.strategy);
            if (it == table.strategies.end()) continue;
            const auto base = automatic.find({r.site_id, r.tariff});
            if (base == automatic.end()) continue;
            if (r.total_cost_c < base->second) ++line[static_cast<std::size_t>(it - table.strategies.begin())];
        }
        for (std::size_t j = 0; j < line.size(); ++j) total[j] += line[j];
        table.counts.push_back(std::move(line));
    }
    table.tariffs.emplace_back("Total");
    table.counts.push_back(std::move(total));
    return table;
}

void write_save_count_table(std::ostream& out, const SaveCountTable& table) {
    out << "tariff";
    for (auto k : table.strategies) out << ',' << display_name(k);
    out << '\n';
    for (std::size_t i = 0; i < table.tariffs.size(); ++i) {
        out << table.tariffs[i];
        for (int v : table.counts[i]) out << ',' << v;
        out << '\n';
    }
}

void write_trace(std::ostream& out, const CostReport& report, int utc_offset_minutes) {
    out << "hour,mode,load_kwh,pv_kwh,import_kwh,export_kwh,discharge_kwh,charge_kwh,soc_kwh,cost_c\n";
    for (const auto& r : report.trace) {
        out << r.hour.to_iso(utc_offset_minutes) << ',' << to_string(r.mode) << ',' << csv::fixed(r.load_kwh, 6)
            << ',' << csv::fixed(r.pv_kwh, 6) << ',' << csv::fixed(r.import_kwh, 6) << ','
            << csv::fixed(r.export_kwh, 6) << ',' << csv::fixed(r.discharge_kwh, 6) << ','
            << csv::fixed(r.charge_kwh, 6) << ',' << csv::fixed(r.soc_kwh, 6) << ',' << csv::fixed(r.cost_c, 6)
            << '\n';
    }
}

std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& dir,
                                                   const std::vector<ResultRow>& rows) {
    std::vector<std::filesystem::path> written;
    for (const auto& tariff : tariffs_in_order(rows)) {
        std::vector<const ResultRow*> picked;
        for (const auto& r : rows) {
            if (r.tariff == tariff && r.strategy == StrategyKind::perfect && r.hours_simulated > 0)
                picked.push_back(&r);
        }
        if (picked.empty()) continue;
        const auto path = dir / ("pvload_vs_cost_" + slug(tariff) + ".csv");
        auto out = open_out(path);
        out << "pv_load_ratio,annual_cost_dollars\n";
        for (const auto* r : picked) {
            const double annual = r->total_cost_c / 100.0 * kHoursPerYear / static_cast<double>(r->hours_simulated);
            out << csv::fixed(r->pv_load_ratio, 6) << ',' << csv::fixed(annual, 2) << '\n';
        }
        written.push_back(path);
    }

    std::map<std::string, double> automatic_cost;
    for (const auto& r : rows) {
        if (r.strategy == StrategyKind::automatic) automatic_cost[r.tariff] += r.total_cost_c;
    }
    if (automatic_cost.empty()) return written;
    for (auto k : strategies_in_order(rows)) {
        if (!is_optimised(k)) continue;
        const auto path = dir / ("savings_vs_tariff_" + std::string(to_string(k)) + ".csv");
        auto out = open_out(path);
        out << "price_ratio_index,savings_percent\n";
        for (const auto& tariff : tariffs_in_order(rows)) {
            const auto base = automatic_cost.find(tariff);
            if (base == automatic_cost.end() || base->second == 0.0) continue;
            double cost = 0.0;
            double index = 0.0;
            bool seen = false;
            for (const auto& r : rows) {
                if (r.tariff != tariff || r.strategy != k) continue;
                cost += r.total_cost_c;
                index = r.tariff_index;
                seen = true;
            }
            if (!seen) continue;
            const double saving = 100.0 * (base->second - cost) / std::abs(base->second);
            out << csv::fixed(index, 6) << ',' << csv::fixed(saving, 4) << '\n';
        }
        written.push_back(path);
    }
    return written;
}

std::vector<std::filesystem::path> write_reports(const std::filesystem::path& dir, const std::vector<ResultRow>& rows,
                                                 Weighting weighting) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    {
        const auto path = dir / "results.csv";
        auto out = open_out(path);
        write_results(out, rows);
        written.push_back(path);
    }
    {
        const auto path = dir / "costs.csv";
        auto out = open_out(path);
        write_cost_table(out, cost_table(rows, weighting));
        written.push_back(path);
    }
    {
        const auto path = dir / "savecounts.csv";
        auto out = open_out(path);
        write_save_count_table(out, save_count_table(rows));
        written.push_back(path);
    }
    const auto plots = write_plot_data(dir, rows);
    written.insert(written.end(), plots.begin(), plots.end());
    return written;
}

}  // namespace solarsched
