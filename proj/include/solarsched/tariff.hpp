#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solarsched/local_time.hpp"

namespace solarsched {

enum class Period { off_peak, shoulder, peak };

std::string_view to_string(Period p);
Period period_from_string(std::string_view s);

// Price in tenths of a cent per kWh, so 43.6 c/kWh is stored as 436.
class Price {
public:
    constexpr Price() = default;
    constexpr explicit Price(std::int32_t tenths) : tenths_(tenths) {}

    // Rejects negative values and values with more than one decimal place.
    static Price from_cents(double cents_per_kwh);

    constexpr std::int32_t tenths() const { return tenths_; }
    constexpr double cents() const { return tenths_ / 10.0; }

    constexpr auto operator<=>(const Price&) const = default;

private:
    std::int32_t tenths_ = 0;
};

// Bit i set means ISO weekday i+1 (Mon=bit 0 ... Sun=bit 6).
using DayMask = std::uint8_t;
inline constexpr DayMask kWeekdays = 0b0011111;
inline constexpr DayMask kWeekend = 0b1100000;
inline constexpr DayMask kAllDays = 0b1111111;

// Accepts "Mon".."Sun", ranges like "Mon-Fri", and the aliases
// "weekdays", "weekends", "all".
DayMask parse_days(std::string_view text);

struct PeriodRule {
    Period period = Period::off_peak;
    DayMask days = kAllDays;
    int start_hour = 0;  // inclusive
    int end_hour = 24;   // exclusive

    bool matches(std::chrono::weekday day, int hour) const;
};

struct Rates {
    Period period;
    Price import_rate;
    Price export_rate;
};

class TariffSchedule {
public:
    TariffSchedule(std::string name, Price feed_in, std::array<std::optional<Price>, 3> rates,
                   std::vector<PeriodRule> rules, std::optional<Period> default_period,
                   std::optional<int> utc_offset_minutes = std::nullopt);

    const std::string& name() const { return name_; }
    Price feed_in() const { return feed_in_; }
    const std::vector<PeriodRule>& rules() const { return rules_; }
    std::optional<Period> default_period() const { return default_period_; }
    std::optional<Price> rate(Period p) const { return rates_[static_cast<int>(p)]; }
    // Zone the civil-time rules are written for, when the config states one.
    std::optional<int> utc_offset_minutes() const { return utc_offset_minutes_; }

    // First matching rule wins, else the default period.
    Period period_at(std::chrono::weekday day, int hour) const;
    Rates rates_at(LocalHour t) const;

    // Feed-in price plus the ratio of summed peak+shoulder hourly prices to
    // summed off-peak hourly prices over one week.
    double price_ratio_index() const;

private:
    std::string name_;
    Price feed_in_;
    std::array<std::optional<Price>, 3> rates_;
    std::vector<PeriodRule> rules_;
    std::optional<Period> default_period_;
    std::optional<int> utc_offset_minutes_;
    // Resolved period for every hour of the week, Monday 00:00 first.
    std::array<Period, 168> week_{};
};

// JSON text: {"name", "feed_in", "rates": {"offpeak","shoulder","peak"},
// "rules": [{"period","days","start","end"}], "default"} with an optional
// "utc_offset_minutes". Unused periods may omit their rate.
TariffSchedule parse_tariff(std::string_view config_text);
TariffSchedule load_tariff(const std::filesystem::path& path);

// Names "tariff1".."tariff10", the ten built-in schedules.
std::vector<std::string> bundled_tariff_names();
std::optional<std::string_view> bundled_tariff_config(std::string_view name);
TariffSchedule bundled_tariff(std::string_view name);

// Bundled name if it matches one, otherwise a path to a config file.
TariffSchedule resolve_tariff(const std::string& name_or_path);

}  // namespace solarsched
