#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace solarsched {

// An hour boundary in local civil time, counted from 1970-01-01T00:00 local.
// The UTC offset lives with the dataset/tariff, not with each value.
class LocalHour {
public:
    constexpr LocalHour() = default;
    constexpr explicit LocalHour(std::int64_t index) : index_(index) {}

    static LocalHour from_civil(std::chrono::year_month_day date, int hour);

    constexpr std::int64_t index() const { return index_; }

    int hour_of_day() const;
    std::chrono::weekday weekday() const;
    std::chrono::year_month_day date() const;
    // 1-based ordinal day within the year.
    int day_of_year() const;
    bool is_weekend() const;

    // Midnight of the same civil day.
    LocalHour day_start() const;

    // ISO-8601 with explicit offset, e.g. 2018-07-01T14:00:00+10:00.
    std::string to_iso(int utc_offset_minutes) const;

    constexpr LocalHour operator+(std::int64_t hours) const { return LocalHour(index_ + hours); }
    constexpr LocalHour operator-(std::int64_t hours) const { return LocalHour(index_ - hours); }
    constexpr std::int64_t operator-(LocalHour other) const { return index_ - other.index_; }
    constexpr LocalHour& operator++() { ++index_; return *this; }

    constexpr auto operator<=>(const LocalHour&) const = default;

private:
    std::int64_t index_ = 0;
};

struct ParsedTimestamp {
    LocalHour hour;
    int utc_offset_minutes = 0;
};

// Parses YYYY-MM-DDTHH:MM:SS(+HH:MM|-HH:MM|Z). Rejects anything that is not an
// exact hour boundary. Throws solarsched::Error on malformed input.
ParsedTimestamp parse_iso_hour(std::string_view text);

}  // namespace solarsched
