#include "solarsched/local_time.hpp"

#include <cstdio>

#include "csv_util.hpp"
#include "solarsched/error.hpp"

namespace solarsched {

namespace {

using std::chrono::days;
using std::chrono::sys_days;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

sys_days day_of(std::int64_t index) { return sys_days{days{floor_div(index, 24)}}; }

}  // namespace

LocalHour LocalHour::from_civil(std::chrono::year_month_day date, int hour) {
    if (!date.ok() || hour < 0 || hour > 23) throw Error("invalid civil date/hour");
    return LocalHour(static_cast<std::int64_t>(sys_days{date}.time_since_epoch().count()) * 24 + hour);
}

int LocalHour::hour_of_day() const { return static_cast<int>(index_ - floor_div(index_, 24) * 24); }

std::chrono::weekday LocalHour::weekday() const { return std::chrono::weekday{day_of(index_)}; }

std::chrono::year_month_day LocalHour::date() const { return std::chrono::year_month_day{day_of(index_)}; }

int LocalHour::day_of_year() const {
    const auto ymd = date();
    const sys_days jan1{ymd.year() / std::chrono::January / 1};
    return static_cast<int>((day_of(index_) - jan1).count()) + 1;
}

bool LocalHour::is_weekend() const {
    const auto iso = weekday().iso_encoding();
    return iso == 6 || iso == 7;
}

LocalHour LocalHour::day_start() const { return LocalHour(floor_div(index_, 24) * 24); }

std::string LocalHour::to_iso(int utc_offset_minutes) const {
    const auto ymd = date();
    const int off = utc_offset_minutes < 0 ? -utc_offset_minutes : utc_offset_minutes;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:00:00%c%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hour_of_day(),
                  utc_offset_minutes < 0 ? '-' : '+', off / 60, off % 60);
    return buf;
}

ParsedTimestamp parse_iso_hour(std::string_view text) {
    text = csv::trim(text);
    const auto bad = [&](const char* why) -> Error {
        return Error("bad timestamp '" + std::string(text) + "': " + why);
    };
    // YYYY-MM-DDTHH:MM:SS then offset
    if (text.size() < 20) throw bad("too short");
    const auto num = [&](std::size_t pos, std::size_t len) -> int {
        const auto v = csv::parse_int(text.substr(pos, len));
        if (!v || text.substr(pos, len).find_first_not_of("0123456789") != std::string_view::npos)
            throw bad("non-numeric field");
        return static_cast<int>(*v);
    };
    if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') || text[13] != ':' ||
        text[16] != ':')
        throw bad("expected YYYY-MM-DDTHH:MM:SS");
    const int y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2), mi = num(14, 2), s = num(17, 2);
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23) throw bad("date out of range");
    if (mi != 0 || s != 0) throw bad("not on an hour boundary (only hourly data is supported)");

    auto rest = text.substr(19);
    if (!rest.empty() && rest.front() == '.') {
        const auto end = rest.find_first_not_of("0123456789", 1);
        const auto frac = rest.substr(1, end == std::string_view::npos ? std::string_view::npos : end - 1);
        if (frac.find_first_not_of('0') != std::string_view::npos) throw bad("not on an hour boundary");
        rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
    }
    int offset = 0;
    if (rest == "Z") {
        offset = 0;
    } else if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':') {
        const auto oh = csv::parse_int(rest.substr(1, 2));
        const auto om = csv::parse_int(rest.substr(4, 2));
        if (!oh || !om || *om >= 60) throw bad("bad UTC offset");
        offset = static_cast<int>(*oh * 60 + *om) * (rest[0] == '-' ? -1 : 1);
    } else {
        throw bad("missing UTC offset");
    }
    return {LocalHour::from_civil(ymd, h), offset};
}

}  // namespace solarsched
