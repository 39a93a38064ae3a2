#include "solarsched/tariff.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "csv_util.hpp"
#include "solarsched/error.hpp"

namespace solarsched {

namespace detail {
// Defined in the generated bundled_tariffs.cpp.
struct BundledTariff {
    const char* name;
    const char* json;
};
extern const BundledTariff kBundledTariffs[];
extern const std::size_t kBundledTariffCount;
}  // namespace detail

std::string_view to_string(Period p) {
    switch (p) {
        case Period::off_peak: return "offpeak";
        case Period::shoulder: return "shoulder";
        case Period::peak: return "peak";
    }
    return "?";
}

Period period_from_string(std::string_view s) {
    if (s == "offpeak" || s == "off-peak" || s == "off_peak" || s == "economy") return Period::off_peak;
    if (s == "shoulder" || s == "mid") return Period::shoulder;
    if (s == "peak" || s == "max") return Period::peak;
    throw Error("unknown tariff period '" + std::string(s) + "'");
}

Price Price::from_cents(double cents_per_kwh) {
    if (!std::isfinite(cents_per_kwh) || cents_per_kwh < 0.0)
        throw Error("negative price " + csv::format(cents_per_kwh));
    const double tenths = cents_per_kwh * 10.0;
    const double rounded = std::round(tenths);
    if (std::abs(tenths - rounded) > 1e-6)
        throw Error("price " + csv::format(cents_per_kwh) + " has more than one decimal place");
    if (rounded > std::numeric_limits<std::int32_t>::max()) throw Error("price out of range");
    return Price(static_cast<std::int32_t>(rounded));
}

namespace {

constexpr std::string_view kDayNames[7] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};

int day_index(std::string_view s) {
    for (int i = 0; i < 7; ++i) {
        if (s == kDayNames[i]) return i;
    }
    throw Error("unknown day '" + std::string(s) + "'");
}

}  // namespace

DayMask parse_days(std::string_view text) {
    DayMask mask = 0;
    for (auto token : csv::split(text, ',')) {
        if (token.empty()) continue;
        if (token == "all") {
            mask |= kAllDays;
        } else if (token == "weekdays") {
            mask |= kWeekdays;
        } else if (token == "weekends") {
            mask |= kWeekend;
        } else if (const auto dash = token.find('-'); dash != std::string_view::npos) {
            const int from = day_index(csv::trim(token.substr(0, dash)));
            const int to = day_index(csv::trim(token.substr(dash + 1)));
            for (int d = from;; d = (d + 1) % 7) {
                mask |= static_cast<DayMask>(1u << d);
                if (d == to) break;
            }
        } else {
            mask |= static_cast<DayMask>(1u << day_index(token));
        }
    }
    if (mask == 0) throw Error("empty day set '" + std::string(text) + "'");
    return mask;
}

bool PeriodRule::matches(std::chrono::weekday day, int hour) const {
    const unsigned bit = day.iso_encoding() - 1;
    return (days & (1u << bit)) != 0 && hour >= start_hour && hour < end_hour;
}

TariffSchedule::TariffSchedule(std::string name, Price feed_in, std::array<std::optional<Price>, 3> rates,
                               std::vector<PeriodRule> rules, std::optional<Period> default_period,
                               std::optional<int> utc_offset_minutes)
    : name_(std::move(name)),
      feed_in_(feed_in),
      rates_(rates),
      rules_(std::move(rules)),
      default_period_(default_period),
      utc_offset_minutes_(utc_offset_minutes) {
    if (feed_in_.tenths() < 0) throw Error("tariff '" + name_ + "': negative feed-in price");
    for (const auto& r : rates_) {
        if (r && r->tenths() < 0) throw Error("tariff '" + name_ + "': negative price");
    }
    for (const auto& rule : rules_) {
        if (rule.start_hour < 0 || rule.end_hour > 24 || rule.start_hour >= rule.end_hour)
            throw Error("tariff '" + name_ + "': rule start must be before end (0 <= start < end <= 24)");
        if (rule.days == 0) throw Error("tariff '" + name_ + "': rule with no days");
    }
    int uncovered = 0;
    for (unsigned d = 0; d < 7; ++d) {
        const std::chrono::weekday wd{d + 1};  // 1 = Monday
        for (int h = 0; h < 24; ++h) {
            std::optional<Period> p;
            for (const auto& rule : rules_) {
                if (rule.matches(wd, h)) {
                    p = rule.period;
                    break;
                }
            }
            if (!p) p = default_period_;
            if (!p) {
                ++uncovered;
                continue;
            }
            if (!rate(*p))
                throw Error("tariff '" + name_ + "': no rate given for period '" + std::string(to_string(*p)) + "'");
            week_[d * 24 + static_cast<unsigned>(h)] = *p;
        }
    }
    if (uncovered > 0)
        throw Error("tariff '" + name_ + "': uncovered hours (" + std::to_string(uncovered) +
                    " hours of the week match no rule and there is no default)");
}

Period TariffSchedule::period_at(std::chrono::weekday day, int hour) const {
    return week_[(day.iso_encoding() - 1) * 24 + static_cast<unsigned>(hour)];
}

Rates TariffSchedule::rates_at(LocalHour t) const {
    const Period p = period_at(t.weekday(), t.hour_of_day());
    return {p, *rate(p), feed_in_};
}

double TariffSchedule::price_ratio_index() const {
    double high = 0.0;
    double low = 0.0;
    for (const Period p : week_) {
        const double c = rate(p)->cents();
        (p == Period::off_peak ? low : high) += c;
    }
    const double ratio = low > 0.0 ? high / low : std::numeric_limits<double>::infinity();
    return feed_in_.cents() + ratio;
}

TariffSchedule parse_tariff(std::string_view config_text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(config_text);
    } catch (const json::exception& e) {
        throw Error(std::string("tariff config: ") + e.what());
    }
    try {
        const std::string name = j.at("name").get<std::string>();
        const Price feed_in = Price::from_cents(j.at("feed_in").get<double>());

        std::array<std::optional<Price>, 3> rates;
        for (const auto& [key, value] : j.at("rates").items()) {
            rates[static_cast<int>(period_from_string(key))] = Price::from_cents(value.get<double>());
        }

        std::vector<PeriodRule> rules;
        if (j.contains("rules")) {
            for (const auto& r : j.at("rules")) {
                PeriodRule rule;
                rule.period = period_from_string(r.at("period").get<std::string>());
                const auto& days = r.at("days");
                if (days.is_array()) {
                    rule.days = 0;
                    for (const auto& d : days) rule.days |= parse_days(d.get<std::string>());
                } else {
                    rule.days = parse_days(days.get<std::string>());
                }
                rule.start_hour = r.at("start").get<int>();
                rule.end_hour = r.at("end").get<int>();
                rules.push_back(rule);
            }
        }
        std::optional<Period> def;
        if (j.contains("default") && !j.at("default").is_null())
            def = period_from_string(j.at("default").get<std::string>());
        std::optional<int> offset;
        if (j.contains("utc_offset_minutes")) offset = j.at("utc_offset_minutes").get<int>();
        return TariffSchedule(name, feed_in, rates, std::move(rules), def, offset);
    } catch (const json::exception& e) {
        throw Error(std::string("tariff config: ") + e.what());
    }
}

TariffSchedule load_tariff(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open tariff config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_tariff(ss.str());
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

std::vector<std::string> bundled_tariff_names() {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < detail::kBundledTariffCount; ++i) names.emplace_back(detail::kBundledTariffs[i].name);
    return names;
}

std::optional<std::string_view> bundled_tariff_config(std::string_view name) {
    for (std::size_t i = 0; i < detail::kBundledTariffCount; ++i) {
        if (name == detail::kBundledTariffs[i].name) return std::string_view(detail::kBundledTariffs[i].json);
    }
    return std::nullopt;
}

TariffSchedule bundled_tariff(std::string_view name) {
    const auto cfg = bundled_tariff_config(name);
    if (!cfg) throw Error("unknown bundled tariff '" + std::string(name) + "'");
    return parse_tariff(*cfg);
}

TariffSchedule resolve_tariff(const std::string& name_or_path) {
    if (bundled_tariff_config(name_or_path)) return bundled_tariff(name_or_path);
    return load_tariff(name_or_path);
}

}  // namespace solarsched
