#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace repopulse {

inline constexpr std::int64_t seconds_per_day = 86400;

struct CivilDate {
    int year = 1970;
    unsigned month = 1; // 1..12
    unsigned day = 1;   // 1..31
    bool operator==(const CivilDate&) const = default;
};

// Days since 1970-01-01 in the proleptic Gregorian calendar.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
CivilDate civil_from_days(std::int64_t days_since_epoch);

// 00:00:00 of the UTC day containing the timestamp.
std::int64_t floor_to_utc_midnight(std::int64_t epoch_seconds);

// "YYYY-MM-DD" of the UTC day containing the timestamp.
std::string format_utc_date(std::int64_t epoch_seconds);

// RFC 3339 timestamp ("2014-03-01T09:14:02Z"); fractional seconds are
// truncated, numeric offsets are applied. Empty result on malformed input.
std::optional<std::int64_t> parse_rfc3339(std::string_view text);

// Epoch seconds for a UTC civil date-time.
std::int64_t utc_timestamp(int year, unsigned month, unsigned day,
                           unsigned hour = 0, unsigned minute = 0, unsigned second = 0);

} // namespace repopulse
