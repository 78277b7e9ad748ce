#include "repopulse/timeutil.hpp"

#include <cctype>
#include <cstdio>

namespace repopulse {

std::int64_t days_from_civil(int year, unsigned month, unsigned day) {
    year -= month <= 2;
    const std::int64_t era = (year >= 0 ? year : year - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(year - era * 400);
    const unsigned doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t days_since_epoch) {
    std::int64_t z = days_since_epoch + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return CivilDate{static_cast<int>(y + (m <= 2)), m, d};
}

std::int64_t floor_to_utc_midnight(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / seconds_per_day;
    if (epoch_seconds % seconds_per_day < 0) --days;
    return days * seconds_per_day;
}

std::string format_utc_date(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / seconds_per_day;
    if (epoch_seconds % seconds_per_day < 0) --days;
    const CivilDate c = civil_from_days(days);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
    return buf;
}

std::int64_t utc_timestamp(int year, unsigned month, unsigned day,
                           unsigned hour, unsigned minute, unsigned second) {
    return days_from_civil(year, month, day) * seconds_per_day +
           hour * 3600 + minute * 60 + second;
}

namespace {

bool parse_digits(std::string_view s, std::size_t pos, std::size_t count, int& out) {
    if (pos + count > s.size()) return false;
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

} // namespace

std::optional<std::int64_t> parse_rfc3339(std::string_view text) {
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    if (!parse_digits(text, 0, 4, year) || text.size() < 20) return std::nullopt;
    if (text[4] != '-' || !parse_digits(text, 5, 2, month)) return std::nullopt;
    if (text[7] != '-' || !parse_digits(text, 8, 2, day)) return std::nullopt;
    const char sep = text[10];
    if (sep != 'T' && sep != 't' && sep != ' ') return std::nullopt;
    if (!parse_digits(text, 11, 2, hour) || text[13] != ':') return std::nullopt;
    if (!parse_digits(text, 14, 2, minute) || text[16] != ':') return std::nullopt;
    if (!parse_digits(text, 17, 2, second)) return std::nullopt;

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) return std::nullopt;
    }

    std::int64_t offset = 0;
    if (pos >= text.size()) return std::nullopt;
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '-' ? -1 : 1;
        ++pos;
        int oh = 0, om = 0;
        if (!parse_digits(text, pos, 2, oh)) return std::nullopt;
        pos += 2;
        if (pos < text.size() && text[pos] == ':') ++pos;
        if (!parse_digits(text, pos, 2, om)) return std::nullopt;
        pos += 2;
        offset = sign * (oh * 3600 + om * 60);
    } else {
        return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;

    if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
    // Round-trip rejects normalized dates such as Feb 30.
    const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                              static_cast<unsigned>(day));
    const CivilDate back = civil_from_days(days);
    if (back.year != year || back.month != static_cast<unsigned>(month) ||
        back.day != static_cast<unsigned>(day)) {
        return std::nullopt;
    }

    return days * seconds_per_day + hour * 3600 + minute * 60 + second - offset;
}

} // namespace repopulse
