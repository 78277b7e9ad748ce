#include <doctest.h>

#include <random>

#include "repopulse/timeutil.hpp"

using namespace repopulse;

TEST_CASE("civil conversions agree on known dates") {
    CHECK(days_from_civil(1970, 1, 1) == 0);
    CHECK(days_from_civil(1970, 1, 2) == 1);
    CHECK(days_from_civil(1969, 12, 31) == -1);
    CHECK(days_from_civil(2000, 3, 1) == 11017);
    CHECK(civil_from_days(0) == CivilDate{1970, 1, 1});
    CHECK(civil_from_days(11017) == CivilDate{2000, 3, 1});
}

TEST_CASE("civil round trip over a wide day range") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::int64_t> days(-200000, 200000);
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t d = days(rng);
        const CivilDate c = civil_from_days(d);
        CHECK(days_from_civil(c.year, c.month, c.day) == d);
    }
}

TEST_CASE("midnight floor") {
    CHECK(floor_to_utc_midnight(0) == 0);
    CHECK(floor_to_utc_midnight(1) == 0);
    CHECK(floor_to_utc_midnight(86399) == 0);
    CHECK(floor_to_utc_midnight(86400) == 86400);
    CHECK(floor_to_utc_midnight(-1) == -86400);
    // 2021-06-15T13:45:00Z floors to 2021-06-15T00:00:00Z
    CHECK(floor_to_utc_midnight(utc_timestamp(2021, 6, 15, 13, 45, 0)) ==
          utc_timestamp(2021, 6, 15));
}

TEST_CASE("format_utc_date") {
    CHECK(format_utc_date(0) == "1970-01-01");
    CHECK(format_utc_date(utc_timestamp(2021, 2, 28, 23, 59, 59)) == "2021-02-28");
    CHECK(format_utc_date(utc_timestamp(2024, 2, 29)) == "2024-02-29");
}

TEST_CASE("rfc3339 parsing") {
    CHECK(parse_rfc3339("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_rfc3339("2011-04-22T13:33:48Z") == 1303479228);
    CHECK(parse_rfc3339("2011-04-22T13:33:48.123Z") == 1303479228);
    CHECK(parse_rfc3339("2011-04-22T15:33:48+02:00") == 1303479228);
    CHECK(parse_rfc3339("2011-04-22T11:33:48-02:00") == 1303479228);
    CHECK(parse_rfc3339("2011-04-22 13:33:48Z") == 1303479228);

    CHECK(!parse_rfc3339(""));
    CHECK(!parse_rfc3339("2011-04-22"));
    CHECK(!parse_rfc3339("2011-04-22T13:33:48"));      // missing offset
    CHECK(!parse_rfc3339("2011-13-01T00:00:00Z"));     // bad month
    CHECK(!parse_rfc3339("2011-02-30T00:00:00Z"));     // bad day
    CHECK(!parse_rfc3339("2011-04-22T24:00:00Z"));     // bad hour
    CHECK(!parse_rfc3339("not a date"));
    CHECK(!parse_rfc3339("2011-04-22T13:33:48Zjunk"));
}
