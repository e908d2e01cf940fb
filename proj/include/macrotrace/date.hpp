#pragma once

#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

#include "macrotrace/errors.hpp"

namespace macrotrace {

// Calendar date, ISO "YYYY-MM-DD". Plain value type; comparisons are
// lexicographic on (year, month, day).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    static bool is_leap(int y) {
        return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    }

    static int days_in_month(int y, int m) {
        static const int base[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        if (m == 2 && is_leap(y)) return 29;
        return base[m - 1];
    }

    bool valid() const {
        return month >= 1 && month <= 12 && day >= 1 &&
               day <= days_in_month(year, month) && year >= 1 && year <= 9999;
    }

    // Days since 1970-01-01 (proleptic Gregorian).
    long serial() const {
        int y = year - (month <= 2);
        const int era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy =
            (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
            static_cast<unsigned>(day) - 1u;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return static_cast<long>(era) * 146097 + static_cast<long>(doe) - 719468;
    }

    static Date from_serial(long z) {
        z += 719468;
        const long era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const long y = static_cast<long>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        const unsigned d = doy - (153 * mp + 2) / 5 + 1;
        const unsigned m = mp < 10 ? mp + 3 : mp - 9;
        return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                    static_cast<int>(d)};
    }

    Date next_day() const { return from_serial(serial() + 1); }

    std::string str() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    static Date parse(std::string_view s) {
        auto digit = [](char c) { return c >= '0' && c <= '9'; };
        if (s.size() != 10 || s[4] != '-' || s[7] != '-')
            throw DataError("invalid date (want YYYY-MM-DD): '" + std::string(s) + "'");
        for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
            if (!digit(s[i]))
                throw DataError("invalid date (want YYYY-MM-DD): '" + std::string(s) + "'");
        Date d;
        d.year = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
        d.month = (s[5] - '0') * 10 + (s[6] - '0');
        d.day = (s[8] - '0') * 10 + (s[9] - '0');
        if (!d.valid())
            throw DataError("invalid calendar date: '" + std::string(s) + "'");
        return d;
    }
};

}  // namespace macrotrace
