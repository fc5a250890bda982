#pragma once

#include <chrono>
#include <cstdio>
#include <string>

#include "triad/errors.hpp"

namespace triad {

using Date = std::chrono::sys_days;

/// Parses a strict ISO "YYYY-MM-DD" calendar date.
inline Date parse_date(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char tail = '\0';
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3 || text.size() != 10) {
        throw DataError("invalid date '" + text + "' (expected YYYY-MM-DD)");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw DataError("invalid calendar date '" + text + "'");
    return std::chrono::sys_days(ymd);
}

inline std::string format_date(Date date) {
    const std::chrono::year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace triad
