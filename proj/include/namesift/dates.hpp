#ifndef NAMESIFT_DATES_HPP
#define NAMESIFT_DATES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace namesift {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
constexpr std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) -
           719468;
}

// "YYYY-MM-DD" (ISO prefix accepted, trailing time ignored).
std::optional<std::int64_t> parse_iso_date(std::string_view text);

// Day count from a tweet-style timestamp, e.g. "Sat Jun 09 13:00:00 +0000 2018";
// also accepts the ISO form.  Only the date part matters for age statistics.
std::optional<std::int64_t> parse_tweet_timestamp(std::string_view text);

}  // namespace namesift

#endif
