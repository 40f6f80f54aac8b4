#include "namesift/dates.hpp"

#include <array>
#include <charconv>

namespace namesift {

namespace {

std::optional<int> parse_int(std::string_view s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::optional<int> month_from_abbrev(std::string_view m) {
    static constexpr std::array<std::string_view, 12> kMonths = {
        "Jan", "Feb", "Mar", "Apr", "May", "Jun",
        "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    for (std::size_t i = 0; i < kMonths.size(); ++i) {
        if (m == kMonths[i]) return static_cast<int>(i) + 1;
    }
    return std::nullopt;
}

bool valid_civil(int y, int m, int d) {
    return y >= 1 && y <= 9999 && m >= 1 && m <= 12 && d >= 1 && d <= 31;
}

}  // namespace

std::optional<std::int64_t> parse_iso_date(std::string_view text) {
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto y = parse_int(text.substr(0, 4));
    auto m = parse_int(text.substr(5, 2));
    auto d = parse_int(text.substr(8, 2));
    if (!y || !m || !d || !valid_civil(*y, *m, *d)) return std::nullopt;
    return days_from_civil(*y, *m, *d);
}

std::optional<std::int64_t> parse_tweet_timestamp(std::string_view text) {
    if (auto iso = parse_iso_date(text)) return iso;
    // "Dow Mon DD HH:MM:SS +ZZZZ YYYY"
    if (text.size() < 30) return std::nullopt;
    auto m = month_from_abbrev(text.substr(4, 3));
    auto d = parse_int(text.substr(8, 2));
    auto y = parse_int(text.substr(26, 4));
    if (!y || !m || !d || !valid_civil(*y, *m, *d)) return std::nullopt;
    return days_from_civil(*y, *m, *d);
}

}  // namespace namesift
