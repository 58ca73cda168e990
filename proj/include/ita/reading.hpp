#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ita/errors.hpp"

namespace ita {

struct Date {
    int year = 2004;
    int month = 1;
    int day = 1;

    bool operator==(const Date&) const = default;
};

/// Time of day; the fraction keeps its original digit count so lines round-trip.
struct TimeOfDay {
    int hour = 0;
    int minute = 0;
    int second = 0;
    std::uint32_t fraction = 0;
    std::uint8_t fraction_digits = 0;

    bool operator==(const TimeOfDay&) const = default;
};

/// One record of the Intel Berkeley Research Lab sensor trace.
struct SensorReading {
    Date date;
    TimeOfDay time;
    std::uint64_t epoch = 0;
    std::uint32_t moteid = 0;
    double temperature = 0.0;  // degrees Celsius
    double humidity = 0.0;     // percent relative
    double light = 0.0;        // lux
    double voltage = 0.0;      // volts

    bool operator==(const SensorReading&) const = default;
};

namespace detail {

struct FieldFailure {
    std::size_t field;  // 1-based
    std::string why;
};

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r' || line[i] == '\n')) ++i;
        const std::size_t start = i;
        while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == '\r' || line[i] == '\n')) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

inline bool parse_finite(std::string_view s, double& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size() && std::isfinite(out);
}

inline bool parse_fixed_digits(std::string_view s, std::size_t n, int& out) {
    return s.size() == n && parse_int(s, out);
}

inline bool parse_date(std::string_view s, Date& d) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    if (!parse_fixed_digits(s.substr(0, 4), 4, d.year) || !parse_fixed_digits(s.substr(5, 2), 2, d.month) ||
        !parse_fixed_digits(s.substr(8, 2), 2, d.day)) {
        return false;
    }
    return d.month >= 1 && d.month <= 12 && d.day >= 1 && d.day <= 31;
}

inline bool parse_time(std::string_view s, TimeOfDay& t) {
    if (s.size() < 8 || s[2] != ':' || s[5] != ':') return false;
    if (!parse_fixed_digits(s.substr(0, 2), 2, t.hour) || !parse_fixed_digits(s.substr(3, 2), 2, t.minute) ||
        !parse_fixed_digits(s.substr(6, 2), 2, t.second)) {
        return false;
    }
    if (t.hour > 23 || t.minute > 59 || t.second > 60) return false;
    t.fraction = 0;
    t.fraction_digits = 0;
    if (s.size() == 8) return true;
    if (s[8] != '.') return false;
    const std::string_view frac = s.substr(9);
    if (frac.empty() || frac.size() > 9) return false;
    for (char c : frac) {
        if (c < '0' || c > '9') return false;
    }
    parse_int(frac, t.fraction);
    t.fraction_digits = static_cast<std::uint8_t>(frac.size());
    return true;
}

inline std::optional<FieldFailure> parse_fields(std::string_view line, SensorReading& r) {
    const auto f = split_ws(line);
    if (f.size() > 8) return FieldFailure{9, "unexpected extra field"};
    if (f.size() < 1 || !parse_date(f[0], r.date)) return FieldFailure{1, "bad or missing date"};
    if (f.size() < 2 || !parse_time(f[1], r.time)) return FieldFailure{2, "bad or missing time"};
    if (f.size() < 3 || !parse_int(f[2], r.epoch)) return FieldFailure{3, "bad or missing epoch"};
    if (f.size() < 4 || !parse_int(f[3], r.moteid)) return FieldFailure{4, "bad or missing moteid"};
    if (f.size() < 5 || !parse_finite(f[4], r.temperature)) return FieldFailure{5, "bad or missing temperature"};
    if (f.size() < 6 || !parse_finite(f[5], r.humidity)) return FieldFailure{6, "bad or missing humidity"};
    if (f.size() < 7 || !parse_finite(f[6], r.light)) return FieldFailure{7, "bad or missing light"};
    if (f.size() < 8 || !parse_finite(f[7], r.voltage)) return FieldFailure{8, "bad or missing voltage"};
    return std::nullopt;
}

inline void append_padded(std::string& out, long long v, int width) {
    std::string s = std::to_string(v);
    if (static_cast<int>(s.size()) < width) out.append(static_cast<std::size_t>(width) - s.size(), '0');
    out += s;
}

inline void append_double(std::string& out, double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, p);
}

}  // namespace detail

/// Parses one whitespace-separated dataset line:
///   date time epoch moteid temperature humidity light voltage
/// All eight fields must be present and the four measurements finite.
inline SensorReading parse_intel_line(std::string_view line, std::size_t line_no = 0) {
    SensorReading r;
    if (auto failure = detail::parse_fields(line, r)) {
        throw ParseError(line_no, failure->field, failure->why);
    }
    return r;
}

inline std::optional<SensorReading> try_parse_intel_line(std::string_view line) {
    SensorReading r;
    if (detail::parse_fields(line, r)) return std::nullopt;
    return r;
}

/// Canonical single-space form; numbers use the shortest round-trip decimal.
inline std::string format_intel_line(const SensorReading& r) {
    std::string out;
    out.reserve(64);
    detail::append_padded(out, r.date.year, 4);
    out += '-';
    detail::append_padded(out, r.date.month, 2);
    out += '-';
    detail::append_padded(out, r.date.day, 2);
    out += ' ';
    detail::append_padded(out, r.time.hour, 2);
    out += ':';
    detail::append_padded(out, r.time.minute, 2);
    out += ':';
    detail::append_padded(out, r.time.second, 2);
    if (r.time.fraction_digits > 0) {
        out += '.';
        detail::append_padded(out, r.time.fraction, r.time.fraction_digits);
    }
    out += ' ';
    out += std::to_string(r.epoch);
    out += ' ';
    out += std::to_string(r.moteid);
    for (double v : {r.temperature, r.humidity, r.light, r.voltage}) {
        out += ' ';
        detail::append_double(out, v);
    }
    return out;
}

}  // namespace ita
