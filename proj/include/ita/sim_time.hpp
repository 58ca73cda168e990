#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "ita/errors.hpp"

namespace ita {

/// Simulation time as a non-negative count of microseconds.
///
/// Fixed point keeps long runs drift-free: 2000 additions of 0.5 s land on
/// exactly 1000 s, which floating point does not guarantee for values such as
/// 0.01 s. All config times are parsed to this resolution.
class SimTime {
public:
    static constexpr std::int64_t kMicrosPerSecond = 1'000'000;

    constexpr SimTime() = default;

    static constexpr SimTime from_micros(std::int64_t us) {
        if (us < 0) {
            throw BadParams("negative simulation time");
        }
        return SimTime(us);
    }

    static constexpr SimTime from_seconds(std::int64_t s) { return from_micros(s * kMicrosPerSecond); }

    /// Parses a decimal number of seconds ("0.5", "1000", "0.000392", "2s").
    /// More than six fractional digits is an error rather than a silent rounding.
    static SimTime parse(std::string_view text) {
        std::string_view s = text;
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        if (!s.empty() && s.back() == 's') s.remove_suffix(1);
        if (s.empty()) {
            throw BadParams("empty time value");
        }
        const auto dot = s.find('.');
        const std::string_view whole = s.substr(0, dot);
        const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
        if (whole.empty() && frac.empty()) {
            throw BadParams("malformed time '" + std::string(text) + "'");
        }
        if (frac.size() > 6) {
            throw BadParams("time '" + std::string(text) + "' is finer than 1 microsecond");
        }
        std::int64_t secs = 0;
        if (!whole.empty()) {
            auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), secs);
            if (ec != std::errc{} || p != whole.data() + whole.size() || secs < 0 ||
                secs > std::numeric_limits<std::int64_t>::max() / kMicrosPerSecond - 1) {
                throw BadParams("malformed time '" + std::string(text) + "'");
            }
        }
        std::int64_t micros = 0;
        for (std::size_t i = 0; i < 6; ++i) {
            micros *= 10;
            if (i < frac.size()) {
                const char c = frac[i];
                if (c < '0' || c > '9') {
                    throw BadParams("malformed time '" + std::string(text) + "'");
                }
                micros += c - '0';
            }
        }
        return SimTime(secs * kMicrosPerSecond + micros);
    }

    constexpr std::int64_t micros() const noexcept { return us_; }
    constexpr double seconds() const noexcept { return static_cast<double>(us_) / kMicrosPerSecond; }

    /// Shortest exact decimal: "1000", "0.5", "0.000392".
    std::string str() const {
        std::string out = std::to_string(us_ / kMicrosPerSecond);
        std::int64_t frac = us_ % kMicrosPerSecond;
        if (frac != 0) {
            std::string digits = std::to_string(frac);
            digits.insert(0, 6 - digits.size(), '0');
            while (digits.back() == '0') digits.pop_back();
            out += '.';
            out += digits;
        }
        return out;
    }

    constexpr SimTime operator+(SimTime o) const { return SimTime(us_ + o.us_); }
    constexpr SimTime& operator+=(SimTime o) {
        us_ += o.us_;
        return *this;
    }
    /// Throws when the result would be negative.
    constexpr SimTime operator-(SimTime o) const { return from_micros(us_ - o.us_); }
    constexpr SimTime operator*(std::int64_t k) const { return from_micros(us_ * k); }

    constexpr auto operator<=>(const SimTime&) const = default;

private:
    constexpr explicit SimTime(std::int64_t us) : us_(us) {}

    std::int64_t us_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, SimTime t) { return os << t.str(); }

}  // namespace ita
