#include "susyqm/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace susyqm {

namespace {

std::string non_finite(double v) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_shortest(double v) {
    if (!std::isfinite(v)) return non_finite(v);
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

std::string format_full(double v) {
    if (!std::isfinite(v)) return non_finite(v);
    std::array<char, 64> buf{};
    auto [end, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), end);
}

}  // namespace susyqm
