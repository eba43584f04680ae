#include "chsh/angles.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>

namespace chsh {

namespace {

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Parses a decimal number at the front of s; advances s past it.
bool eat_number(std::string_view& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr == begin) return false;
    s.remove_prefix(static_cast<std::size_t>(ptr - begin));
    return true;
}

}  // namespace

double parse_angle(std::string_view token) {
    std::string_view s = strip(token);
    if (s.empty()) throw std::invalid_argument("empty angle token");

    double sign = 1.0;
    if (s.front() == '+' || s.front() == '-') {
        sign = (s.front() == '-') ? -1.0 : 1.0;
        s.remove_prefix(1);
    }

    double coeff = 1.0;
    bool have_coeff = eat_number(s, coeff);

    bool have_pi = false;
    if (s.size() >= 2 && (s.substr(0, 2) == "pi" || s.substr(0, 2) == "PI")) {
        have_pi = true;
        s.remove_prefix(2);
    }
    if (!have_coeff && !have_pi)
        throw std::invalid_argument("malformed angle token: " + std::string(token));

    double divisor = 1.0;
    if (!s.empty() && s.front() == '/') {
        s.remove_prefix(1);
        if (!eat_number(s, divisor) || divisor == 0.0)
            throw std::invalid_argument("malformed angle divisor in: " + std::string(token));
    }
    if (!strip(s).empty())
        throw std::invalid_argument("trailing characters in angle token: " + std::string(token));

    double value = sign * coeff * (have_pi ? kPi : 1.0) / divisor;
    if (!std::isfinite(value))
        throw std::invalid_argument("non-finite angle: " + std::string(token));
    return value;
}

}  // namespace chsh
