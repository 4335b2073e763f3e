#include "crossing/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "crossing/errors.hpp"

namespace crossing {

std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

double parse_double(std::string_view s, std::string_view whole) {
    const std::string copy(s);
    char* end = nullptr;
    const double v = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(v))
        throw ArgumentError("bad grid '" + std::string(whole) + "': expected a:b:n");
    return v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
    const auto p1 = spec.find(':');
    const auto p2 = p1 == std::string_view::npos ? p1 : spec.find(':', p1 + 1);
    if (p2 == std::string_view::npos || spec.find(':', p2 + 1) != std::string_view::npos)
        throw ArgumentError("bad grid '" + std::string(spec) + "': expected a:b:n");
    const double a = parse_double(spec.substr(0, p1), spec);
    const double b = parse_double(spec.substr(p1 + 1, p2 - p1 - 1), spec);
    const auto count = spec.substr(p2 + 1);
    long n = 0;
    const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
    if (ec != std::errc{} || ptr != count.data() + count.size() || n < 1)
        throw ArgumentError("bad grid '" + std::string(spec) + "': n must be a positive integer");
    if (n == 1 && a != b) throw ArgumentError("a one-point grid needs a == b");
    if (b < a) throw ArgumentError("grid end lies before its start");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = b;
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << fields[i];
    }
    out << '\n';
}

}  // namespace crossing
