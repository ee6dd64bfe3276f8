#include "ldp/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace ldp {

namespace {

double parse_number(std::string_view text, std::size_t pos,
                    std::string_view token) {
    double v = 0.0;
    auto [end, ec] =
        std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || end != token.data() + token.size())
        throw ParseError("grid: expected a number, got '" +
                             std::string(token) + "'",
                         pos);
    (void)text;
    return v;
}

std::vector<std::pair<std::size_t, std::string_view>>
split(std::string_view text, char sep) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t start = 0;
    while (true) {
        std::size_t at = text.find(sep, start);
        if (at == std::string_view::npos) {
            out.emplace_back(start, text.substr(start));
            return out;
        }
        out.emplace_back(start, text.substr(start, at - start));
        start = at + 1;
    }
}

std::vector<double> expand_range(std::string_view text) {
    auto parts = split(text, ':');
    if (parts.size() != 3)
        throw ParseError("grid: range needs the form A:B:STEP", 0);
    double a = parse_number(text, parts[0].first, parts[0].second);
    double b = parse_number(text, parts[1].first, parts[1].second);
    double step = parse_number(text, parts[2].first, parts[2].second);
    if (!(step > 0.0))
        throw ParseError("grid: STEP must be positive", parts[2].first);
    if (b < a)
        throw ParseError("grid: B must be at least A", parts[1].first);

    double ratio = (b - a) / step;
    long long count = static_cast<long long>(std::floor(ratio + 1e-9));
    std::vector<double> out;
    out.reserve(count + 1);
    for (long long k = 0; k <= count; ++k)
        out.push_back(a + static_cast<double>(k) * step);
    if (std::abs(ratio - std::round(ratio)) <= 1e-9)
        out.back() = b;
    return out;
}

} // namespace

std::vector<double> parse_grid(std::string_view text) {
    if (text.empty())
        throw ParseError("grid: empty", 0);
    if (text.find(':') != std::string_view::npos)
        return expand_range(text);
    std::vector<double> out;
    for (auto [pos, token] : split(text, ','))
        out.push_back(parse_number(text, pos, token));
    return out;
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    for (double v : parse_grid(text)) {
        double r = std::round(v);
        if (std::abs(v - r) > 1e-9 || r < 1.0 || r > 1e9)
            throw ParseError("grid: expected positive integers", 0);
        out.push_back(static_cast<int>(r));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace ldp
