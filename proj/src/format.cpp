#include "ldp/format.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace ldp {

std::string format_real(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_extended(ExtendedReal v) { return format_real(v.as_double()); }

OutputTable::OutputTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void OutputTable::add_row(std::vector<Value> row) {
    if (row.size() != columns_.size())
        throw std::logic_error("OutputTable: row width mismatch");
    rows_.push_back(std::move(row));
}

void OutputTable::write_csv(std::ostream& os) const {
    for (std::size_t c = 0; c < columns_.size(); ++c)
        os << (c ? "," : "") << columns_[c];
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c)
                os << ',';
            std::visit(
                [&os](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>)
                        os << format_real(v);
                    else if constexpr (std::is_same_v<T, ExtendedReal>)
                        os << format_extended(v);
                    else
                        os << v;
                },
                row[c]);
        }
        os << '\n';
    }
}

void OutputTable::write_json(std::ostream& os) const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::string& key = columns_[c];
            std::visit(
                [&obj, &key](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isinf(v))
                            obj[key] = v > 0 ? "inf" : "-inf";
                        else
                            obj[key] = v;
                    } else if constexpr (std::is_same_v<T, ExtendedReal>) {
                        if (v.is_finite())
                            obj[key] = v.value();
                        else
                            obj[key] = v.is_pos_inf() ? "inf" : "-inf";
                    } else {
                        obj[key] = v;
                    }
                },
                row[c]);
        }
        arr.push_back(std::move(obj));
    }
    os << arr.dump(2) << '\n';
}

} // namespace ldp
