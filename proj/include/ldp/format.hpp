#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "ldp/extended_real.hpp"

namespace ldp {

// Finite reals render with 17 significant digits so parsing an emitted
// file recovers the exact double. Infinities render as "inf"/"-inf".
std::string format_real(double v);
std::string format_extended(ExtendedReal v);

// One table with fixed, ordered columns, rendered as CSV (header always
// emitted) or as a JSON array of objects. JSON keeps finite numbers as
// numbers and serializes infinities as the same literal strings.
class OutputTable {
  public:
    using Value = std::variant<double, ExtendedReal, std::int64_t,
                               std::uint64_t, std::string>;

    explicit OutputTable(std::vector<std::string> columns);

    void add_row(std::vector<Value> row);

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Value>> rows_;
};

} // namespace ldp
