#include "susyqm/richardson.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace susyqm {

void RichardsonTable::push(double value) {
    std::vector<double> row{value};
    if (!table_.empty()) {
        const auto& prev = table_.back();
        double factor = 1.0;
        for (std::size_t m = 1; m <= prev.size(); ++m) {
            factor *= 4.0;
            row.push_back(row[m - 1] + (row[m - 1] - prev[m - 1]) / (factor - 1.0));
        }
    }
    table_.push_back(std::move(row));
}

double RichardsonTable::best() const {
    if (table_.empty()) throw std::logic_error("empty Richardson table");
    return table_.back().back();
}

double RichardsonTable::last_change() const {
    if (table_.size() < 2) return std::numeric_limits<double>::infinity();
    return std::fabs(table_.back().back() - table_[table_.size() - 2].back());
}

}  // namespace susyqm
