#pragma once

#include <cstddef>
#include <vector>

namespace susyqm {

/// Romberg table for sequences with an even-power error expansion
/// f(h) = f + c1 h^2 + c2 h^4 + ..., fed with values at h, h/2, h/4, ...
class RichardsonTable {
public:
    void push(double value);

    std::size_t rows() const noexcept { return table_.size(); }

    /// Highest-order estimate from the latest row.
    double best() const;

    /// |diagonal(j) - diagonal(j-1)|; infinite until two rows exist.
    double last_change() const;

    /// Raw (unextrapolated) value of row j.
    double raw(std::size_t j) const { return table_.at(j).front(); }

private:
    std::vector<std::vector<double>> table_;
};

}  // namespace susyqm
