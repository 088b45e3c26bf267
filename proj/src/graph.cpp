#include "graphss/graph.hpp"

#include <stdexcept>
#include <string>

namespace graphss {

CyclicShiftOperator::CyclicShiftOperator(std::size_t n, std::size_t k) : n_(n), k_(k) {
    if (n == 0) throw std::invalid_argument("cyclic shift: n must be positive");
    if (k >= n)
        throw std::invalid_argument("cyclic shift: k=" + std::to_string(k) + " outside [0, " +
                                    std::to_string(n) + ")");
}

int CyclicShiftOperator::entry(std::size_t i, std::size_t j) const {
    return (j + n_ - i) % n_ == k_ ? 1 : 0;
}

CombinedShiftOperator::CombinedShiftOperator(std::size_t n, std::size_t k) : n_(n), k_(k) {
    if (n == 0) throw std::invalid_argument("combined shift: n must be positive");
    if (k == 0 || k > n)
        throw std::invalid_argument("combined shift: k=" + std::to_string(k) + " outside [1, " +
                                    std::to_string(n) + "]");
}

int CombinedShiftOperator::entry(std::size_t i, std::size_t j) const {
    return (j + n_ - i) % n_ < k_ ? 1 : 0;
}

GraphSignalFrame::GraphSignalFrame(std::vector<double> values, CombinedShiftOperator graph)
    : values_(std::move(values)), graph_(graph) {
    if (values_.size() != graph_.n())
        throw std::invalid_argument("graph signal: " + std::to_string(values_.size()) +
                                    " values for a graph of " + std::to_string(graph_.n()) +
                                    " vertices");
}

CyclicShiftOperator cyclic_shift_matrix(std::size_t n, std::size_t k) { return {n, k}; }

CombinedShiftOperator combined_shift_matrix(std::size_t n, std::size_t k) { return {n, k}; }

namespace {

template <typename Op>
DenseMatrix materialize_entries(const Op& op) {
    DenseMatrix m{op.n(), op.n(), std::vector<int>(op.n() * op.n(), 0)};
    for (std::size_t i = 0; i < op.n(); ++i)
        for (std::size_t j = 0; j < op.n(); ++j) m(i, j) = op.entry(i, j);
    return m;
}

}  // namespace

DenseMatrix materialize(const CyclicShiftOperator& op) { return materialize_entries(op); }

DenseMatrix materialize(const CombinedShiftOperator& op) { return materialize_entries(op); }

DenseMatrix materialize(const ShiftOperator& op) {
    return std::visit([](const auto& o) { return materialize(o); }, op);
}

std::vector<double> apply_shift(const ShiftOperator& op, std::span<const double> values) {
    const std::size_t n = std::visit([](const auto& o) { return o.n(); }, op);
    if (values.size() != n)
        throw std::invalid_argument("apply_shift: frame length " + std::to_string(values.size()) +
                                    " != operator size " + std::to_string(n));

    std::vector<double> out(n, 0.0);
    if (const auto* cyc = std::get_if<CyclicShiftOperator>(&op)) {
        // out_i = x_{(i + k) mod n}
        for (std::size_t i = 0; i < n; ++i) out[i] = values[(i + cyc->k()) % n];
        return out;
    }

    // out_i = sum_{d < k} x_{(i + d) mod n}
    const std::size_t k = std::get<CombinedShiftOperator>(op).k();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t d = 0; d < k; ++d) s += values[(i + d) % n];
        out[i] = s;
    }
    return out;
}

GraphSignalFrame apply_shift(const ShiftOperator& op, const GraphSignalFrame& frame) {
    return {apply_shift(op, frame.values()), frame.graph()};
}

}  // namespace graphss
