#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace graphss {

/// Dense row-major 0-1 matrix produced by materializing a shift operator.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> data;

    int operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    int& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

/// Cyclic k-shift: entry (i, j) is 1 iff (j - i) mod n == k. A permutation matrix.
class CyclicShiftOperator {
public:
    CyclicShiftOperator(std::size_t n, std::size_t k);

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }

    /// Value of the (i, j) entry without materializing the matrix.
    int entry(std::size_t i, std::size_t j) const;

    friend bool operator==(const CyclicShiftOperator&, const CyclicShiftOperator&) = default;

private:
    std::size_t n_;
    std::size_t k_;
};

/// Combined k-shift: the sum of the cyclic shifts 0 .. k-1. Circulant, with every
/// row and column summing to k. Used as the adjacency matrix of the speech graph.
class CombinedShiftOperator {
public:
    CombinedShiftOperator(std::size_t n, std::size_t k);

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }

    int entry(std::size_t i, std::size_t j) const;

    friend bool operator==(const CombinedShiftOperator&, const CombinedShiftOperator&) = default;

private:
    std::size_t n_;
    std::size_t k_;
};

using ShiftOperator = std::variant<CyclicShiftOperator, CombinedShiftOperator>;

/// A frame of samples indexed by the vertices of the graph defined by a combined
/// shift operator. The values length always equals the operator's vertex count.
class GraphSignalFrame {
public:
    GraphSignalFrame(std::vector<double> values, CombinedShiftOperator graph);

    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    const CombinedShiftOperator& graph() const { return graph_; }
    std::size_t size() const { return values_.size(); }

private:
    std::vector<double> values_;
    CombinedShiftOperator graph_;
};

CyclicShiftOperator cyclic_shift_matrix(std::size_t n, std::size_t k);
CombinedShiftOperator combined_shift_matrix(std::size_t n, std::size_t k);

DenseMatrix materialize(const CyclicShiftOperator& op);
DenseMatrix materialize(const CombinedShiftOperator& op);
DenseMatrix materialize(const ShiftOperator& op);

/// Matrix-vector product with the operator, computed without materializing it.
/// Throws std::invalid_argument on length mismatch.
std::vector<double> apply_shift(const ShiftOperator& op, std::span<const double> values);
GraphSignalFrame apply_shift(const ShiftOperator& op, const GraphSignalFrame& frame);

}  // namespace graphss
