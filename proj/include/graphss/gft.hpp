#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphss/fft.hpp"
#include "graphss/graph.hpp"

namespace graphss {

using Complex = std::complex<double>;

enum class BasisKind {
    DenseEig,             ///< eigendecomposition of the materialized adjacency
    CirculantClosedForm,  ///< canonical Fourier vectors, FFT kernels
    Identity,             ///< k = 1 treated as the vertex domain
};

const char* to_string(BasisKind kind);

/// The eigendecomposition has fewer than n independent eigenvectors.
class DefectiveMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An inverse transform produced a frame with a non-negligible imaginary part.
class ImaginaryResidueError : public std::runtime_error {
public:
    ImaginaryResidueError(double residue);
    double residue() const { return residue_; }

private:
    double residue_;
};

struct BasisOptions {
    /// Short-circuit k = 1 to the identity transform (the graph frequency domain
    /// coincides with the vertex domain) instead of the Fourier family.
    bool identity_for_k1 = false;
};

/// Eigenvalues and forward/inverse graph Fourier matrices of a combined shift operator.
///
/// Columns of the inverse matrix are unit-norm eigenvectors; the forward matrix is
/// its inverse. Circulant and identity bases keep only O(n) state and materialize
/// their matrices on request. Immutable once built.
class GftBasis {
public:
    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    BasisKind kind() const { return kind_; }
    const std::vector<Complex>& eigenvalues() const { return eigenvalues_; }

    Eigen::MatrixXcd forward_matrix() const;
    Eigen::MatrixXcd inverse_matrix() const;

    /// Estimated 2-norm condition number of the eigenvector matrix.
    double condition_estimate() const { return condition_; }
    /// Non-fatal diagnostics, e.g. an ill-conditioned eigenvector matrix.
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// True when transforms go through dense matrix-vector products.
    bool uses_matrix_kernel() const { return matrices_ != nullptr; }
    /// Copy of this basis whose transforms use the materialized matrices.
    GftBasis with_matrix_kernel() const;

    /// coefficients = forward * values
    void forward(std::span<const double> values, std::span<Complex> coefficients) const;
    /// values = inverse * coefficients, returned unreduced (complex).
    void inverse(std::span<const Complex> coefficients, std::span<Complex> values) const;

private:
    struct Matrices {
        Eigen::MatrixXcd forward;
        Eigen::MatrixXcd inverse;
    };

    GftBasis() = default;

    std::size_t n_ = 0;
    std::size_t k_ = 0;
    BasisKind kind_ = BasisKind::CirculantClosedForm;
    std::vector<Complex> eigenvalues_;
    double condition_ = 1.0;
    std::vector<std::string> warnings_;
    std::shared_ptr<const Matrices> matrices_;
    std::shared_ptr<const FftKernel> fft_;

    friend GftBasis basis_dense(const CombinedShiftOperator& op);
    friend GftBasis basis_circulant(std::size_t n, std::size_t k, BasisOptions options);
};

/// Result of a general dense eigendecomposition A = V diag(values) V^-1.
struct Eigendecomposition {
    std::vector<Complex> values;
    Eigen::MatrixXcd vectors;  ///< unit-norm columns
    double condition = 1.0;
};

/// Eigendecomposition of an arbitrary real square matrix. Normal matrices get an
/// orthonormal eigenvector set from the complex Schur form. Throws
/// DefectiveMatrixError when the eigenvectors do not span the space.
Eigendecomposition eigendecompose(const Eigen::MatrixXd& a);

/// Graph Fourier basis from the dense eigendecomposition of the materialized operator.
///
/// Eigenvectors are unit norm with the first entry of largest magnitude rotated to
/// be real positive, and sorted by eigenvalue angle, then magnitude. A repeated
/// eigenvalue leaves its eigenspace basis undetermined; such eigenspaces are
/// resolved by diagonalizing the unit cyclic shift restricted to them, which
/// commutes with every combined shift operator.
GftBasis basis_dense(const CombinedShiftOperator& op);

/// Closed-form basis: lambda_m = sum_{i<k} exp(-2 pi i i m / n), inverse columns
/// exp(-2 pi i j m / n) / sqrt(n), unitary. Bin order m = 0 .. n-1.
GftBasis basis_circulant(std::size_t n, std::size_t k, BasisOptions options = {});

/// Graph frequency coefficients of one frame.
struct GraphSpectrum {
    std::vector<Complex> coefficients;
    BasisKind kind = BasisKind::CirculantClosedForm;
};

/// Half-spectrum magnitudes (bins 0 .. n/2) and the full phase record.
struct HalfSpectrum {
    std::vector<double> magnitudes;
    std::vector<double> phases;
};

/// Largest imaginary part tolerated when reducing an inverse transform to real.
inline constexpr double kImaginaryResidueTolerance = 1e-9;

GraphSpectrum gft(const GftBasis& basis, std::span<const double> values);
GraphSpectrum gft(const GftBasis& basis, const GraphSignalFrame& frame);

/// Inverse transform reduced to real samples. Throws ImaginaryResidueError when the
/// largest imaginary part exceeds kImaginaryResidueTolerance.
std::vector<double> igft_values(const GftBasis& basis, const GraphSpectrum& spectrum,
                                double* residue = nullptr);
GraphSignalFrame igft(const GftBasis& basis, const GraphSpectrum& spectrum);

/// Requires even n and a circulant basis, where bin m pairs with bin n - m.
HalfSpectrum half_spectrum(const GraphSpectrum& spectrum);

/// coefficients[m] = magnitudes[min(m, n - m)] * exp(i phases[m])
GraphSpectrum expand_half(const HalfSpectrum& half, std::size_t n);

}  // namespace graphss
