#include "graphss/gft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

namespace graphss {

const char* to_string(BasisKind kind) {
    switch (kind) {
        case BasisKind::DenseEig: return "dense-eig";
        case BasisKind::CirculantClosedForm: return "circulant-closed-form";
        case BasisKind::Identity: return "identity";
    }
    return "unknown";
}

ImaginaryResidueError::ImaginaryResidueError(double residue)
    : std::runtime_error("igft: imaginary residue " + std::to_string(residue) +
                         " exceeds tolerance; spectrum is not conjugate-symmetric"),
      residue_(residue) {}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kIllConditioned = 1e8;
constexpr double kDefective = 1e12;

// exp(sign * 2 pi i * (p mod n) / n), reducing the index first to keep the angle exact.
Complex unit_root(std::size_t p, std::size_t n, double sign) {
    const double angle = sign * kTwoPi * static_cast<double>(p % n) / static_cast<double>(n);
    return {std::cos(angle), std::sin(angle)};
}

void normalize_columns(Eigen::MatrixXcd& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        const double norm = v.col(c).norm();
        if (norm > 0.0) v.col(c) /= norm;
    }
}

// Rotate so the first entry of (near-)largest magnitude is real positive.
void anchor_phase(Eigen::Ref<Eigen::VectorXcd> v) {
    const double largest = v.cwiseAbs().maxCoeff();
    if (largest == 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= largest * (1.0 - 1e-6)) {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = Complex(std::abs(v(i)), 0.0);
            return;
        }
    }
}

// Angle in (-pi, pi], with zero for values indistinguishable from zero.
double canonical_angle(Complex z, double zero_tol) {
    if (std::abs(z) <= zero_tol) return 0.0;
    double a = std::arg(z);
    if (a <= -std::numbers::pi + 1e-9) a += kTwoPi;
    return a;
}

long long quantize(double x) { return std::llround(x * 1e8); }

// (Phi_1 v)_i = v_{(i + 1) mod n}
Eigen::MatrixXcd apply_unit_shift(const Eigen::MatrixXcd& v) {
    const Eigen::Index n = v.rows();
    Eigen::MatrixXcd out(n, v.cols());
    out.topRows(n - 1) = v.bottomRows(n - 1);
    out.row(n - 1) = v.row(0);
    return out;
}

}  // namespace

Eigendecomposition eigendecompose(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw std::invalid_argument("eigendecompose: matrix must be square and non-empty");
    const Eigen::MatrixXcd ac = a.cast<Complex>();
    const double scale = std::max(1.0, a.norm());

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(ac);
    if (schur.info() != Eigen::Success) throw std::runtime_error("eigendecompose: Schur iteration failed");
    const Eigen::MatrixXcd& t = schur.matrixT();
    const double off = t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();

    Eigendecomposition out;
    out.values.resize(static_cast<std::size_t>(a.rows()));
    if (off <= 1e-9 * scale) {
        // Normal matrix: the Schur vectors are an orthonormal eigenbasis.
        for (Eigen::Index i = 0; i < a.rows(); ++i) out.values[static_cast<std::size_t>(i)] = t(i, i);
        out.vectors = schur.matrixU();
        normalize_columns(out.vectors);
        out.condition = 1.0;
        return out;
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(ac);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecompose: eigensolver failed");
    for (Eigen::Index i = 0; i < a.rows(); ++i) out.values[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    out.vectors = solver.eigenvectors();
    normalize_columns(out.vectors);
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(out.vectors).singularValues();
    const double smin = sv(sv.size() - 1);
    out.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (!(out.condition < kDefective))
        throw DefectiveMatrixError("eigendecompose: eigenvectors are linearly dependent (condition " +
                                   std::to_string(out.condition) + "); matrix is defective");
    return out;
}

GftBasis basis_dense(const CombinedShiftOperator& op) {
    const std::size_t n = op.n();
    const DenseMatrix dense = materialize(op);
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dense(i, j);

    Eigendecomposition dec = eigendecompose(a);
    Eigen::MatrixXcd& v = dec.vectors;
    const double tol = 1e-8 * std::max(1.0, static_cast<double>(op.k()));

    // Group repeated eigenvalues and pin down each eigenspace basis with the unit shift.
    std::vector<bool> assigned(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (assigned[i]) continue;
        std::vector<Eigen::Index> cluster;
        for (std::size_t j = i; j < n; ++j) {
            if (!assigned[j] && std::abs(dec.values[j] - dec.values[i]) <= tol) {
                cluster.push_back(static_cast<Eigen::Index>(j));
                assigned[j] = true;
            }
        }
        if (cluster.size() < 2) continue;

        Eigen::MatrixXcd block(v.rows(), static_cast<Eigen::Index>(cluster.size()));
        for (std::size_t c = 0; c < cluster.size(); ++c) block.col(static_cast<Eigen::Index>(c)) = v.col(cluster[c]);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
        const Eigen::MatrixXcd q =
            qr.householderQ() * Eigen::MatrixXcd::Identity(block.rows(), block.cols());
        const Eigen::MatrixXcd compressed = q.adjoint() * apply_unit_shift(q);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> inner(compressed);
        const Eigen::MatrixXcd resolved = q * inner.eigenvectors();
        for (std::size_t c = 0; c < cluster.size(); ++c) {
            v.col(cluster[c]) = resolved.col(static_cast<Eigen::Index>(c));
            dec.values[static_cast<std::size_t>(cluster[c])] = dec.values[i];
        }
    }
    normalize_columns(v);

    std::vector<double> shift_angle(n);
    const Eigen::MatrixXcd shifted = apply_unit_shift(v);
    for (std::size_t c = 0; c < n; ++c) {
        const auto col = static_cast<Eigen::Index>(c);
        anchor_phase(v.col(col));
        shift_angle[c] = canonical_angle(v.col(col).dot(shifted.col(col)), 1e-12);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](std::size_t c) {
        const Complex lambda = dec.values[c];
        return std::make_tuple(quantize(canonical_angle(lambda, tol)), quantize(std::abs(lambda)),
                               quantize(shift_angle[c]));
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return key(x) < key(y); });

    auto matrices = std::make_shared<GftBasis::Matrices>();
    matrices->inverse.resize(v.rows(), v.cols());
    GftBasis basis;
    basis.n_ = n;
    basis.k_ = op.k();
    basis.kind_ = BasisKind::DenseEig;
    basis.eigenvalues_.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        matrices->inverse.col(static_cast<Eigen::Index>(c)) = v.col(static_cast<Eigen::Index>(order[c]));
        basis.eigenvalues_[c] = dec.values[order[c]];
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(matrices->inverse);
    matrices->forward = lu.inverse();
    const double rcond = lu.rcond();
    basis.condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(basis.condition_ < kDefective))
        throw DefectiveMatrixError("basis_dense: eigenvector matrix is singular");
    if (basis.condition_ > kIllConditioned)
        basis.warnings_.push_back("eigenvector matrix is ill-conditioned (condition estimate " +
                                  std::to_string(basis.condition_) + ")");
    basis.matrices_ = std::move(matrices);
    return basis;
}

GftBasis basis_circulant(std::size_t n, std::size_t k, BasisOptions options) {
    if (n < 2) throw std::invalid_argument("basis_circulant: n must be at least 2");
    const CombinedShiftOperator op(n, k);  // validates k

    GftBasis basis;
    basis.n_ = n;
    basis.k_ = op.k();
    if (options.identity_for_k1 && k == 1) {
        basis.kind_ = BasisKind::Identity;
        basis.eigenvalues_.assign(n, Complex(1.0, 0.0));
        return basis;
    }

    basis.kind_ = BasisKind::CirculantClosedForm;
    basis.fft_ = std::make_shared<FftKernel>(n);
    // lambda_m = sum_d c_d exp(-2 pi i d m / n) over the first row c = [1 x k, 0 x (n-k)]
    std::vector<Complex> first_row(n, Complex(0.0, 0.0));
    std::fill_n(first_row.begin(), k, Complex(1.0, 0.0));
    basis.eigenvalues_.resize(n);
    basis.fft_->forward(first_row, basis.eigenvalues_);
    return basis;
}

Eigen::MatrixXcd GftBasis::inverse_matrix() const {
    if (matrices_) return matrices_->inverse;
    const auto size = static_cast<Eigen::Index>(n_);
    if (kind_ == BasisKind::Identity) return Eigen::MatrixXcd::Identity(size, size);
    Eigen::MatrixXcd inv(size, size);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t m = 0; m < n_; ++m)
            inv(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) = scale * unit_root(j * m, n_, -1.0);
    return inv;
}

Eigen::MatrixXcd GftBasis::forward_matrix() const {
    if (matrices_) return matrices_->forward;
    // Unitary: the forward matrix is the conjugate transpose of the inverse.
    return inverse_matrix().adjoint();
}

GftBasis GftBasis::with_matrix_kernel() const {
    GftBasis copy = *this;
    if (!copy.matrices_) {
        auto m = std::make_shared<Matrices>();
        m->inverse = inverse_matrix();
        m->forward = forward_matrix();
        copy.matrices_ = std::move(m);
    }
    return copy;
}

void GftBasis::forward(std::span<const double> values, std::span<Complex> coefficients) const {
    if (values.size() != n_ || coefficients.size() != n_)
        throw std::invalid_argument("gft: frame length " + std::to_string(values.size()) +
                                    " does not match basis size " + std::to_string(n_));
    if (matrices_) {
        const Eigen::Map<const Eigen::VectorXd> x(values.data(), static_cast<Eigen::Index>(n_));
        Eigen::Map<Eigen::VectorXcd>(coefficients.data(), static_cast<Eigen::Index>(n_)) =
            matrices_->forward * x.cast<Complex>();
        return;
    }
    std::transform(values.begin(), values.end(), coefficients.begin(),
                   [](double x) { return Complex(x, 0.0); });
    if (kind_ == BasisKind::Identity) return;
    // coefficient_m = n^-1/2 sum_j x_j exp(+2 pi i j m / n)
    fft_->backward(coefficients, coefficients);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (auto& c : coefficients) c *= scale;
}

void GftBasis::inverse(std::span<const Complex> coefficients, std::span<Complex> values) const {
    if (values.size() != n_ || coefficients.size() != n_)
        throw std::invalid_argument("igft: spectrum length " + std::to_string(coefficients.size()) +
                                    " does not match basis size " + std::to_string(n_));
    if (matrices_) {
        const Eigen::Map<const Eigen::VectorXcd> c(coefficients.data(), static_cast<Eigen::Index>(n_));
        Eigen::Map<Eigen::VectorXcd>(values.data(), static_cast<Eigen::Index>(n_)) = matrices_->inverse * c;
        return;
    }
    if (kind_ == BasisKind::Identity) {
        std::copy(coefficients.begin(), coefficients.end(), values.begin());
        return;
    }
    // x_j = n^-1/2 sum_m c_m exp(-2 pi i j m / n)
    fft_->forward(coefficients, values);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (auto& x : values) x *= scale;
}

GraphSpectrum gft(const GftBasis& basis, std::span<const double> values) {
    GraphSpectrum out;
    out.kind = basis.kind();
    out.coefficients.resize(basis.n());
    basis.forward(values, out.coefficients);
    return out;
}

GraphSpectrum gft(const GftBasis& basis, const GraphSignalFrame& frame) {
    if (frame.graph().k() != basis.k())
        throw std::invalid_argument("gft: frame graph order does not match basis");
    return gft(basis, frame.values());
}

std::vector<double> igft_values(const GftBasis& basis, const GraphSpectrum& spectrum, double* residue) {
    std::vector<Complex> complex_values(basis.n());
    basis.inverse(spectrum.coefficients, complex_values);
    double worst = 0.0;
    std::vector<double> out(basis.n());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = complex_values[i].real();
        worst = std::max(worst, std::abs(complex_values[i].imag()));
    }
    if (residue) *residue = worst;
    if (!(worst < kImaginaryResidueTolerance)) throw ImaginaryResidueError(worst);
    return out;
}

GraphSignalFrame igft(const GftBasis& basis, const GraphSpectrum& spectrum) {
    return {igft_values(basis, spectrum), CombinedShiftOperator(basis.n(), basis.k())};
}

HalfSpectrum half_spectrum(const GraphSpectrum& spectrum) {
    const std::size_t n = spectrum.coefficients.size();
    if (n == 0 || n % 2 != 0) throw std::invalid_argument("half_spectrum: n must be even");
    if (spectrum.kind != BasisKind::CirculantClosedForm)
        throw std::invalid_argument(std::string("half_spectrum: bin pairing undefined for a ") +
                                    to_string(spectrum.kind) + " basis");
    HalfSpectrum half;
    half.magnitudes.resize(n / 2 + 1);
    half.phases.resize(n);
    for (std::size_t m = 0; m <= n / 2; ++m) half.magnitudes[m] = std::abs(spectrum.coefficients[m]);
    for (std::size_t m = 0; m < n; ++m) half.phases[m] = std::arg(spectrum.coefficients[m]);
    return half;
}

GraphSpectrum expand_half(const HalfSpectrum& half, std::size_t n) {
    if (n == 0 || n % 2 != 0) throw std::invalid_argument("expand_half: n must be even");
    if (half.magnitudes.size() != n / 2 + 1 || half.phases.size() != n)
        throw std::invalid_argument("expand_half: expected " + std::to_string(n / 2 + 1) +
                                    " magnitudes and " + std::to_string(n) + " phases");
    GraphSpectrum out;
    out.kind = BasisKind::CirculantClosedForm;
    out.coefficients.resize(n);
    for (std::size_t m = 0; m < n; ++m)
        out.coefficients[m] = std::polar(half.magnitudes[std::min(m, n - m)], half.phases[m]);
    return out;
}

}  // namespace graphss
