#pragma once

// Dense symmetric eigensolvers, a reorthogonalized Lanczos ground-state
// solver and Schmidt (singular value) spectra. Everything here is real
// and double precision.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ergo::numkern {

/// Real symmetric matrix. Construction rejects anything that is not exactly
/// symmetric, so downstream code never has to pick a triangle.
class SymMatrix {
public:
    explicit SymMatrix(Eigen::MatrixXd entries);

    /// Zero matrix of dimension n.
    static SymMatrix zero(std::size_t n);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const Eigen::MatrixXd& entries() const noexcept { return m_; }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    /// Top-left k x k principal submatrix.
    SymMatrix leading_block(std::size_t k) const;

    /// Largest absolute entry.
    double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

private:
    Eigen::MatrixXd m_;
};

/// Eigenvalues ascending; column k of `vectors` belongs to `values[k]`.
struct EigenSystem {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// Matrix-free symmetric operator: out = A * in.
struct LinearOperator {
    std::size_t dim = 0;
    std::function<void(std::span<const double> in, std::span<double> out)> apply;
};

/// Full eigendecomposition. Eigenvectors are gauge-fixed (first nonzero
/// component positive); nearly-degenerate groups are ordered by the index of
/// each vector's dominant component.
EigenSystem eigh(const SymMatrix& m);

/// The `count` lowest eigenpairs, same conventions as eigh.
EigenSystem eigh_lowest(const SymMatrix& m, std::size_t count);

/// Eigenvalues only, ascending.
Eigen::VectorXd eigvalsh(const SymMatrix& m);

/// Tridiagonal matrix given by its diagonal and off-diagonal. Same
/// conventions as eigh.
EigenSystem eigh_tridiagonal(std::span<const double> diag, std::span<const double> offdiag);
Eigen::VectorXd eigvalsh_tridiagonal(std::span<const double> diag, std::span<const double> offdiag);

struct LanczosResult {
    double energy = 0.0;
    Eigen::VectorXd vector;     // unit norm
    std::size_t iterations = 0; // total operator applications
    std::size_t restarts = 0;
    double residual = 0.0;      // ||A x - E x|| of the returned pair
};

/// Lowest eigenpair by Lanczos with full reorthogonalization. The start
/// vector is drawn from `seed`. When the Krylov basis reaches `max_basis`
/// vectors the iteration restarts from the current Ritz vector. Converged
/// means ||A x - E x|| <= tol * max(1, |E|).
///
/// Throws ConvergenceError after `max_iter` applications of the operator.
LanczosResult lanczos_ground(const LinearOperator& op, std::uint64_t seed, double tol,
                             std::size_t max_iter, std::size_t max_basis = 160);

/// Squared singular values of `psi` viewed as a row-major dim_a x dim_b
/// array, descending, with values below 1e-14 dropped.
std::vector<double> schmidt_values(std::span<const double> psi, std::size_t dim_a,
                                   std::size_t dim_b);

/// Deterministic uniform(-1, 1) vector from a 64-bit seed. Shared by the
/// solvers and the tests that need reproducible probes.
Eigen::VectorXd seeded_vector(std::size_t n, std::uint64_t seed);

}  // namespace ergo::numkern
