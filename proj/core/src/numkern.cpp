#include "ergo/numkern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <lapacke.h>

#include "ergo/errors.hpp"

namespace ergo::numkern {

namespace {

lapack_int as_lapack(std::size_t n) {
    if (n > static_cast<std::size_t>(std::numeric_limits<lapack_int>::max())) {
        throw SizeError("dimension exceeds LAPACK integer range");
    }
    return static_cast<lapack_int>(n);
}

void check_info(lapack_int info, const char* routine) {
    if (info < 0) {
        throw InputError(std::string(routine) + ": illegal argument " + std::to_string(-info));
    }
    if (info > 0) {
        throw ConvergenceError(std::string(routine) + " failed to converge", std::nan(""),
                               static_cast<double>(info));
    }
}

// First component with magnitude above this is the gauge reference.
constexpr double kGaugeFloor = 1e-12;

void fix_gauge(EigenSystem& es, double scale) {
    const Eigen::Index n = es.vectors.rows();
    for (Eigen::Index k = 0; k < es.vectors.cols(); ++k) {
        auto col = es.vectors.col(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(col(i)) > kGaugeFloor) {
                if (col(i) < 0.0) col = -col;
                break;
            }
        }
    }

    // Within clusters of (nearly) equal eigenvalues order the basis by the
    // position of each vector's dominant component.
    const double tie = 1e-12 * std::max(1.0, scale);
    Eigen::Index start = 0;
    const Eigen::Index m = es.values.size();
    while (start < m) {
        Eigen::Index stop = start + 1;
        while (stop < m && es.values(stop) - es.values(stop - 1) <= tie) ++stop;
        if (stop - start > 1) {
            std::vector<Eigen::Index> order(static_cast<std::size_t>(stop - start));
            std::iota(order.begin(), order.end(), start);
            auto dominant = [&](Eigen::Index k) {
                Eigen::Index idx = 0;
                es.vectors.col(k).cwiseAbs().maxCoeff(&idx);
                return idx;
            };
            std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
                return dominant(a) < dominant(b);
            });
            Eigen::MatrixXd block(n, stop - start);
            Eigen::VectorXd vals(stop - start);
            for (std::size_t t = 0; t < order.size(); ++t) {
                block.col(static_cast<Eigen::Index>(t)) = es.vectors.col(order[t]);
                vals(static_cast<Eigen::Index>(t)) = es.values(order[t]);
            }
            es.vectors.middleCols(start, stop - start) = block;
            es.values.segment(start, stop - start) = vals;
        }
        start = stop;
    }
}

void require_finite(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw InputError("matrix has non-finite entries");
}

}  // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) throw InputError("SymMatrix must be square");
    if (m_.rows() < 1) throw InputError("SymMatrix dimension must be >= 1");
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < m_.rows(); ++i) {
            const double a = m_(i, j);
            const double b = m_(j, i);
            if (a != b && !(std::isnan(a) && std::isnan(b))) {
                throw InputError("SymMatrix entries not symmetric at (" + std::to_string(i) +
                                 "," + std::to_string(j) + ")");
            }
        }
    }
}

SymMatrix SymMatrix::zero(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    return SymMatrix(Eigen::MatrixXd::Zero(k, k));
}

SymMatrix SymMatrix::leading_block(std::size_t k) const {
    if (k < 1 || k > dim()) throw InputError("leading_block size out of range");
    const auto kk = static_cast<Eigen::Index>(k);
    return SymMatrix(m_.topLeftCorner(kk, kk));
}

EigenSystem eigh(const SymMatrix& m) {
    require_finite(m.entries());
    const lapack_int n = as_lapack(m.dim());
    Eigen::MatrixXd a = m.entries();
    EigenSystem es;
    es.values.resize(n);
    es.vectors.resize(n, n);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, a.data(), n, 0.0, 0.0, 0, 0, 0.0,
                       &found, es.values.data(), es.vectors.data(), n, isuppz.data());
    check_info(info, "dsyevr");
    fix_gauge(es, m.max_abs());
    return es;
}

EigenSystem eigh_lowest(const SymMatrix& m, std::size_t count) {
    require_finite(m.entries());
    if (count < 1 || count > m.dim()) throw InputError("eigh_lowest: count out of range");
    const lapack_int n = as_lapack(m.dim());
    const auto k = static_cast<lapack_int>(count);
    Eigen::MatrixXd a = m.entries();
    Eigen::VectorXd w(n);
    EigenSystem es;
    es.vectors.resize(n, k);
    std::vector<lapack_int> isuppz(2 * count);
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, k, 0.0,
                       &found, w.data(), es.vectors.data(), n, isuppz.data());
    check_info(info, "dsyevr");
    if (found != k) throw ConvergenceError("dsyevr returned too few eigenpairs", w(0), 0.0);
    es.values = w.head(k);
    fix_gauge(es, m.max_abs());
    return es;
}

Eigen::VectorXd eigvalsh(const SymMatrix& m) {
    require_finite(m.entries());
    const lapack_int n = as_lapack(m.dim());
    Eigen::MatrixXd a = m.entries();
    Eigen::VectorXd w(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    check_info(info, "dsyevd");
    return w;
}

namespace {

void check_tridiagonal(std::span<const double> diag, std::span<const double> offdiag) {
    if (diag.empty()) throw InputError("tridiagonal matrix must have dimension >= 1");
    if (offdiag.size() + 1 != diag.size()) {
        throw InputError("off-diagonal length must be dimension - 1");
    }
    auto finite = [](double x) { return std::isfinite(x); };
    if (!std::all_of(diag.begin(), diag.end(), finite) ||
        !std::all_of(offdiag.begin(), offdiag.end(), finite)) {
        throw InputError("tridiagonal matrix has non-finite entries");
    }
}

}  // namespace

EigenSystem eigh_tridiagonal(std::span<const double> diag, std::span<const double> offdiag) {
    check_tridiagonal(diag, offdiag);
    const lapack_int n = as_lapack(diag.size());
    std::vector<double> d(diag.begin(), diag.end());
    // dstevr wants a length-n work copy of the off-diagonal.
    std::vector<double> e(offdiag.begin(), offdiag.end());
    e.push_back(0.0);
    EigenSystem es;
    es.values.resize(n);
    es.vectors.resize(n, n);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, 0.0,
                       &found, es.values.data(), es.vectors.data(), n, isuppz.data());
    check_info(info, "dstevr");
    double scale = 0.0;
    for (double x : diag) scale = std::max(scale, std::abs(x));
    for (double x : offdiag) scale = std::max(scale, std::abs(x));
    fix_gauge(es, scale);
    return es;
}

Eigen::VectorXd eigvalsh_tridiagonal(std::span<const double> diag, std::span<const double> offdiag) {
    check_tridiagonal(diag, offdiag);
    const lapack_int n = as_lapack(diag.size());
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
    std::vector<double> e(offdiag.begin(), offdiag.end());
    e.push_back(0.0);
    const lapack_int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', n, d.data(), e.data(), nullptr, 1);
    check_info(info, "dstev");
    return d;
}

Eigen::VectorXd seeded_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        // 53 random mantissa bits mapped onto [-1, 1).
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        v(i) = 2.0 * u - 1.0;
    }
    return v;
}

namespace {

struct RitzPair {
    double value;
    Eigen::VectorXd coeffs;
};

RitzPair lowest_ritz(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const auto k = static_cast<lapack_int>(alpha.size());
    std::vector<double> d(alpha);
    std::vector<double> e(beta.begin(), beta.begin() + (k - 1));
    e.push_back(0.0);
    Eigen::MatrixXd z(k, k);
    const lapack_int info =
        LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', k, d.data(), e.data(), z.data(), k);
    check_info(info, "dstev");
    return {d[0], z.col(0)};
}

void apply(const LinearOperator& op, const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    op.apply(std::span<const double>(in.data(), static_cast<std::size_t>(in.size())),
             std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
}

}  // namespace

LanczosResult lanczos_ground(const LinearOperator& op, std::uint64_t seed, double tol,
                             std::size_t max_iter, std::size_t max_basis) {
    const std::size_t n = op.dim;
    if (n == 0 || !op.apply) throw InputError("lanczos_ground: empty operator");
    if (!(tol > 0.0)) throw InputError("lanczos_ground: tol must be positive");
    const auto nn = static_cast<Eigen::Index>(n);

    LanczosResult result;
    Eigen::VectorXd x = seeded_vector(n, seed);
    x.normalize();
    Eigen::VectorXd w(nn);

    const auto cap = static_cast<Eigen::Index>(std::max<std::size_t>(2, std::min(max_basis, n)));
    Eigen::MatrixXd basis(nn, std::min<Eigen::Index>(cap, nn));
    double best = std::numeric_limits<double>::infinity();
    double best_residual = std::numeric_limits<double>::infinity();

    bool done = (n == 1);
    while (!done) {
        std::vector<double> alpha;
        std::vector<double> beta;
        basis.col(0) = x;
        const Eigen::Index width = basis.cols();
        for (Eigen::Index j = 0; j < width; ++j) {
            if (result.iterations >= max_iter) {
                throw ConvergenceError("lanczos_ground: no convergence after " +
                                           std::to_string(max_iter) + " iterations",
                                       best, best_residual);
            }
            const Eigen::VectorXd vj = basis.col(j);
            apply(op, vj, w);
            ++result.iterations;
            const double a = vj.dot(w);
            w -= a * vj;
            if (j > 0) w -= beta.back() * basis.col(j - 1);
            // Classical Gram-Schmidt against every stored vector, twice.
            for (int pass = 0; pass < 2; ++pass) {
                const Eigen::VectorXd overlap = basis.leftCols(j + 1).transpose() * w;
                w.noalias() -= basis.leftCols(j + 1) * overlap;
            }
            const double b = w.norm();
            alpha.push_back(a);

            const RitzPair ritz = lowest_ritz(alpha, beta);
            const double residual = b * std::abs(ritz.coeffs(j));
            if (ritz.value < best || residual < best_residual) {
                best = ritz.value;
                best_residual = residual;
            }
            const double scale = std::max(1.0, std::abs(ritz.value));
            const bool converged = residual <= tol * scale;
            const bool breakdown = b <= 1e-14 * scale;
            if (converged || breakdown || j + 1 == width) {
                x = basis.leftCols(j + 1) * ritz.coeffs;
                x.normalize();
                if (converged || breakdown) done = true;
                else ++result.restarts;
                break;
            }
            beta.push_back(b);
            basis.col(j + 1) = w / b;
        }
    }

    apply(op, x, w);
    ++result.iterations;
    result.energy = x.dot(w);
    result.residual = (w - result.energy * x).norm();
    result.vector = std::move(x);
    return result;
}

std::vector<double> schmidt_values(std::span<const double> psi, std::size_t dim_a,
                                   std::size_t dim_b) {
    if (dim_a == 0 || dim_b == 0 || psi.size() != dim_a * dim_b) {
        throw InputError("schmidt_values: length(psi) != dim_a * dim_b");
    }
    // A row-major dim_a x dim_b array is the column-major dim_b x dim_a
    // transpose; singular values are the same.
    const lapack_int rows = as_lapack(dim_b);
    const lapack_int cols = as_lapack(dim_a);
    std::vector<double> a(psi.begin(), psi.end());
    std::vector<double> s(std::min(dim_a, dim_b));
    const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows,
                                           s.data(), nullptr, 1, nullptr, 1);
    check_info(info, "dgesdd");

    std::vector<double> p;
    p.reserve(s.size());
    for (double sv : s) {
        const double q = sv * sv;
        if (q >= 1e-14) p.push_back(q);
    }
    std::sort(p.begin(), p.end(), std::greater<>());
    return p;
}

}  // namespace ergo::numkern
