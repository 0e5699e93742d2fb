#ifndef LRA_FACTORIZATION_HPP
#define LRA_FACTORIZATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lra/error.hpp"
#include "lra/linalg.hpp"
#include "lra/relation_matrix.hpp"
#include "lra/word_pair.hpp"

namespace lra {

namespace detail {

/// One-sided Jacobi (Hestenes) SVD of a tall matrix stored as columns.
/// On return `cols` holds U * Sigma column by column and `v` the right
/// singular vectors (as columns), unsorted.
inline void one_sided_jacobi(std::vector<std::vector<double>>& cols, std::vector<std::vector<double>>& v,
                             int max_sweeps = 80) {
    const std::size_t c = cols.size();
    v.assign(c, std::vector<double>(c, 0.0));
    for (std::size_t i = 0; i < c; ++i) v[i][i] = 1.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < c; ++i) {
            for (std::size_t j = i + 1; j < c; ++j) {
                auto& a = cols[i];
                auto& b = cols[j];
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t r = 0; r < a.size(); ++r) {
                    alpha += a[r] * a[r];
                    beta += b[r] * b[r];
                    gamma += a[r] * b[r];
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t r = 0; r < a.size(); ++r) {
                    const double x = a[r], y = b[r];
                    a[r] = cs * x - sn * y;
                    b[r] = sn * x + cs * y;
                }
                auto& vi = v[i];
                auto& vj = v[j];
                for (std::size_t r = 0; r < c; ++r) {
                    const double x = vi[r], y = vj[r];
                    vi[r] = cs * x - sn * y;
                    vj[r] = sn * x + cs * y;
                }
            }
        }
        if (!rotated) break;
    }
}

/// Gram-Schmidt with one reorthogonalization pass. Columns whose residual
/// falls below `drop_tol` of their original norm are discarded, so the
/// result may have fewer columns than the input.
inline DenseMatrix orthonormalize(const DenseMatrix& y, double drop_tol = 1e-10) {
    std::vector<std::vector<double>> basis;
    for (std::size_t c = 0; c < y.cols(); ++c) {
        std::vector<double> col(y.rows());
        for (std::size_t r = 0; r < y.rows(); ++r) col[r] = y(r, c);
        double original = 0.0;
        for (double x : col) original += x * x;
        original = std::sqrt(original);
        if (original == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) {
                double d = 0.0;
                for (std::size_t r = 0; r < col.size(); ++r) d += q[r] * col[r];
                for (std::size_t r = 0; r < col.size(); ++r) col[r] -= d * q[r];
            }
        double norm = 0.0;
        for (double x : col) norm += x * x;
        norm = std::sqrt(norm);
        if (norm <= drop_tol * original) continue;
        for (double& x : col) x /= norm;
        basis.push_back(std::move(col));
    }
    DenseMatrix q(y.rows(), basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c)
        for (std::size_t r = 0; r < y.rows(); ++r) q(r, c) = basis[c][r];
    return q;
}

/// Standard normal draws built from raw mt19937_64 output so the stream is
/// identical on every standard library.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (cached_) {
            cached_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        cached_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool cached_ = false;
};

} // namespace detail

struct SvdOptions {
    std::size_t oversample = 10;
    std::size_t power_iterations = 2;
    /// Singular values at or below rank_tolerance * sigma_max count as zero.
    double rank_tolerance = 1e-10;
};

/// Leading singular triplets of a matrix (V is not retained).
struct TruncatedFactorization {
    DenseMatrix u;                   // m x k_effective, orthonormal columns
    std::vector<double> sigma;       // k_effective values, non-increasing
    std::size_t k_effective = 0;
    std::size_t requested_k = 0;
    std::size_t numerical_rank = 0;  // rank seen within the computed subspace
    std::vector<std::string> warnings;
};

/// Truncated SVD by seeded randomized subspace iteration:
///   Y = X * Omega, a few rounds of power iteration with re-orthonormalization,
///   then an exact one-sided Jacobi SVD of the small projected matrix Q^T X.
/// When k + oversample reaches min(m, n) the subspace covers the whole range
/// and the result is exact to rounding. k is clamped to the numerical rank.
/// Each left singular vector is signed so its largest-magnitude entry is positive.
inline TruncatedFactorization truncated_svd(const SparseRows& x, std::size_t k, std::uint64_t seed,
                                            const SvdOptions& opts = {}) {
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    if (m < 2 || n < 1) throw Error("truncated_svd needs m >= 2 and n >= 1");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    for (std::size_t r = 0; r < m; ++r)
        for (const auto& e : x.row(r))
            if (!std::isfinite(e.value)) throw Error("matrix contains non-finite values");

    TruncatedFactorization out;
    out.requested_k = k;
    const std::size_t full = std::min(m, n);
    if (k > full) {
        out.warnings.push_back("k=" + std::to_string(k) + " exceeds min(m,n)=" + std::to_string(full) + "; clamped");
        k = full;
    }
    const std::size_t width = std::min(k + opts.oversample, full);

    detail::GaussianStream gauss(seed);
    DenseMatrix omega(n, width);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < width; ++c) omega(r, c) = gauss.next();

    DenseMatrix q = detail::orthonormalize(x.multiply(omega));
    for (std::size_t it = 0; it < opts.power_iterations && q.cols() > 0; ++it) {
        const DenseMatrix z = detail::orthonormalize(x.transpose_multiply(q));
        if (z.cols() == 0) break;
        q = detail::orthonormalize(x.multiply(z));
    }
    const std::size_t l = q.cols();
    if (l == 0) {
        out.u = DenseMatrix(m, 0);
        out.warnings.push_back("matrix is zero; no singular values");
        return out;
    }

    // B^T = X^T Q is n x l. Its Jacobi SVD B^T = W~ S Wt gives B = Wt S W~^T,
    // so the left vectors of X are Q * Wt.
    const DenseMatrix bt = x.transpose_multiply(q);
    std::vector<std::vector<double>> cols(l, std::vector<double>(n));
    for (std::size_t c = 0; c < l; ++c)
        for (std::size_t r = 0; r < n; ++r) cols[c][r] = bt(r, c);
    std::vector<std::vector<double>> w;
    detail::one_sided_jacobi(cols, w);

    std::vector<double> sv(l);
    for (std::size_t c = 0; c < l; ++c) {
        double s = 0.0;
        for (double v : cols[c]) s += v * v;
        sv[c] = std::sqrt(s);
    }
    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sv[a] > sv[b]; });

    const double smax = sv[order[0]];
    std::size_t rank = 0;
    for (std::size_t i : order)
        if (smax > 0.0 && sv[i] > opts.rank_tolerance * smax) ++rank;
    out.numerical_rank = rank;
    if (k > rank) {
        out.warnings.push_back("k=" + std::to_string(k) + " exceeds numerical rank " + std::to_string(rank) + "; clamped");
        k = rank;
    }
    out.k_effective = k;
    out.sigma.resize(k);
    out.u = DenseMatrix(m, k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t src = order[j];
        out.sigma[j] = sv[src];
        const auto& wcol = w[src];
        std::size_t argmax = 0;
        double best = -1.0;
        for (std::size_t r = 0; r < m; ++r) {
            double v = 0.0;
            const auto qrow = q.row(r);
            for (std::size_t t = 0; t < l; ++t) v += qrow[t] * wcol[t];
            out.u(r, j) = v;
            if (std::abs(v) > best) {
                best = std::abs(v);
                argmax = r;
            }
        }
        if (out.u(argmax, j) < 0.0)
            for (std::size_t r = 0; r < m; ++r) out.u(r, j) = -out.u(r, j);
    }
    return out;
}

inline TruncatedFactorization truncated_svd(const SparseRelationMatrix& matrix, std::size_t k, std::uint64_t seed,
                                            const SvdOptions& opts = {}) {
    return truncated_svd(matrix.cells(), k, seed, opts);
}

/// Row vectors for word pairs, all cosines are taken against these. Rows
/// are either U_k * Sigma_k or, with SVD disabled, the weighted matrix rows.
class ProjectedSpace {
public:
    ProjectedSpace() = default;
    ProjectedSpace(DenseMatrix vectors, std::vector<WordPair> rows) : vectors_(std::move(vectors)), rows_(std::move(rows)) {
        if (rows_.size() != vectors_.rows()) throw std::invalid_argument("row map does not match projection rows");
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (!index_.emplace(rows_[i], i).second) throw std::invalid_argument("duplicate row " + rows_[i].str());
    }

    std::size_t rows() const { return vectors_.rows(); }
    std::size_t dimension() const { return vectors_.cols(); }
    const DenseMatrix& vectors() const { return vectors_; }
    const std::vector<WordPair>& row_pairs() const { return rows_; }

    bool contains(const WordPair& p) const { return index_.contains(p); }

    std::optional<std::span<const double>> row(const WordPair& p) const {
        const auto it = index_.find(p);
        if (it == index_.end()) return std::nullopt;
        return vectors_.row(it->second);
    }

private:
    DenseMatrix vectors_;
    std::vector<WordPair> rows_;
    std::unordered_map<WordPair, std::size_t, WordPairHash> index_;
};

/// U_k scaled column-wise by sigma_k.
inline ProjectedSpace project(const TruncatedFactorization& f, std::vector<WordPair> row_pairs) {
    DenseMatrix v(f.u.rows(), f.k_effective);
    for (std::size_t r = 0; r < v.rows(); ++r)
        for (std::size_t c = 0; c < f.k_effective; ++c) v(r, c) = f.u(r, c) * f.sigma[c];
    return ProjectedSpace(std::move(v), std::move(row_pairs));
}

/// The weighted matrix itself used as the space (SVD ablation).
inline ProjectedSpace unprojected_space(const SparseRelationMatrix& weighted) {
    return ProjectedSpace(weighted.cells().to_dense(), weighted.row_pairs());
}

/// Cosine between the rows of two pairs; nullopt when either row is missing
/// or has zero length.
inline std::optional<double> row_cosine(const ProjectedSpace& space, const WordPair& p, const WordPair& q) {
    const auto a = space.row(p);
    const auto b = space.row(q);
    if (!a || !b) return std::nullopt;
    return cosine(*a, *b);
}

} // namespace lra

#endif
