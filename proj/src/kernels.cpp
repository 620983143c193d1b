#include "leanreg/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace leanreg {

int max_threads() { return omp_get_max_threads(); }
void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

namespace {

// Upper-triangular accumulation of sum_i w_i X_i X_i^T into g, streaming X
// once in row blocks so large designs stay memory friendly. Each output row
// is owned by one thread and blocks arrive in order, so the per-entry
// summation order over i is fixed (bit-identical to the serial reference for
// any thread count). w == nullptr means unit weights.
void accumulate_outer(const Matrix& x, const double* w, Matrix& g) {
    const std::size_t n = x.rows(), d = x.cols();
    constexpr std::size_t block = 256;
    for (std::size_t lo = 0; lo < n; lo += block) {
        const std::size_t hi = std::min(n, lo + block);
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < std::int64_t(d); ++j) {
            double* out = &g(j, 0);
            for (std::size_t i = lo; i < hi; ++i) {
                const double* xi = x.row(i).data();
                const double xj = w ? xi[j] * w[i] : xi[j];
                for (std::size_t k = std::size_t(j); k < d; ++k) out[k] += xj * xi[k];
            }
        }
    }
}

void scale_and_mirror(Matrix& g, double scale) {
    const std::size_t d = g.rows();
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = j; k < d; ++k) g(j, k) *= scale;
        for (std::size_t k = j + 1; k < d; ++k) g(k, j) = g(j, k);
    }
}

}  // namespace

Matrix gram_matrix(const Matrix& x) {
    Matrix g(x.cols(), x.cols());
    accumulate_outer(x, nullptr, g);
    scale_and_mirror(g, 1.0 / double(x.rows()));
    return g;
}

Vector weighted_rowsum(const Matrix& x, std::span<const double> w) {
    const std::size_t n = x.rows(), d = x.cols();
    const std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    Matrix partial(nchunks, d);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < std::int64_t(nchunks); ++c) {
        const std::size_t lo = std::size_t(c) * kReduceChunk;
        const std::size_t hi = std::min(n, lo + kReduceChunk);
        double* acc = &partial(c, 0);
        for (std::size_t i = lo; i < hi; ++i) axpy(w[i], x.row(i), {acc, d});
    }
    Vector out(d, 0.0);
    for (std::size_t c = 0; c < nchunks; ++c) axpy(1.0, partial.row(c), out);
    return out;
}

double weighted_sq_contraction(const Matrix& x, std::span<const double> w,
                               std::span<const double> r) {
    const std::size_t n = x.rows();
    const std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    Vector partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < std::int64_t(nchunks); ++c) {
        const std::size_t lo = std::size_t(c) * kReduceChunk;
        const std::size_t hi = std::min(n, lo + kReduceChunk);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double t = dot(x.row(i), w) * r[i];
            s += t * t;
        }
        partial[c] = s;
    }
    double out = 0.0;
    for (double v : partial) out += v;
    return out;
}

Vector row_dots(const Matrix& x, std::span<const double> v) {
    const std::size_t n = x.rows();
    Vector out(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < std::int64_t(n); ++i) out[i] = dot(x.row(i), v);
    return out;
}

Matrix meat_matrix(const Matrix& x, std::span<const double> r) {
    const std::size_t n = x.rows();
    Vector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = r[i] * r[i];
    Matrix g(x.cols(), x.cols());
    accumulate_outer(x, w.data(), g);
    scale_and_mirror(g, 1.0 / double(n));
    return g;
}

Vector leverage_norms(const Matrix& x, const Matrix& chol_lower) {
    const std::size_t n = x.rows(), d = x.cols();
    Vector out(n);
#pragma omp parallel
    {
        Vector z(d);
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < std::int64_t(n); ++i) {
            auto row = x.row(i);
            std::copy(row.begin(), row.end(), z.begin());
            forward_solve(chol_lower, z);
            out[i] = dot(z, z);
        }
    }
    return out;
}

CholeskyResult spd_cholesky(const Matrix& a, double pivot_floor) {
    const std::size_t d = a.rows();
    Matrix l(d, d);
    double min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        min_pivot = std::min(min_pivot, diag);
        if (diag <= pivot_floor) return {Matrix(), min_pivot};
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < d; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return {std::move(l), min_pivot};
}

void forward_solve(const Matrix& lower, std::span<double> b) {
    const std::size_t d = lower.rows();
    for (std::size_t i = 0; i < d; ++i) {
        double s = b[i];
        const double* li = lower.row(i).data();
        for (std::size_t k = 0; k < i; ++k) s -= li[k] * b[k];
        b[i] = s / li[i];
    }
}

void backward_solve(const Matrix& lower, std::span<double> b) {
    const std::size_t d = lower.rows();
    for (std::size_t ii = d; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < d; ++k) s -= lower(k, ii) * b[k];
        b[ii] = s / lower(ii, ii);
    }
}

Vector chol_solve(const Matrix& lower, std::span<const double> b) {
    Vector z(b.begin(), b.end());
    forward_solve(lower, z);
    backward_solve(lower, z);
    return z;
}

namespace serial {

Matrix gram_matrix(const Matrix& x) {
    const std::size_t n = x.rows(), d = x.cols();
    Matrix g(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double* xi = x.row(i).data();
            const double xj = xi[j];
            for (std::size_t k = j; k < d; ++k) g(j, k) += xj * xi[k];
        }
    }
    const double inv_n = 1.0 / double(n);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = j; k < d; ++k) {
            g(j, k) *= inv_n;
            g(k, j) = g(j, k);
        }
    return g;
}

Vector weighted_rowsum(const Matrix& x, std::span<const double> w) {
    Vector out(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) axpy(w[i], x.row(i), out);
    return out;
}

double weighted_sq_contraction(const Matrix& x, std::span<const double> w,
                               std::span<const double> r) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double t = dot(x.row(i), w) * r[i];
        s += t * t;
    }
    return s;
}

Matrix meat_matrix(const Matrix& x, std::span<const double> r) {
    const std::size_t n = x.rows(), d = x.cols();
    Matrix g(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.row(i).data();
        const double r2 = r[i] * r[i];
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) g(j, k) += xi[j] * xi[k] * r2;
    }
    const double inv_n = 1.0 / double(n);
    for (double& v : g.data()) v *= inv_n;
    return g;
}

Vector leverage_norms(const Matrix& x, const Matrix& chol_lower) {
    const std::size_t n = x.rows(), d = x.cols();
    Vector out(n);
    Vector z(d);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = x.row(i);
        std::copy(row.begin(), row.end(), z.begin());
        forward_solve(chol_lower, z);
        out[i] = dot(z, z);
    }
    return out;
}

}  // namespace serial

}  // namespace leanreg
