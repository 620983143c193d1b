#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace leanreg {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Vector& data() { return data_; }
    const Vector& data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

/// A * x for a dense matrix (rows(A)-vector result).
Vector matvec(const Matrix& a, std::span<const double> x);

/// true if every entry is finite
bool all_finite(std::span<const double> a);

}  // namespace leanreg
