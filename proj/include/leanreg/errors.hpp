#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace leanreg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularGram : Error {
    explicit SingularGram(double pivot)
        : Error("gram matrix is numerically singular (min pivot " +
                std::to_string(pivot) + ")"),
          min_pivot(pivot) {}
    double min_pivot;
};

struct DegenerateLeaveOneOut : Error {
    explicit DegenerateLeaveOneOut(std::size_t i)
        : Error("leave-one-out update degenerate at row " + std::to_string(i)),
          index(i) {}
    std::size_t index;
};

struct ZeroContrast : Error {
    ZeroContrast() : Error("contrast vector has zero norm") {}
};

struct DomainError : Error {
    using Error::Error;
};

struct BatchTooSmall : Error {
    BatchTooSmall(int n_batches_, std::size_t n_, std::size_t d_)
        : Error("cannot split n=" + std::to_string(n_) + " rows into " +
                std::to_string(n_batches_) + " batches of more than d=" +
                std::to_string(d_) + " rows each"),
          n_batches(n_batches_), n(n_), d(d_) {}
    int n_batches;
    std::size_t n;
    std::size_t d;
};

struct BootstrapDegenerate : Error {
    using Error::Error;
};

struct EmptyInput : Error {
    EmptyInput() : Error("empty input sequence") {}
};

struct UnknownPopulation : Error {
    UnknownPopulation()
        : Error("data-generating process does not expose its population "
                "gram matrix and projection parameter") {}
};

struct NotSymmetric : Error {
    NotSymmetric() : Error("matrix is not symmetric") {}
};

struct ConfigError : Error {
    using Error::Error;
};

struct DataFormatError : Error {
    using Error::Error;
};

}  // namespace leanreg
