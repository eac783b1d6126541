#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chemorep {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad index, bad size, bad parameter).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Mesh construction or topology failure.
class MeshError : public Error {
public:
    using Error::Error;
};

/// Linear solver did not reach its tolerance, broke down, or hit a singular factorization.
class LinearSolveError : public Error {
public:
    LinearSolveError(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations)
    {
    }

    [[nodiscard]] double residual() const noexcept { return residual_; }
    [[nodiscard]] int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// Nonlinear iteration exceeded its iteration cap. Carries the increment history.
class NonlinearSolveError : public Error {
public:
    NonlinearSolveError(const std::string& what, std::vector<double> increments)
        : Error(what), increments_(std::move(increments))
    {
    }

    [[nodiscard]] const std::vector<double>& increments() const noexcept { return increments_; }

private:
    std::vector<double> increments_;
};

/// File input/output failure. The message names the path.
class IoError : public Error {
public:
    using Error::Error;
};

#define CHEMOREP_REQUIRE(cond, msg)                                                                \
    do {                                                                                           \
        if (!(cond)) throw ::chemorep::InvalidArgument(msg);                                       \
    } while (false)

} // namespace chemorep
