/**
 * @file core.hpp
 * @brief Shared numeric types, constants and the error type used across the
 *        Ericksen bar bifurcation toolkit.
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ericksen {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double pi2 = pi * pi;
inline constexpr double pi4 = pi2 * pi2;

inline constexpr const char* toolkit_version = "1.0.0";

/// Failure categories. Usage errors map to exit code 2 in the CLI, numerical
/// failures to exit code 3.
enum class ErrorKind {
    InvalidArgument,
    OutOfDomain,
    CorrectorFailed,
    SingularJacobian,
    StepUnderflow,
    SwitchFailed,
    QuadratureOrder,
    ZeroField,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

    bool is_numerical() const noexcept
    {
        return kind_ == ErrorKind::CorrectorFailed || kind_ == ErrorKind::SingularJacobian ||
               kind_ == ErrorKind::StepUnderflow || kind_ == ErrorKind::SwitchFailed;
    }

private:
    ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& msg)
{
    if (!cond) throw Error(kind, msg);
}

/// (alpha, gamma) pair of the stationary problem. The continuation plane is
/// (alpha, 1/gamma).
struct ModelParams {
    double alpha = 0.0;
    double gamma = 1.0;

    double inv_gamma() const { return 1.0 / gamma; }

    static ModelParams from_inv_gamma(double alpha, double lambda) { return {alpha, 1.0 / lambda}; }

    void validate() const
    {
        require(std::isfinite(alpha) && std::isfinite(gamma), ErrorKind::InvalidArgument,
                "model parameters must be finite");
        require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
        require(alpha >= 0.0, ErrorKind::InvalidArgument, "alpha must be non-negative");
    }
};

inline int sign_of(double v) { return (0.0 < v) - (v < 0.0); }

} // namespace ericksen
