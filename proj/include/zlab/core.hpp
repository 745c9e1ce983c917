#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace zlab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Value of a holomorphic function together with its first two
/// s-derivatives.  Unused slots stay zero when a lower order is requested.
struct Jet {
    Complex value{};
    Complex d1{};
    Complex d2{};

    Complex operator[](int k) const { return k == 0 ? value : (k == 1 ? d1 : d2); }
};

inline Jet operator+(const Jet& a, const Jet& b) { return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet operator-(const Jet& a, const Jet& b) { return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet operator*(Complex c, const Jet& a) { return {c * a.value, c * a.d1, c * a.d2}; }
inline Jet operator*(const Jet& a, const Jet& b)
{
    return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
            a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}

/// exp of a jet given in logarithmic form (log g, (log g)', (log g)'').
inline Jet exp_jet(const Jet& log_form)
{
    const Complex e = std::exp(log_form.value);
    return {e, e * log_form.d1, e * (log_form.d2 + log_form.d1 * log_form.d1)};
}

/// Value with an estimate of its absolute truncation error.
struct EvalResult {
    Complex value{};
    double est_abs_error = 0.0;
};

/// Jet with a per-component error estimate.
struct JetResult {
    Jet jet;
    std::array<double, 3> err{0.0, 0.0, 0.0};

    EvalResult component(int k) const { return {jet[k], err[static_cast<std::size_t>(k)]}; }
};

enum class ErrorCode {
    InvalidArgument,
    Pole,
    PrecisionUnreachable,
    OnContourZero,
    NonConvergence,
    Divergence,
    BudgetExceeded,
    IsolationViolation,
    NoEmptyShell,
    WrongZeroCount,
    NoCollision,
    HigherOrderZero,
    SingularStall,
    StepUnderflow,
    TooCloseToZero,
    BoundaryZero,
    IndentationOverlap,
    PhaseTracking,
    Io,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library.  The code decides the CLI exit
/// status: 2 for domain errors, 3 for convergence failures, 4 for budgets.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    int exit_code() const noexcept;

private:
    ErrorCode code_;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace zlab
