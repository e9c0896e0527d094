#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nsmorse {

enum class ErrorKind {
    Validation,
    PropagationBlowup,
    BoundaryZero,
    NonConvergence,
    Degenerate,
    EndpointDegenerate,
    MatchingAmbiguity,
    TuringViolated,
    DegenerateThreshold,
    NotConjugatePoint,
    Precondition,
    Mismatch,
};

std::string_view to_string(ErrorKind kind);

/// True for errors caused by the input problem itself (degenerate or
/// ill-posed data) as opposed to a failure of the numerics.
bool is_ill_posed(ErrorKind kind);

/// Base error. `precondition()` names the violated requirement so callers can
/// report it without parsing the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string precondition, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& precondition() const noexcept { return precondition_; }

private:
    ErrorKind kind_;
    std::string precondition_;
};

class PropagationBlowup : public Error {
public:
    explicit PropagationBlowup(double x);
    double x() const noexcept { return x_; }

private:
    double x_;
};

/// Raised when the map vanishes on the contour, i.e. 0 lies in f(∂Ω).
class BoundaryZero : public Error {
public:
    BoundaryZero(double h, double v, const std::string& detail);
    double h() const noexcept { return h_; }
    double v() const noexcept { return v_; }

private:
    double h_;
    double v_;
};

}  // namespace nsmorse
