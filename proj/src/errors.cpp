#include "nsmorse/errors.hpp"

#include <sstream>

namespace nsmorse {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::PropagationBlowup: return "propagation-blowup";
    case ErrorKind::BoundaryZero: return "boundary-zero";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Degenerate: return "degenerate-operator";
    case ErrorKind::EndpointDegenerate: return "endpoint-degenerate";
    case ErrorKind::MatchingAmbiguity: return "matching-ambiguity";
    case ErrorKind::TuringViolated: return "turing-violated";
    case ErrorKind::DegenerateThreshold: return "degenerate-threshold";
    case ErrorKind::NotConjugatePoint: return "not-a-conjugate-point";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Mismatch: return "mismatch";
    }
    return "unknown";
}

bool is_ill_posed(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Validation:
    case ErrorKind::BoundaryZero:
    case ErrorKind::Degenerate:
    case ErrorKind::EndpointDegenerate:
    case ErrorKind::TuringViolated:
    case ErrorKind::DegenerateThreshold:
    case ErrorKind::NotConjugatePoint:
    case ErrorKind::Precondition:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorKind kind, std::string precondition, const std::string& message)
    : std::runtime_error(message), kind_(kind), precondition_(std::move(precondition)) {}

namespace {

std::string blowup_message(double x) {
    std::ostringstream os;
    os << "non-finite fundamental solution at x = " << x;
    return os.str();
}

std::string zero_message(double h, double v, const std::string& detail) {
    std::ostringstream os;
    os.precision(12);
    os << "0 ∈ ρ(∂Ω): map vanishes on the boundary near (" << h << ", " << v << ")";
    if (!detail.empty()) os << "; " << detail;
    return os.str();
}

}  // namespace

PropagationBlowup::PropagationBlowup(double x)
    : Error(ErrorKind::PropagationBlowup, "finite-propagation", blowup_message(x)), x_(x) {}

BoundaryZero::BoundaryZero(double h, double v, const std::string& detail)
    : Error(ErrorKind::BoundaryZero, "0 ∉ ρ(∂Ω)", zero_message(h, v, detail)), h_(h), v_(v) {}

}  // namespace nsmorse
