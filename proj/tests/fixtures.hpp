#pragma once

#include <string>

#include "nsmorse/constant_analytic.hpp"
#include "nsmorse/problem.hpp"

namespace fixtures {

using namespace nsmorse;

inline RMatrix mat2(double a, double b, double c, double d) {
    RMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline RMatrix scalar(double v) { return RMatrix::Constant(1, 1, v); }

/// -P u'' + (c0 + c(t) K) u on [0, length] with constant data.
inline ProblemSpec constant_problem(const RMatrix& P, const RMatrix& C0, double length, double shift = 0.0,
                                    BoundaryPreset preset = BoundaryPreset::Dirichlet) {
    ProblemSpec spec;
    spec.n = static_cast<int>(P.rows());
    spec.length = length;
    spec.P = CoefficientField::constant(P);
    spec.Q = CoefficientField::zero(spec.n);
    spec.S = CoefficientField::zero(spec.n);
    spec.C0 = CoefficientField::constant(C0);
    spec.boundary = BoundaryCondition::make(preset, spec.n);
    spec.path.shift = shift;
    return spec;
}

/// -u'' - c u on [0, pi].
inline ProblemSpec minus_c(double c, double shift = 0.0) {
    return constant_problem(scalar(1.0), scalar(-c), kPi, shift);
}

inline ProblemSpec negative_degree_example(double length = 4.0) {
    return constant_problem(mat2(1.0, 0.0, 0.0, 0.5), mat2(1.8, -4.0, 1.05, -2.0), length);
}

inline PlanarConstantProblem counterexample1() { return {1.0, mat2(4.0, 1.0, 0.0, 9.0), 4.0}; }

inline PlanarConstantProblem counterexample2(double a = 16.0) {
    return {0.5, mat2(-1.0, -2.0, 49.0 / 128.0, 0.75), a};
}

inline std::string data_file(const std::string& name) { return std::string(NSMORSE_DATA_DIR) + "/problems/" + name; }

}  // namespace fixtures
