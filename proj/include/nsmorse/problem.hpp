#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsmorse/types.hpp"

namespace nsmorse {

enum class CoefficientKind { Constant, Polynomial, Grid };

/// Real N×N matrix-valued function of x ∈ [0, ℓ].
///
/// Polynomial fields hold c_0, c_1, ... with value Σ c_k x^k. Grid fields
/// interpolate matrix samples entrywise with a natural cubic spline; two
/// nodes reduce to linear interpolation.
class CoefficientField {
public:
    CoefficientField() = default;

    static CoefficientField constant(RMatrix value);
    static CoefficientField zero(int n);
    static CoefficientField polynomial(std::vector<RMatrix> coefficients);
    static CoefficientField grid(std::vector<double> nodes, std::vector<RMatrix> values);

    RMatrix operator()(double x) const;

    CoefficientKind kind() const { return kind_; }
    bool is_constant() const;
    Eigen::Index rows() const { return values_.empty() ? 0 : values_.front().rows(); }
    Eigen::Index cols() const { return values_.empty() ? 0 : values_.front().cols(); }

    const std::vector<RMatrix>& values() const { return values_; }
    const std::vector<double>& nodes() const { return nodes_; }

    /// Structural problems (shape, node ordering, coverage of [0, ℓ]).
    std::vector<std::string> check(const std::string& name, int n, double length) const;

private:
    void build_spline();

    CoefficientKind kind_ = CoefficientKind::Constant;
    std::vector<RMatrix> values_;
    std::vector<double> nodes_;
    std::vector<RMatrix> moments_;
};

enum class BoundaryPreset { Dirichlet, Neumann, Periodic, Custom };

std::string to_string(BoundaryPreset preset);
std::optional<BoundaryPreset> parse_preset(const std::string& name);

struct BoundaryCondition {
    RMatrix R0;
    RMatrix R1;
    BoundaryPreset preset = BoundaryPreset::Custom;

    static BoundaryCondition make(BoundaryPreset preset, int n);
    static BoundaryCondition custom(RMatrix R0, RMatrix R1);
};

/// Recognizes the preset block structure of (R0, R1); Custom when none match.
BoundaryPreset classify_preset(const RMatrix& R0, const RMatrix& R1);

/// Axis-aligned parameter rectangle. `t` is the horizontal coordinate and `s`
/// the vertical one; the morse-theorem module reuses it with (s, x).
struct Rectangle {
    double t_min = 0.0;
    double t_max = 1.0;
    double s_min = -1.0;
    double s_max = 1.0;

    double width() const { return t_max - t_min; }
    double height() const { return s_max - s_min; }
    bool valid() const { return t_min < t_max && s_min < s_max; }
};

/// Perturbation path: C_z(x) = C0(x) + c(t)·(K·I + D(x)) + is·I with
/// c(t) = offset + scale·t. The defaults give C0 + tK·I + is·I.
struct PathSpec {
    double shift = 0.0;
    CoefficientField direction;  // empty means D = 0
    double offset = 0.0;
    double scale = 1.0;

    double c(double t) const { return offset + scale * t; }
};

/// Optional planar reaction–diffusion data carried by a problem file.
struct ReactionDiffusionData {
    double d = 1.0;
    RMatrix V;
    double a = 1.0;
};

struct ProblemSpec {
    std::string name;
    int n = 1;
    double length = 1.0;
    CoefficientField P;
    CoefficientField Q;
    CoefficientField S;
    CoefficientField C0;
    BoundaryCondition boundary;
    PathSpec path;
    std::optional<Rectangle> rectangle;
    std::optional<double> eigenvalue_floor;
    std::optional<ReactionDiffusionData> reaction_diffusion;
    double steps_per_unit = 2048.0;

    /// S(x) + C0(x) + c(t)·(K·I + D(x)), the real part of the zeroth-order term.
    RMatrix zeroth_order(double x, double t) const;
    RMatrix direction_at(double x) const;

    bool constant_coefficients() const;
    int steps() const;
};

struct ValidationReport {
    std::vector<std::string> violations;
    double c_sup = 0.0;             // sup ‖S + C_t‖₂ over the validation grid
    double p_min_eigenvalue = 0.0;  // smallest eigenvalue of P over the grid
    bool p_positive_definite = false;

    bool ok() const { return violations.empty(); }
};

inline constexpr int kValidationGrid = 129;
inline constexpr double kStripSafety = 2.0;
inline constexpr double kStripFloor = 1.0;

ValidationReport validate(const ProblemSpec& spec);

/// Throws Error(Validation) listing every violation.
ValidationReport require_valid(const ProblemSpec& spec);

double default_strip_height(const ProblemSpec& spec);
Rectangle default_rectangle(const ProblemSpec& spec);

/// Same operator family traversed backwards over [t_min, t_max].
ProblemSpec reversed_path(const ProblemSpec& spec, double t_min, double t_max);

/// Copy of the spec whose zeroth-order term is frozen at path parameter t.
ProblemSpec frozen_at(const ProblemSpec& spec, double t);

}  // namespace nsmorse
