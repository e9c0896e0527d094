#include "nsmorse/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nsmorse/errors.hpp"
#include "nsmorse/linalg.hpp"

namespace nsmorse {

CoefficientField CoefficientField::constant(RMatrix value) {
    CoefficientField f;
    f.kind_ = CoefficientKind::Constant;
    f.values_.push_back(std::move(value));
    return f;
}

CoefficientField CoefficientField::zero(int n) { return constant(RMatrix::Zero(n, n)); }

CoefficientField CoefficientField::polynomial(std::vector<RMatrix> coefficients) {
    CoefficientField f;
    f.kind_ = CoefficientKind::Polynomial;
    f.values_ = std::move(coefficients);
    return f;
}

CoefficientField CoefficientField::grid(std::vector<double> nodes, std::vector<RMatrix> values) {
    CoefficientField f;
    f.kind_ = CoefficientKind::Grid;
    f.nodes_ = std::move(nodes);
    f.values_ = std::move(values);
    f.build_spline();
    return f;
}

bool CoefficientField::is_constant() const {
    if (kind_ == CoefficientKind::Constant) return true;
    if (kind_ == CoefficientKind::Polynomial) {
        for (std::size_t k = 1; k < values_.size(); ++k)
            if (!values_[k].isZero(0.0)) return false;
        return true;
    }
    return false;
}

// Natural cubic spline moments by the Thomas algorithm, applied entrywise.
void CoefficientField::build_spline() {
    moments_.clear();
    const std::size_t count = nodes_.size();
    if (count < 3 || values_.size() != count) {
        if (!values_.empty()) moments_.assign(count, RMatrix::Zero(rows(), cols()));
        return;
    }
    for (std::size_t i = 1; i < count; ++i)
        if (!(nodes_[i] > nodes_[i - 1])) return;

    const RMatrix zero = RMatrix::Zero(rows(), cols());
    moments_.assign(count, zero);
    const std::size_t m = count - 2;
    std::vector<double> diag(m), upper(m);
    std::vector<RMatrix> rhs(m, zero);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        const double h0 = nodes_[i] - nodes_[i - 1];
        const double h1 = nodes_[i + 1] - nodes_[i];
        diag[k] = 2.0 * (h0 + h1);
        upper[k] = h1;
        rhs[k] = 6.0 * ((values_[i + 1] - values_[i]) / h1 - (values_[i] - values_[i - 1]) / h0);
    }
    for (std::size_t k = 1; k < m; ++k) {
        const double lower = nodes_[k + 1] - nodes_[k];
        const double w = lower / diag[k - 1];
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    moments_[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t k = m - 1; k-- > 0;)
        moments_[k + 1] = (rhs[k] - upper[k] * moments_[k + 2]) / diag[k];
}

RMatrix CoefficientField::operator()(double x) const {
    switch (kind_) {
    case CoefficientKind::Constant:
        return values_.front();
    case CoefficientKind::Polynomial: {
        RMatrix acc = values_.back();
        for (std::size_t k = values_.size() - 1; k-- > 0;) acc = acc * x + values_[k];
        return acc;
    }
    case CoefficientKind::Grid: {
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
        std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
        i = std::min(i, nodes_.size() - 2);
        const double x0 = nodes_[i];
        const double x1 = nodes_[i + 1];
        const double h = x1 - x0;
        const double a = (x1 - x) / h;
        const double b = (x - x0) / h;
        RMatrix y = a * values_[i] + b * values_[i + 1];
        if (!moments_.empty()) {
            y += ((a * a * a - a) * moments_[i] + (b * b * b - b) * moments_[i + 1]) * (h * h / 6.0);
        }
        return y;
    }
    }
    return {};
}

std::vector<std::string> CoefficientField::check(const std::string& name, int n, double length) const {
    std::vector<std::string> out;
    if (values_.empty()) {
        out.push_back(name + ": no matrix data");
        return out;
    }
    for (const auto& v : values_) {
        if (v.rows() != n || v.cols() != n) {
            std::ostringstream os;
            os << name << ": expected " << n << "x" << n << " matrices, got " << v.rows() << "x" << v.cols();
            out.push_back(os.str());
            return out;
        }
        if (!v.allFinite()) {
            out.push_back(name + ": non-finite entries");
            return out;
        }
    }
    if (kind_ == CoefficientKind::Grid) {
        if (nodes_.size() < 2) {
            out.push_back(name + ": sampled grid needs at least 2 nodes");
            return out;
        }
        if (nodes_.size() != values_.size()) out.push_back(name + ": grid node and value counts differ");
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            if (!(nodes_[i] > nodes_[i - 1])) {
                out.push_back(name + ": grid nodes not strictly increasing");
                break;
            }
        }
        const double slack = 1e-12 * std::max(1.0, length);
        if (nodes_.front() > slack || nodes_.back() < length - slack)
            out.push_back(name + ": grid does not cover [0, length]");
    }
    return out;
}

std::string to_string(BoundaryPreset preset) {
    switch (preset) {
    case BoundaryPreset::Dirichlet: return "dirichlet";
    case BoundaryPreset::Neumann: return "neumann";
    case BoundaryPreset::Periodic: return "periodic";
    case BoundaryPreset::Custom: return "custom";
    }
    return "custom";
}

std::optional<BoundaryPreset> parse_preset(const std::string& name) {
    if (name == "dirichlet") return BoundaryPreset::Dirichlet;
    if (name == "neumann") return BoundaryPreset::Neumann;
    if (name == "periodic") return BoundaryPreset::Periodic;
    if (name == "custom") return BoundaryPreset::Custom;
    return std::nullopt;
}

BoundaryCondition BoundaryCondition::make(BoundaryPreset preset, int n) {
    BoundaryCondition bc;
    bc.preset = preset;
    const RMatrix I = RMatrix::Identity(n, n);
    bc.R0 = RMatrix::Zero(2 * n, 2 * n);
    bc.R1 = RMatrix::Zero(2 * n, 2 * n);
    switch (preset) {
    case BoundaryPreset::Dirichlet:
        bc.R0.topRightCorner(n, n) = I;
        bc.R1.bottomRightCorner(n, n) = I;
        break;
    case BoundaryPreset::Neumann:
        bc.R0.topLeftCorner(n, n) = I;
        bc.R1.bottomLeftCorner(n, n) = I;
        break;
    case BoundaryPreset::Periodic:
        bc.R0.setIdentity();
        bc.R1 = -bc.R0;
        break;
    case BoundaryPreset::Custom:
        break;
    }
    return bc;
}

BoundaryCondition BoundaryCondition::custom(RMatrix R0, RMatrix R1) {
    BoundaryCondition bc;
    bc.preset = classify_preset(R0, R1);
    bc.R0 = std::move(R0);
    bc.R1 = std::move(R1);
    return bc;
}

BoundaryPreset classify_preset(const RMatrix& R0, const RMatrix& R1) {
    if (R0.rows() != R0.cols() || R0.rows() % 2 != 0 || R1.rows() != R0.rows() || R1.cols() != R0.cols())
        return BoundaryPreset::Custom;
    const int n = static_cast<int>(R0.rows() / 2);
    for (BoundaryPreset p : {BoundaryPreset::Dirichlet, BoundaryPreset::Neumann, BoundaryPreset::Periodic}) {
        BoundaryCondition bc = BoundaryCondition::make(p, n);
        if (bc.R0 == R0 && bc.R1 == R1) return p;
    }
    return BoundaryPreset::Custom;
}

RMatrix ProblemSpec::direction_at(double x) const {
    if (path.direction.values().empty()) return RMatrix::Zero(n, n);
    return path.direction(x);
}

RMatrix ProblemSpec::zeroth_order(double x, double t) const {
    RMatrix m = S(x) + C0(x);
    const double c = path.c(t);
    if (c != 0.0) {
        m.diagonal().array() += c * path.shift;
        if (!path.direction.values().empty()) m += c * path.direction(x);
    }
    return m;
}

bool ProblemSpec::constant_coefficients() const {
    return P.is_constant() && Q.is_constant() && S.is_constant() && C0.is_constant() &&
           (path.direction.values().empty() || path.direction.is_constant());
}

int ProblemSpec::steps() const {
    return std::max(16, static_cast<int>(std::ceil(steps_per_unit * length)));
}

namespace {

bool symmetric(const RMatrix& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

std::pair<double, double> path_range(const ProblemSpec& spec) {
    if (spec.rectangle) return {spec.rectangle->t_min, spec.rectangle->t_max};
    return {0.0, 1.0};
}

}  // namespace

ValidationReport validate(const ProblemSpec& spec) {
    ValidationReport r;
    auto& v = r.violations;
    if (spec.n < 1) {
        v.push_back("n must be at least 1");
        return r;
    }
    if (!(spec.length > 0.0) || !std::isfinite(spec.length)) {
        v.push_back("length must be positive and finite");
        return r;
    }
    if (!(spec.steps_per_unit > 0.0)) v.push_back("steps_per_unit must be positive");

    const std::pair<const char*, const CoefficientField*> fields[] = {
        {"P", &spec.P}, {"Q", &spec.Q}, {"S", &spec.S}, {"C0", &spec.C0}};
    for (const auto& [name, field] : fields) {
        auto issues = field->check(name, spec.n, spec.length);
        v.insert(v.end(), issues.begin(), issues.end());
    }
    if (!spec.path.direction.values().empty()) {
        auto issues = spec.path.direction.check("path.direction", spec.n, spec.length);
        v.insert(v.end(), issues.begin(), issues.end());
    }
    if (!(spec.path.shift >= 0.0)) v.push_back("path shift K must be non-negative");
    if (!std::isfinite(spec.path.offset) || !std::isfinite(spec.path.scale))
        v.push_back("path offset and scale must be finite");

    const Eigen::Index dim = 2 * spec.n;
    if (spec.boundary.R0.rows() != dim || spec.boundary.R0.cols() != dim || spec.boundary.R1.rows() != dim ||
        spec.boundary.R1.cols() != dim)
        v.push_back("boundary matrices must be 2n x 2n");
    if (spec.rectangle && !spec.rectangle->valid()) v.push_back("rectangle requires t_min < t_max and s_min < s_max");
    if (spec.eigenvalue_floor && !(*spec.eigenvalue_floor >= 0.0))
        v.push_back("eigenvalue_floor must be non-negative");
    if (!v.empty()) return r;

    const auto [t0, t1] = path_range(spec);
    bool p_symmetric = true, p_invertible = true, s_symmetric = true, finite = true;
    double p_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kValidationGrid; ++i) {
        const double x = spec.length * i / (kValidationGrid - 1);
        const RMatrix p = spec.P(x);
        const RMatrix s = spec.S(x);
        if (!p.allFinite() || !s.allFinite()) finite = false;
        if (!symmetric(p)) p_symmetric = false;
        if (!symmetric(s)) s_symmetric = false;
        Eigen::JacobiSVD<RMatrix> svd(p);
        const auto& sv = svd.singularValues();
        if (!(sv(sv.size() - 1) > 1e-13 * std::max(sv(0), 1e-300))) p_invertible = false;
        Eigen::SelfAdjointEigenSolver<RMatrix> eig(0.5 * (p + p.transpose()), Eigen::EigenvaluesOnly);
        p_min = std::min(p_min, eig.eigenvalues()(0));
        for (double t : {t0, t1}) {
            const RMatrix z = spec.zeroth_order(x, t);
            if (!z.allFinite()) finite = false;
            r.c_sup = std::max(r.c_sup, spectral_norm(z));
        }
    }
    if (!finite) v.push_back("coefficients evaluate to non-finite values");
    if (!p_symmetric) v.push_back("P not symmetric");
    if (!p_invertible) v.push_back("P not invertible");
    if (!s_symmetric) v.push_back("S not symmetric");
    r.p_min_eigenvalue = p_min;
    r.p_positive_definite = p_invertible && p_symmetric && p_min > 0.0;
    return r;
}

ValidationReport require_valid(const ProblemSpec& spec) {
    ValidationReport r = validate(spec);
    if (!r.ok()) {
        std::string msg = "invalid problem";
        if (!spec.name.empty()) msg += " '" + spec.name + "'";
        for (const auto& s : r.violations) msg += "; " + s;
        throw Error(ErrorKind::Validation, "valid-problem", msg);
    }
    return r;
}

double default_strip_height(const ProblemSpec& spec) {
    const ValidationReport r = require_valid(spec);
    return kStripSafety * std::max(r.c_sup, kStripFloor);
}

Rectangle default_rectangle(const ProblemSpec& spec) {
    if (spec.rectangle) return *spec.rectangle;
    const double m = default_strip_height(spec);
    return Rectangle{0.0, 1.0, -m, m};
}

ProblemSpec reversed_path(const ProblemSpec& spec, double t_min, double t_max) {
    ProblemSpec out = spec;
    out.path.offset = spec.path.offset + spec.path.scale * (t_min + t_max);
    out.path.scale = -spec.path.scale;
    return out;
}

ProblemSpec frozen_at(const ProblemSpec& spec, double t) {
    ProblemSpec out = spec;
    out.path.offset = spec.path.c(t);
    out.path.scale = 0.0;
    return out;
}

}  // namespace nsmorse
