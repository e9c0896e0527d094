#include "nsmorse/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace nsmorse {

CMatrix boundary_matrix(const ProblemSpec& spec, cplx z) {
    Propagator prop(spec);
    const CMatrix psi = prop.psi(z.real(), z.imag(), spec.length);
    return spec.boundary.R0.cast<cplx>() + spec.boundary.R1.cast<cplx>() * psi;
}

DeterminantSample to_sample(cplx z, const LogDet& d) {
    DeterminantSample out;
    out.z = z;
    out.rho = d.value();
    out.log_abs_rho = d.log_abs;
    out.arg_rho = d.arg;
    return out;
}

DeterminantSample rho(const ProblemSpec& spec, cplx z) {
    DeterminantMap map(spec);
    return to_sample(z, map.rho(z.real(), z.imag()));
}

DeterminantMap::DeterminantMap(const ProblemSpec& spec, int steps)
    : prop_(spec, steps),
      R0_(spec.boundary.R0),
      R1_(spec.boundary.R1),
      n_(spec.n),
      dirichlet_(spec.boundary.preset == BoundaryPreset::Dirichlet) {}

LogDet DeterminantMap::rho_full(double t, double s) const {
    const CMatrix psi = prop_.psi(t, s, prop_.spec().length);
    return log_determinant(R0_.cast<cplx>() + R1_.cast<cplx>() * psi);
}

LogDet DeterminantMap::rho(double t, double s) const {
    if (!dirichlet_) return rho_full(t, s);
    LogDet d = det_G(t, s, prop_.spec().length);
    if (n_ % 2 == 1 && !d.is_zero()) d.arg = principal_angle(d.arg + kPi);
    return d;
}

CMatrix DeterminantMap::G(double t, double s, double x) const { return block_G(prop_.psi(t, s, x)); }

LogDet DeterminantMap::det_G(double t, double s, double x) const { return make_logdet(prop_.det_G(t, s, x)); }

double dirichlet_consistency(const DeterminantMap& map, const std::vector<cplx>& zs) {
    double worst = 0.0;
    for (cplx z : zs) {
        const cplx a = map.rho(z.real(), z.imag()).value();
        const cplx b = map.rho_full(z.real(), z.imag()).value();
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
    }
    return worst;
}

void write_rho_csv(std::ostream& os, const std::vector<DeterminantSample>& samples) {
    os << "z_re,z_im,rho_re,rho_im\n";
    os.precision(17);
    for (const auto& s : samples)
        os << s.z.real() << "," << s.z.imag() << "," << s.rho.real() << "," << s.rho.imag() << "\n";
}

}  // namespace nsmorse
