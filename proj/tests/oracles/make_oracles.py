"""Frozen reference values for the C++ tests.

Run from the repository root:
    python3 tests/oracles/make_oracles.py > tests/oracle_values.hpp

Everything here is computed with mpmath at 40 digits, independently of the
C++ code paths: matrix exponentials by mpmath.expm, ODE solutions by
mpmath.odefun, and branch derivatives by mpmath.diff.
"""

import mpmath as mp

mp.mp.dps = 40


def c(z):
    z = mp.mpc(z)
    return "{%s, %s}" % (mp.nstr(z.real, 20, min_fixed=-1, max_fixed=-1), mp.nstr(z.imag, 20, min_fixed=-1, max_fixed=-1))


def r(x):
    return mp.nstr(mp.mpf(x), 20, min_fixed=-1, max_fixed=-1)


def phi(lam, x):
    lam = mp.mpc(lam)
    if lam == 0:
        return mp.mpf(x)
    s = mp.sqrt(lam)
    return mp.sinh(s * x) / s


def first_order(P, Q, Z):
    """w = (v, u), v = P u' + Q u; v' = Q^T u' + Z u."""
    n = P.rows
    Pi = P ** -1
    A = mp.zeros(2 * n, 2 * n)
    QtPi = Q.T * Pi
    top_right = Z - QtPi * Q
    bottom_right = -Pi * Q
    for i in range(n):
        for j in range(n):
            A[i, j] = QtPi[i, j]
            A[i, n + j] = top_right[i, j]
            A[n + i, j] = Pi[i, j]
            A[n + i, n + j] = bottom_right[i, j]
    return A


def g_block(psi, n):
    return mp.matrix([[psi[n + i, j] for j in range(n)] for i in range(n)])


out = []
emit = out.append
emit("#pragma once")
emit("")
emit("// Generated by tests/oracles/make_oracles.py. Do not edit by hand.")
emit("")
emit("#include <array>")
emit("#include <complex>")
emit("")
emit("namespace oracle {")
emit("")
emit("struct PhiCase { std::complex<double> lambda; double x; std::complex<double> value; };")
phi_cases = [(-9, 1.3), (mp.mpc(2, 3), 0.7), (mp.mpc(-40, 0.5), 2.0), (mp.mpc(0, 1e-6), 0.5),
             (-1e-3, 3.0), (25, 4.0), (mp.mpc(-0.1, -7), 1.9)]
emit("inline const std::array<PhiCase, %d> phi_cases{{" % len(phi_cases))
for lam, x in phi_cases:
    emit("    {%s, %s, %s}," % (c(lam), r(x), c(phi(lam, x))))
emit("}};")
emit("")

# Constant 2x2 problem with a non-symmetric Q: G block and det of exp(x A).
P = mp.matrix([[2, 0.3], [0.3, 1]])
Q = mp.matrix([[0.4, -0.7], [0.2, 0.1]])
S = mp.matrix([[1, 0.5], [0.5, -2]])
C0 = mp.matrix([[-3, 1.5], [-0.25, 0.5]])
emit("// P = [[2, .3], [.3, 1]], Q = [[.4, -.7], [.2, .1]], S = [[1, .5], [.5, -2]],")
emit("// C0 = [[-3, 1.5], [-.25, .5]], C_z = C0 + (t K) I + i s I with K = 2.")
emit("struct GeneralCase { double t; double s; double x; std::array<std::complex<double>, 4> G; std::complex<double> det_psi; };")
general = [(0.0, 0.0, 1.0), (0.5, 1.3, 2.2), (1.0, -0.8, 0.6)]
emit("inline const std::array<GeneralCase, %d> general_cases{{" % len(general))
for t, s, x in general:
    Z = S + C0 + (2 * t) * mp.eye(2) + mp.mpc(0, s) * mp.eye(2)
    psi = mp.expm(first_order(P, Q, Z) * x)
    G = g_block(psi, 2)
    emit("    {%s, %s, %s, {{%s, %s, %s, %s}}, %s}," % (r(t), r(s), r(x), c(G[0, 0]), c(G[0, 1]), c(G[1, 0]), c(G[1, 1]), c(mp.det(psi))))
emit("}};")
emit("")

# Example with a negative local degree: P = diag(1, 1/2), L = [[1.8, -4], [1.05, -2]].
Pex = mp.matrix([[1, 0], [0, 0.5]])
Lex = mp.matrix([[1.8, -4], [1.05, -2]])
emit("// P = diag(1, 1/2), C0 = [[1.8, -4], [1.05, -2]]: det G_{is}(x).")
emit("struct DetCase { double s; double x; std::complex<double> det_G; };")
ex_cases = [(0.0, 1.0), (0.3, 2.5), (-1.1, mp.pi), (2.0, 0.4), (0.0, mp.pi)]
emit("inline const std::array<DetCase, %d> example_det_G{{" % len(ex_cases))
for s, x in ex_cases:
    Z = Lex + mp.mpc(0, s) * mp.eye(2)
    psi = mp.expm(first_order(Pex, mp.zeros(2, 2), Z) * x)
    emit("    {%s, %s, %s}," % (r(s), r(x), c(mp.det(g_block(psi, 2)))))
emit("}};")
emit("")

# Scalar Dirichlet determinant rho = -sinh(sqrt(mu) l)/sqrt(mu), mu = -12 + 15 t + i s.
emit("// -u'' + (-12 + 15 t + i s) u on [0, pi], Dirichlet: rho(t, s).")
emit("struct RhoCase { double t; double s; std::complex<double> rho; };")
rho_cases = [(0.0, 0.0), (0.1, 2.0), (0.5, -3.0), (0.9, 0.5), (1.0, 30.0)]
emit("inline const std::array<RhoCase, %d> scalar_rho{{" % len(rho_cases))
for t, s in rho_cases:
    mu = mp.mpc(-12 + 15 * t, s)
    emit("    {%s, %s, %s}," % (r(t), r(s), c(-phi(mu, mp.pi))))
emit("}};")
emit("")

# Airy-type problem: -u'' + (x + q x^2 + i s) u = 0 on [0, 2], u(0) = 0, u'(0) = 1.
emit("// -u'' + (x - 0.5 x^2 + i s) u, u(0) = 0, u'(0) = 1: u(2).")
emit("struct OdeCase { double s; std::complex<double> u_end; };")
ode_cases = [0.0, 0.7, -2.5]
emit("inline const std::array<OdeCase, %d> polynomial_G{{" % len(ode_cases))
for s in ode_cases:
    f = mp.odefun(lambda x, y: [y[1], (x - mp.mpf(0.5) * x * x + mp.mpc(0, s)) * y[0]], 0, [mp.mpc(0), mp.mpc(1)])
    emit("    {%s, %s}," % (r(s), c(f(2)[0])))
emit("}};")
emit("")

# Planar reaction-diffusion data of the second counterexample.
d = mp.mpf(1) / 2
V = mp.matrix([[-1, -2], [mp.mpf(49) / 128, mp.mpf(3) / 4]])
mass = V[1, 1] + d * V[0, 0]
detV = mp.det(V)
trV = V[0, 0] + V[1, 1]
delta1 = mass ** 2 - 4 * d * detV
delta2 = 4 * d * trV - 2 * (d + 1) * mass
a = 16


def lam_pm(s, sign):
    return (-mass + (d + 1) * mp.mpc(0, s) + sign * mp.sqrt(delta1 - (d - 1) ** 2 * s ** 2 + mp.mpc(0, delta2 * s))) / (2 * d)


lp, lm = lam_pm(0, 1), lam_pm(0, -1)
emit("namespace cx2 {")
emit("inline constexpr double lambda_plus = %s;" % r(lp.real))
emit("inline constexpr double lambda_minus = %s;" % r(lm.real))
emit("inline constexpr double threshold_lower = %s;" % r((mass - mp.sqrt(delta1)) * a ** 2 / (2 * d)))
emit("inline constexpr double threshold_upper = %s;" % r((mass + mp.sqrt(delta1)) * a ** 2 / (2 * d)))
emit("inline constexpr std::array<double, 3> C1{%s};" % ", ".join(r(k * mp.pi / mp.sqrt(-lm.real)) for k in (1, 2, 3)))
emit("inline constexpr std::array<double, 1> C2{%s};" % r(mp.pi / mp.sqrt(-lp.real)))
bp = mp.diff(lambda s: lam_pm(s, 1).imag, 0)
bm = mp.diff(lambda s: lam_pm(s, -1).imag, 0)
emit("inline constexpr double b_plus = %s;" % r(bp))
emit("inline constexpr double b_minus = %s;" % r(bm))
emit("inline constexpr double strip_lower_bound = %s;" % r(2 * mp.svd_r(mp.matrix(V.tolist()), compute_uv=False)[0]))
emit("}  // namespace cx2")
emit("")
emit("}  // namespace oracle")
print("\n".join(out))
