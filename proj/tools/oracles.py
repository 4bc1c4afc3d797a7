#!/usr/bin/env python3
"""Reference values frozen into tests/test_dynamics.cpp and tests/test_backup.cpp.

Evaluated at 30 significant digits with mpmath, term by term from the model
equations, without touching the C++ code. Rerun to regenerate:

    python3 tools/oracles.py
"""
from mpmath import mp, mpf, sin, cos, tan, exp, sqrt, pi, odefun, log

mp.dps = 30
G = mpf("9.80665")


def fw_deriv(x, u, V, tauP=mpf("0.3"), tauz=mpf("0.5")):
    phi, th, psi, pn, pe, H, P, Nz = x
    uP, uz = u
    return [
        P + Nz * (G / V) * sin(phi) * tan(th),
        (G / V) * (Nz * cos(phi) - cos(th)),
        Nz * G * sin(phi) / (V * cos(th)),
        V * cos(th) * cos(psi),
        V * cos(th) * sin(psi),
        V * sin(th),
        (uP - P) / tauP,
        (uz - Nz) / tauz,
    ]


def simple_deriv(x, uz, V=mpf(150), tauz=mpf("0.5")):
    H, th, Nz = x
    return [V * sin(th), (G / V) * (Nz - cos(th)), (uz - Nz) / tauz]


def quat_mul(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return [
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ]


def rot(q):
    w, x, y, z = q
    return [
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ]


def quad_deriv(q, v, om, tau, M, m=mpf(1), J=(mpf("0.01"), mpf("0.01"), mpf("0.018"))):
    qd = [c / 2 for c in quat_mul(q, [0, om[0], om[1], om[2]])]
    R = rot(q)
    vd = [tau / m * R[i][2] - (G if i == 2 else 0) for i in range(3)]
    Jw = [J[i] * om[i] for i in range(3)]
    cross = [om[1] * Jw[2] - om[2] * Jw[1], om[2] * Jw[0] - om[0] * Jw[2], om[0] * Jw[1] - om[1] * Jw[0]]
    wd = [(M[i] - cross[i]) / J[i] for i in range(3)]
    return v, qd, vd, wd


def show(label, vals):
    print(label)
    for v in vals:
        print("   ", mp.nstr(v, 20))


if __name__ == "__main__":
    x = [mpf("0.3"), mpf("0.1"), mpf("1.0"), 0, 0, mpf(6000), mpf("0.05"), mpf("1.5")]
    show("fixed_wing_deriv generic (V=200, u=(0.2, 2.0))", fw_deriv(x, [mpf("0.2"), mpf("2.0")], mpf(200)))

    show("simplified_deriv (H=6000, th=0.1, Nz=2, uz=3)", simple_deriv([mpf(6000), mpf("0.1"), mpf(2)], mpf(3)))

    h = pi / 12
    q = [cos(h), sin(h), 0, 0]
    p_dot, q_dot, v_dot, w_dot = quad_deriv(q, [mpf(1), mpf(2), mpf(3)], [mpf("0.1"), mpf("-0.2"), mpf("0.3")],
                                             mpf("1.2") * G, [mpf("0.01"), 0, 0])
    show("quad q_dot (30 deg about x, omega=(0.1,-0.2,0.3))", q_dot)
    show("quad v_dot (tau=1.2 m g)", v_dot)
    show("quad omega_dot (M=(0.01,0,0))", w_dot)

    show("turn radius phi*=45 deg, V=150", [mpf(150) ** 2 / (G * tan(pi / 4))])

    dt = mpf("0.1")
    show("rk4 one step of x'=-x, x0=1, dt=0.1", [1 - dt + dt**2 / 2 - dt**3 / 6 + dt**4 / 24, exp(-dt)])

    # 5 s of the fixed-wing model under a constant input, Taylor-series ODE solver.
    x0 = [mpf("0.2"), mpf("0.05"), mpf("0.5"), mpf(0), mpf(0), mpf(6000), mpf("0.02"), mpf("1.2")]
    u = [mpf("0.05"), mpf("1.3")]
    sol = odefun(lambda t, y: fw_deriv(y, u, mpf(150)), 0, x0)
    show("fixed-wing state at t=5 (x0 above, u=(0.05, 1.3), V=150)", sol(mpf(5)))

    show("blend lambda at h = ln2/beta, beta=3", [exp(-3 * (log(2) / 3))])
