"""Regenerate ``frozen.json`` from first principles in 40-digit arithmetic.

Nothing here imports the package. Probabilities come from the 2×2 matrix
exponential of the accumulated rotating-frame generator, Fisher values from
numerical differentiation of those probabilities, and geodesic points from
inverting the arc-length relation ∫√F dθ = a₀ξ by root finding.

    python3 tests/oracles/generate_frozen.py > tests/oracles/frozen.json
"""
from __future__ import annotations

import json
import sys

import mpmath as mp

mp.mp.dps = 40
LAM = 2 / mp.pi
SCHEMES = ("constant", "oscillatory", "power-law-decay", "exponential-decay")


def area(kind, t, lam=LAM):
    """∫₀ᵗ envelope(s) ds by quadrature (not the antiderivative)."""
    env = {
        "constant": lambda s: mp.mpf(1),
        "oscillatory": lambda s: mp.cos(lam * s),
        "power-law-decay": lambda s: 1 / (1 + lam * s) ** 2,
        "exponential-decay": lambda s: mp.exp(-lam * s),
    }[kind]
    return mp.quad(env, [0, t])


def prob(kind, beta0, t):
    """|⟨1|exp(−i A(t)(σx + β₀σz))|0⟩|² with A the pulse area (Γ/ħ = 1)."""
    a = area(kind, t)
    gen = mp.matrix([[beta0, 1], [1, -beta0]]) * (-1j * a)
    u = mp.expm(gen)
    return abs(u[1, 0]) ** 2


def fisher(kind, beta0, t):
    def p0(x):
        return prob(kind, beta0, x)
    d0 = mp.diff(p0, t)
    q0 = p0(t)
    return d0 ** 2 / q0 + d0 ** 2 / (1 - q0)


def geodesic_point(kind, beta0, theta0, xi):
    """θ(ξ) for θ'(0) = 1 from ∫_{θ₀}^{θ} √F = √F(θ₀)·ξ."""
    root_f = lambda x: mp.sqrt(fisher(kind, beta0, x))
    a0 = root_f(theta0)
    guess = theta0 + xi
    return mp.findroot(lambda th: mp.quad(root_f, [theta0, th]) - a0 * xi, guess, tol=mp.mpf(10) ** -25)


def main() -> None:
    out = {"probability": [], "fisher": [], "geodesic": [], "scalars": {}}
    for kind in SCHEMES:
        for beta0 in ("0", "0.25", "0.5", "1"):
            for t in ("0.3", "1.1", "2.0", "4.7"):
                p = prob(kind, mp.mpf(beta0), mp.mpf(t))
                out["probability"].append([kind, float(beta0), float(t), mp.nstr(p, 25)])
        for beta0 in ("0", "0.5"):
            for t in ("0.4", "1.3", "2.2"):
                f = fisher(kind, mp.mpf(beta0), mp.mpf(t))
                out["fisher"].append([kind, float(beta0), float(t), mp.nstr(f, 25)])
    for kind, beta0, theta0, xi in (("constant", "0.5", "0.05", "0.5"), ("exponential-decay", "0.5", "0.1", "0.8"),
                                    ("power-law-decay", "1", "0.3", "0.6"), ("oscillatory", "0.5", "0.2", "0.7"),
                                    ("exponential-decay", "0", "0.5", "1.2")):
        th = geodesic_point(kind, mp.mpf(beta0), mp.mpf(theta0), mp.mpf(xi))
        out["geodesic"].append([kind, float(beta0), float(theta0), float(xi), mp.nstr(th, 25)])
    s = out["scalars"]
    s["p_const_beta1_half_transfer_time"] = mp.nstr(mp.pi / (2 * mp.sqrt(2)), 25)
    s["prob_const_beta1_at_that_time"] = mp.nstr(prob("constant", mp.mpf(1), mp.pi / (2 * mp.sqrt(2))), 25)
    s["classical_peak_m1_k1_damping1"] = mp.nstr(
        mp.findroot(lambda g: mp.diff(lambda x: ((1 - x ** 2) ** 2 + x ** 2) ** -0.5, g), 0.7), 25)
    s["fig1_column_maxima"] = [mp.nstr(1 / (1 + mp.mpf(b) ** 2), 25) for b in ("0", "0.25", "0.5", "1")]
    s["fisher_const_beta0.5_theta0"] = mp.nstr(fisher("constant", mp.mpf("0.5"), mp.mpf(0) + mp.mpf(10) ** -12), 20)
    json.dump(out, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
