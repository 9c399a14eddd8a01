"""Offline high-precision reference values for the special-function tests.

Run with `python3 scripts/reference_values.py`; it rewrites
crates/core/tests/data/*.json. Requires mpmath.
"""
import json
import random
import signal
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
OUT = Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "data"


def c(z):
    z = mp.mpc(z)
    return [float(z.real), float(z.imag)]


class Slow(Exception):
    pass


def _alarm(signum, frame):
    raise Slow()


signal.signal(signal.SIGALRM, _alarm)


def bounded(fn, seconds=5):
    """Evaluate fn, or return None when mpmath takes too long (hyperu can
    stall on some complex parameter combinations)."""
    signal.alarm(seconds)
    try:
        return fn()
    except Slow:
        return None
    finally:
        signal.alarm(0)


def psi_samples(n, seed):
    rng = random.Random(seed)
    rows = []
    while len(rows) < n:
        a = complex(rng.uniform(-12, 12), rng.choice([0.0, rng.uniform(-8, 8)]))
        b = complex(rng.uniform(-12, 12), rng.choice([0.0, rng.uniform(-8, 8)]))
        if abs(a) > 20 or abs(b) > 20:
            continue
        x = 10 ** rng.uniform(-3, 1.6989700043360187)
        v = bounded(lambda: mp.hyperu(a, b, x))
        if v is None:
            continue
        rows.append({"a": c(a), "b": c(b), "x": x, "value": c(v)})
    return rows


def kernel_samples():
    rows = []
    for a in [0.3, 0.5, 1.0, 2.5]:
        for tau in [0.0, 0.25, 1.0, 4.0, 9.0, 15.0]:
            for x in [1e-3, 0.05, 0.7, 3.0, 12.0, 45.0, 120.0]:
                nu = mp.mpc(a, tau)
                v = mp.re(mp.power(x, nu) * mp.hyperu(nu, 1 + 2j * tau, x))
                rows.append({"a": a, "tau": tau, "x": x, "value": float(v)})
    return rows


def integral_oracles():
    """Named values from independent integral representations."""
    out = {}
    a, b, x = mp.mpf(0.5), mp.mpf(1), mp.mpf(1)
    out["psi_half_one_one"] = float(
        mp.quad(lambda t: mp.exp(-x * t) * t ** (a - 1) * (1 + t) ** (b - a - 1), [0, 1, mp.inf]) / mp.gamma(a)
    )
    al, nu, x = mp.mpf(-0.3), mp.mpc(0, 0.4), mp.mpf(1.5)
    w = mp.exp(-x / 2) * x**al / mp.gamma(0.5 - al + nu) * mp.quad(
        lambda s: mp.exp(-s) * s ** (-0.5 - al + nu) * (1 + s / x) ** (-0.5 + al + nu), [0, 1, mp.inf]
    )
    out["whittaker_m03_04i_15"] = c(w)
    mu, z = mp.mpf(-0.6), mp.mpf(1.2)
    d = z**mu * mp.exp(-z * z / 4) / mp.gamma((1 - mu) / 2) * mp.quad(
        lambda s: mp.exp(-s) * s ** (-(1 + mu) / 2) * (1 + 2 * s / z**2) ** (mu / 2), [0, 1, mp.inf]
    )
    out["parabolic_m06_12"] = float(d)
    k = mp.quad(lambda t: mp.exp(-mp.cosh(t)) * mp.cos(2 * t), [0, 2, 4, 8])
    out["bessel_k_2i_1"] = float(k)
    # closed-form kernel evaluated at high precision
    al, x, y, xi = mp.mpf(-0.5), mp.mpf(1), mp.mpf(2), mp.mpf(3)
    s = x * y + x * xi + y * xi
    kk = (
        2 ** (-1 - al) / mp.sqrt(mp.pi) * mp.sqrt(x * y * xi)
        * mp.exp((x + y + xi) / 2 - s**2 / (8 * x * y * xi))
        * mp.pcfd(2 * al, s / mp.sqrt(2 * x * y * xi))
    )
    out["kernel_k_m05_123"] = float(kk)
    # eta_1(1) from its closed form
    n, x = 1, mp.mpf(1)
    tot = 0
    for kidx in range(n + 1):
        tot += (-1) ** (kidx + 1) / ((mp.mpf(1) / 2 + kidx) * mp.factorial(kidx) * mp.factorial(n - kidx)) * mp.hyperu(0.5, 1 - kidx, x)
    out["lebedev_eta_1_1"] = float(mp.pi ** -1.5 * mp.factorial(n) * mp.gamma(1.5 + n) * x ** (1.5 + n) * tot)
    out["kernel_q_spectral_check"] = None
    return out


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "psi_reference.json").write_text(json.dumps(psi_samples(300, 7), indent=1))
    (OUT / "kernel_reference.json").write_text(json.dumps(kernel_samples(), indent=1))
    oracles = integral_oracles()
    oracles.pop("kernel_q_spectral_check")
    (OUT / "oracles.json").write_text(json.dumps(oracles, indent=1))


if __name__ == "__main__":
    main()
