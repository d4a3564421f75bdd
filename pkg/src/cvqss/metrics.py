"""Figures of merit computed two ways: from simulated fields and from closed forms.

Fidelity, per-quadrature signal transfer coefficients T and conditional
variances V_cv, and the T-V summary pair (T_q = T+ + T-, V_q = V+_cv V-_cv).
The closed-form expressions act as independent oracles for the simulation
and vice versa.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .noise import FieldState, Quad, covariance, variance

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Metrics:
    """All figures of merit for one (secret, output) pair.

    t_* are signal transfer coefficients (output SNR over input SNR),
    vcv_* conditional variances (output noise not explained by the input),
    k_* the Gaussian mean-mismatch exponents entering the fidelity, and
    gamma their sum.
    """

    fidelity: float
    t_plus: float
    t_minus: float
    vcv_plus: float
    vcv_minus: float
    k_plus: float
    k_minus: float

    @property
    def t_q(self) -> float:
        return self.t_plus + self.t_minus

    @property
    def v_q(self) -> float:
        return self.vcv_plus * self.vcv_minus

    @property
    def gamma(self) -> float:
        return self.k_plus + self.k_minus


def _mean_mismatch(secret: FieldState, out: FieldState, quad: Quad) -> float:
    """Exponent k for one quadrature of the coherent-secret fidelity.

    k = <X_s>^2 (1 - <X_s>/<X_out>)^2 / (4 V_s + 4 V_out), taken as 0 when
    the secret mean vanishes.  A zero output mean against a nonzero secret
    mean has no finite gain ratio; the displacement-only limit
    <X_s>^2 / (4 V_s + 4 V_out) is used instead and a warning emitted.
    """
    ms = secret.mean(quad)
    if ms == 0.0:
        return 0.0
    denom = 4.0 * (variance(secret, quad) + variance(out, quad))
    mo = out.mean(quad)
    if mo == 0.0:
        warnings.warn(
            "zero output mean against a nonzero secret mean; "
            "using the displacement-only fidelity limit",
            stacklevel=3,
        )
        return ms * ms / denom
    return ms * ms * (1.0 - ms / mo) ** 2 / denom


def fidelity(secret: FieldState, out: FieldState) -> float:
    """Overlap of a coherent secret with a Gaussian output state.

    F = 2 exp(-(k+ + k-)) sqrt(V+_s V-_s / ((V+_s + V+_out)(V-_s + V-_out)))
    equals 1 exactly when the means match and the output is again a unit-
    variance coherent state.
    """
    k = _mean_mismatch(secret, out, Quad.PLUS) + _mean_mismatch(secret, out, Quad.MINUS)
    vs_p, vs_m = variance(secret, Quad.PLUS), variance(secret, Quad.MINUS)
    vo_p, vo_m = variance(out, Quad.PLUS), variance(out, Quad.MINUS)
    return (
        2.0
        * math.exp(-k)
        * math.sqrt(vs_p * vs_m / ((vs_p + vo_p) * (vs_m + vo_m)))
    )


def transfer_coefficient(secret: FieldState, out: FieldState, quad: Quad) -> float:
    """T = SNR_out / SNR_secret for one quadrature, SNR = <X>^2 / V."""
    ms = secret.mean(quad)
    if ms == 0.0:
        raise ValueError("signal transfer undefined for a zero secret mean; use a displaced secret")
    mo = out.mean(quad)
    snr_secret = ms * ms / variance(secret, quad)
    snr_out = mo * mo / variance(out, quad)
    return snr_out / snr_secret


def conditional_variance(secret: FieldState, out: FieldState, quad: Quad) -> float:
    """V_cv = V_out - |<dX_s dX_out>|^2 / V_s: output noise the input does not explain."""
    cov = covariance(secret, out, quad)
    return variance(out, quad) - cov * cov / variance(secret, quad)


def tv_point(secret: FieldState, out: FieldState) -> tuple[float, float]:
    """(T_q, V_q) for the T-V diagram; ideal reconstruction sits at (2, 0)."""
    t_q = transfer_coefficient(secret, out, Quad.PLUS) + transfer_coefficient(
        secret, out, Quad.MINUS
    )
    v_q = conditional_variance(secret, out, Quad.PLUS) * conditional_variance(
        secret, out, Quad.MINUS
    )
    return t_q, v_q


def evaluate(secret: FieldState, out: FieldState) -> Metrics:
    """Compute the full metrics record for one (secret, output) pair."""
    return Metrics(
        fidelity=fidelity(secret, out),
        t_plus=transfer_coefficient(secret, out, Quad.PLUS),
        t_minus=transfer_coefficient(secret, out, Quad.MINUS),
        vcv_plus=conditional_variance(secret, out, Quad.PLUS),
        vcv_minus=conditional_variance(secret, out, Quad.MINUS),
        k_plus=_mean_mismatch(secret, out, Quad.PLUS),
        k_minus=_mean_mismatch(secret, out, Quad.MINUS),
    )


# ---------------------------------------------------------------------------
# Closed forms.  v_m is the classical modulation power (e^{2s} in squeezing
# notation); v_m = 0 means no added noise.


def closed_form(
    scheme: str, r: float, v_m: float = 0.0, eta: float = 1.0, gain: float | None = None
) -> tuple[float, float]:
    """Closed-form (T_q, V_q) for a scheme at the given parameters.

    Schemes: "ff_cp" (feedforward, collaborating players; needs gain and
    eta), "psa2_cp" (two-PSA scheme at its optimal gain), "sp" (a single
    player measuring a secret-bearing share directly).

    The two-PSA scheme has equal conditional variances 2 e^{-2r} in both
    quadratures, so its V_q product is 4 e^{-4r}.
    """
    em2r = math.exp(-2.0 * r)
    if scheme == "psa2_cp":
        return 2.0 / (1.0 + 2.0 * em2r), (2.0 * em2r) ** 2
    if scheme == "sp":
        bulge = math.cosh(2.0 * r) + v_m
        return 2.0 / (1.0 + bulge), (bulge / 2.0) ** 2
    if scheme == "ff_cp":
        if gain is None:
            raise ValueError("feedforward closed form needs a gain")
        if eta <= 0.0:
            raise ValueError("feedforward closed form undefined at zero efficiency")
        e2r = math.exp(2.0 * r)
        g = gain
        signal = (1.0 + g / _SQRT2) ** 2
        noise = (
            (g / 2.0 - _SQRT2) ** 2 * e2r
            + (1.5 * g) ** 2 * em2r
            + (2.0 - g / _SQRT2) ** 2 * v_m
            + 3.0 * g * g * (1.0 - eta) / eta
        )
        t_q = 1.0 / (1.0 + 2.0 * em2r) + signal / (signal + noise)
        v_q = (em2r / 18.0) * (
            9.0 * g * g * em2r
            + e2r * (g - 2.0 * _SQRT2) ** 2
            + 2.0 * v_m * (g - 2.0 * _SQRT2) ** 2
            + 12.0 * g * g * (1.0 - eta) / eta
        )
        return t_q, v_q
    raise ValueError(f"unknown scheme {scheme!r}")


def fidelity_closed_form(
    scheme: str, r: float, means: tuple[float, float] = (0.0, 0.0)
) -> float:
    """Closed-form fidelity limits for the two reconstruction schemes.

    "psa2": 1 / (1 + e^{-2r}), independent of the secret.  "ff": the
    uncorrected feedforward output is symplectically scaled, so the fidelity
    saturates below 1 and decays with the secret's displacement through the
    exponent gamma.
    """
    em2r = math.exp(-2.0 * r)
    if scheme == "psa2":
        return 1.0 / (1.0 + em2r)
    if scheme == "ff":
        mp, mm = means
        gamma = ((2.0 - _SQRT3) / 12.0) * (
            mp * mp / (2.0 + 3.0 * em2r) + 9.0 * mm * mm / (2.0 + em2r)
        )
        return math.exp(-gamma) * math.sqrt(3.0 / ((2.0 + em2r) * (2.0 + 3.0 * em2r)))
    raise ValueError(f"unknown scheme {scheme!r}")


# ---------------------------------------------------------------------------
# Deterministic scalar optimisation of the closed forms.

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
GAIN_SEARCH_RANGE = (0.0, 8.0)


def _golden_section_min(f, a: float, b: float, tol: float = 1e-10) -> float:
    """Golden-section minimum of a unimodal f on [a, b]."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _bracketed_min(f, lo: float, hi: float, tol: float = 1e-10, coarse: int = 64) -> float:
    """Coarse grid bracket then golden section; robust to an edge minimum."""
    xs = [lo + (hi - lo) * i / coarse for i in range(coarse + 1)]
    vals = [f(x) for x in xs]
    i = min(range(len(xs)), key=vals.__getitem__)
    a = xs[max(0, i - 1)]
    b = xs[min(coarse, i + 1)]
    return _golden_section_min(f, a, b, tol)


def optimal_gain(
    r: float, v_m: float = 0.0, eta: float = 1.0, objective: str = "max_tq"
) -> float:
    """Feedforward gain optimising a closed-form objective over [0, 8].

    "max_tq" maximises the information transfer sum; "min_vq" minimises the
    conditional-variance product.  Both approach 2 sqrt(2) for strong
    squeezing or strong added noise; with finite squeezing and no noise the
    transfer optimum sits strictly below it.
    """
    if objective == "max_tq":
        f = lambda g: -closed_form("ff_cp", r, v_m, eta, g)[0]
    elif objective == "min_vq":
        f = lambda g: closed_form("ff_cp", r, v_m, eta, g)[1]
    else:
        raise ValueError(f"unknown objective {objective!r}")
    return _bracketed_min(f, *GAIN_SEARCH_RANGE)


def squeezing_pct(r: float) -> float:
    """Squeezing as a fraction: 1 - e^{-2r} (0.4 means V+ = 0.6 shot noise)."""
    return 1.0 - math.exp(-2.0 * r)


def r_from_squeezing_pct(p: float) -> float:
    if not 0.0 <= p < 1.0:
        raise ValueError("squeezing fraction must be in [0, 1)")
    return -0.5 * math.log(1.0 - p)


def crossover_squeezing() -> float:
    """Squeezing fraction where collaborating players start beating singles.

    Solves T_q^SP(r) = T_q^CP(r) by bisection, the access structure running
    the feedforward loop at its minimum-noise gain (which is also the
    cancellation gain 2 sqrt(2) in the strong-squeezing limit).  Below the
    returned fraction a single player learns more than the pair, so they
    would measure the secret-bearing share directly instead.
    """

    def imbalance(r: float) -> float:
        g = optimal_gain(r, 0.0, 1.0, objective="min_vq")
        t_cp, _ = closed_form("ff_cp", r, 0.0, 1.0, g)
        t_sp, _ = closed_form("sp", r, 0.0)
        return t_cp - t_sp

    lo, hi = 1e-9, 2.0
    if not imbalance(lo) < 0.0 < imbalance(hi):
        raise RuntimeError("crossover bracket lost; closed forms changed?")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if imbalance(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return squeezing_pct(0.5 * (lo + hi))
