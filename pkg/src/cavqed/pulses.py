"""Pulse shapes in the Hermite-Gaussian envelope basis and their functionals.

Scaled time u = t/tau_d is used throughout; the carrier enters only through
the dimensionless product k = omega*tau_d.  A pulse is

    f(u) = [sum_m c_m f_HG,m(u)] * cos(k u + phi)

on the window [-T_u, T_u] (zero outside), or the bare envelope when the
carrier flag is off (sub-carrier-period pulses are specified that way).

The four propagator functionals are running integrals of f against
exp(-i k u) with polynomial weights; the nested ones additionally contain
the running values of the lower functionals:

    s1(u)      : weight 1
    s11(u)     : weight u
    s12(u)     : weight u^2/2
    s22 = s221 + s222, weights (u^2/2) (-i) s1*(u) and u (-i) s11*(u)

Single-point evaluation goes through adaptive quadrature after splitting
the cosine carrier into its exp(+-i k u) halves (the e^{-2iku} half gets an
oscillatory-weight rule).  Whole-window evaluation, which the propagator
machinery needs on a dense time grid, goes through the cumulative
Filon-Simpson engine in oscquad with automatic grid refinement.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import hermite as nph
from scipy.integrate import quad
from scipy.special import eval_hermite, gammaln

from .errors import QuadratureNonConvergence
from .oscquad import filon_cumulative, filon_panel_tail

MAX_HG_ORDER = 12
MIN_WINDOW = 4.0
CARRIER_WARN = 3.0

GRID_TOL = 1e-10      # target for s1/s11/s12 and the phase integral
GRID_TOL_NESTED = 1e-9
GRID_MAX_NODES = 2**20 + 1


def hg_norm(m: int) -> float:
    """Normalization pi^(-1/4)/sqrt(m! 2^m) making the envelope L2-normalized."""
    return math.pi ** (-0.25) / math.sqrt(math.exp(gammaln(m + 1)) * 2.0**m)


def hg_envelope(m: int, u):
    """Normalized Hermite-Gaussian N_m H_m(u) exp(-u^2/2)."""
    if not 0 <= m <= MAX_HG_ORDER:
        raise ValueError(f"HG order must be in [0, {MAX_HG_ORDER}], got {m}")
    u = np.asarray(u, dtype=float)
    out = hg_norm(m) * eval_hermite(m, u) * np.exp(-0.5 * u * u)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PulseSpec:
    """Dimensionless description of one shaped pulse.

    omega_tau_d : carrier frequency times duration (k above)
    area        : drive strength times duration, Omega*tau_d
    phi         : carrier-envelope phase
    envelope    : (m, c_m) pairs of real HG coefficients
    window      : half-width T_u of the time window in units of tau_d
    carrier     : disable to use the bare envelope as the full pulse shape
    """

    omega_tau_d: float
    area: float
    phi: float = 0.0
    envelope: tuple = ((0, 1.0),)
    window: float = 5.0
    carrier: bool = True

    def __post_init__(self):
        if self.omega_tau_d <= 0:
            raise ValueError(f"omega_tau_d must be positive, got {self.omega_tau_d}")
        if self.window < MIN_WINDOW:
            raise ValueError(f"window must be >= {MIN_WINDOW}, got {self.window}")
        terms = []
        for m, c in self.envelope:
            if int(m) != m or not 0 <= m <= MAX_HG_ORDER:
                raise ValueError(f"bad HG order {m!r}")
            if isinstance(c, complex) or not np.isreal(c):
                raise ValueError(f"envelope coefficients must be real, got {c!r}")
            terms.append((int(m), float(c)))
        object.__setattr__(self, "envelope", tuple(terms))
        if self.carrier and self.omega_tau_d < CARRIER_WARN:
            warnings.warn(
                f"omega_tau_d = {self.omega_tau_d:.3g} < {CARRIER_WARN}: the carrier "
                "is poorly defined within the pulse duration",
                stacklevel=2,
            )


@functools.lru_cache(maxsize=64)
def _envelope_poly(envelope: tuple) -> np.ndarray:
    """Power-basis coefficients of sum_m c_m N_m H_m(u)."""
    order = max(m for m, _ in envelope)
    herm = np.zeros(order + 1)
    for m, c in envelope:
        herm[m] += c * hg_norm(m)
    return nph.herm2poly(herm)


def envelope_value(pulse: PulseSpec, u):
    """Envelope f0(u), zero outside the window."""
    u = np.asarray(u, dtype=float)
    poly = _envelope_poly(pulse.envelope)
    out = np.polynomial.polynomial.polyval(u, poly) * np.exp(-0.5 * u * u)
    out = np.where(np.abs(u) <= pulse.window, out, 0.0)
    return out if out.ndim else float(out)


def pulse_value(pulse: PulseSpec, u):
    """Full pulse shape f(u) including the carrier."""
    u = np.asarray(u, dtype=float)
    out = envelope_value(pulse, u)
    if pulse.carrier:
        out = out * np.cos(pulse.omega_tau_d * u + pulse.phi)
    return out if np.ndim(out) else float(out)


def envelope_fourier(pulse: PulseSpec, k: float) -> tuple[complex, complex]:
    """(fhat0(k), d fhat0/dk) with fhat0(k) = integral f0(u) exp(-i k u) du.

    The HG envelopes are eigenfunctions of this transform up to the factor
    sqrt(2 pi) (-i)^m, so both values are closed-form.
    """
    val = 0.0 + 0j
    der = 0.0 + 0j
    root = math.sqrt(2.0 * math.pi)
    gauss = math.exp(-0.5 * k * k)
    for m, c in pulse.envelope:
        nm = hg_norm(m)
        hm = eval_hermite(m, k)
        hm_prime = 2.0 * m * eval_hermite(m - 1, k) if m > 0 else 0.0
        phase = (-1j) ** m
        val += c * root * phase * nm * hm * gauss
        der += c * root * phase * nm * (hm_prime - k * hm) * gauss
    return val, der


# ---------------------------------------------------------------------------
# single-point functionals via adaptive quadrature
# ---------------------------------------------------------------------------

def _weighted_envelope(pulse: PulseSpec, power: int):
    poly = _envelope_poly(pulse.envelope)
    fac = math.factorial(power)

    def fn(x):
        return (
            np.polynomial.polynomial.polyval(x, poly)
            * np.exp(-0.5 * x * x)
            * x**power
            / fac
        )

    return fn


def _oscillatory_quad(fn, a: float, b: float, w: float, tol: float) -> tuple[complex, float]:
    """integral fn(u) exp(-i w u) du on [a, b] with error estimate."""
    if w == 0.0:
        val, err = quad(fn, a, b, epsabs=tol, limit=400)
        return val + 0j, err
    re, e1 = quad(fn, a, b, weight="cos", wvar=w, epsabs=tol, limit=400, maxp1=100)
    im, e2 = quad(fn, a, b, weight="sin", wvar=w, epsabs=tol, limit=400, maxp1=100)
    return re - 1j * im, e1 + e2


def _moment_functional(pulse: PulseSpec, power: int, u: float, tol: float) -> complex:
    """Running integral of (u'^power/power!) f(u') exp(-i k u') up to u."""
    lo = -pulse.window
    hi = min(float(u), pulse.window)
    if hi <= lo:
        return 0.0 + 0j
    k = pulse.omega_tau_d
    fn = _weighted_envelope(pulse, power)
    sub_tol = tol / 4.0
    if pulse.carrier:
        # f0 cos(ku + phi) e^{-iku} = (1/2) e^{i phi} f0 + (1/2) e^{-i phi} f0 e^{-2iku}
        flat, err1 = _oscillatory_quad(fn, lo, hi, 0.0, sub_tol)
        osc, err2 = _oscillatory_quad(fn, lo, hi, 2.0 * k, sub_tol)
        value = 0.5 * np.exp(1j * pulse.phi) * flat + 0.5 * np.exp(-1j * pulse.phi) * osc
        err = err1 + err2
    else:
        value, err = _oscillatory_quad(fn, lo, hi, k, sub_tol)
    if err > 10.0 * tol:
        raise QuadratureNonConvergence(
            f"functional quadrature error {err:.2e} exceeds tolerance {tol:.1e}"
        )
    return complex(value)


def functional_s1(pulse: PulseSpec, u: float, tol: float = 1e-10) -> complex:
    """Running carrier-frequency component of the pulse, weight 1."""
    return _moment_functional(pulse, 0, u, tol)


def functional_s11(pulse: PulseSpec, u: float, tol: float = 1e-10) -> complex:
    """Same as functional_s1 with integrand weight u."""
    return _moment_functional(pulse, 1, u, tol)


def functional_s12(pulse: PulseSpec, u: float, tol: float = 1e-10) -> complex:
    """Same as functional_s1 with integrand weight u^2/2."""
    return _moment_functional(pulse, 2, u, tol)


# ---------------------------------------------------------------------------
# whole-window grids for the nested functionals and trajectory queries
# ---------------------------------------------------------------------------

@dataclass
class FunctionalSet:
    """All pulse functionals evaluated at one scaled time."""

    u: float
    s1: complex
    s11: complex
    s12: complex
    s221: complex
    s222: complex

    @property
    def s22(self) -> complex:
        return self.s221 + self.s222


class FunctionalGrid:
    """Cumulative functional arrays on a uniform grid over the pulse window.

    Built once per PulseSpec (cached) by Filon-Simpson integration with the
    node count doubled until self-consistency; do not mutate the arrays.
    """

    def __init__(self, pulse: PulseSpec, arrays: dict, errors: dict):
        self.pulse = pulse
        self.u = arrays["u"]
        self.s1 = arrays["s1"]
        self.s11 = arrays["s11"]
        self.s12 = arrays["s12"]
        self.s221 = arrays["s221"]
        self.s222 = arrays["s222"]
        self.phase_int = arrays["phase"]
        self.errors = errors
        self._h = (self.u[-1] - self.u[0]) / (self.u.size - 1)

    @property
    def nested_error(self) -> float:
        return max(self.errors["s221"], self.errors["s222"])

    def _tail(self, ua: float, uq: float, slow_fn, c: float) -> complex:
        um = 0.5 * (ua + uq)
        return filon_panel_tail(ua, uq, slow_fn(ua), slow_fn(um), slow_fn(uq), c)

    def evaluate(self, u: float) -> FunctionalSet:
        """Functionals at an arbitrary query time inside the window."""
        u0 = self.u[0]
        if u <= u0:
            return FunctionalSet(float(u), 0j, 0j, 0j, 0j, 0j)
        if u >= self.u[-1]:
            i = self.u.size - 1
            return FunctionalSet(
                float(u), self.s1[i], self.s11[i], self.s12[i], self.s221[i], self.s222[i]
            )
        idx = int((u - u0) / self._h)
        idx -= idx % 2
        ua = self.u[idx]
        pulse = self.pulse
        k = pulse.omega_tau_d

        def env_w(power):
            fac = math.factorial(power)
            return lambda x: envelope_value(pulse, x) * x**power / fac

        def interp(arr):
            return lambda x: np.interp(x, self.u, arr.real) + 1j * np.interp(
                x, self.u, arr.imag
            )

        s1_in, s11_in = interp(self.s1), interp(self.s11)
        if pulse.carrier:
            comps = [(0.5 * np.exp(1j * pulse.phi), 0.0), (0.5 * np.exp(-1j * pulse.phi), 2.0 * k)]
        else:
            comps = [(1.0 + 0j, k)]

        def running(base, slow_fn):
            total = base
            for coef, c in comps:
                total = total + coef * self._tail(ua, u, slow_fn, c)
            return total

        s1 = running(self.s1[idx], env_w(0))
        s11 = running(self.s11[idx], env_w(1))
        s12 = running(self.s12[idx], env_w(2))
        s221 = running(
            self.s221[idx], lambda x: env_w(2)(x) * (-1j) * np.conj(s1_in(x))
        )
        s222 = running(
            self.s222[idx], lambda x: env_w(1)(x) * (-1j) * np.conj(s11_in(x))
        )
        return FunctionalSet(float(u), s1, s11, s12, s221, s222)

    def phase_integral_at(self, u: float) -> float:
        """Running integral of f(u') Im[s1*(u') e^{-i k u'}] (area-free)."""
        if u <= self.u[0]:
            return 0.0
        if u >= self.u[-1]:
            return float(self.phase_int[-1])
        return float(np.interp(u, self.u, self.phase_int))

    def final(self) -> FunctionalSet:
        return self.evaluate(self.u[-1])


def _build_arrays(pulse: PulseSpec, n_nodes: int) -> dict:
    k = pulse.omega_tau_d
    u = np.linspace(-pulse.window, pulse.window, n_nodes)
    env = envelope_value(pulse, u)
    e1, eu, euu = env, u * env, 0.5 * u * u * env

    if pulse.carrier:
        comps = [(0.5 * np.exp(1j * pulse.phi), 0.0), (0.5 * np.exp(-1j * pulse.phi), 2.0 * k)]
    else:
        comps = [(1.0 + 0j, k)]

    def accumulate(slow, component_list=None):
        total = np.zeros(n_nodes, dtype=complex)
        for coef, c in component_list or comps:
            total += coef * filon_cumulative(u, slow, c)
        return total

    s1 = accumulate(e1)
    s11 = accumulate(eu)
    s12 = accumulate(euu)
    s221 = accumulate(-1j * euu * np.conj(s1))
    s222 = accumulate(-1j * eu * np.conj(s11))

    # f(u) Im[s1*(u) e^{-iku}] = f(u) [s1* e^{-iku} - s1 e^{iku}] / 2i,
    # with the carrier folded into signed-frequency components.
    if pulse.carrier:
        comp_a = [(coef / 2j, c) for coef, c in comps]
        comp_b = [(-coef.conjugate() / 2j, -c) for coef, c in comps]
    else:
        comp_a = [(1.0 / 2j, k)]
        comp_b = [(-1.0 / 2j, -k)]
    phase = accumulate(e1 * np.conj(s1), comp_a) + accumulate(e1 * s1, comp_b)

    return {
        "u": u,
        "s1": s1,
        "s11": s11,
        "s12": s12,
        "s221": s221,
        "s222": s222,
        "phase": phase.real,
    }


_PRIMARY_KEYS = ("s1", "s11", "s12", "phase")
_NESTED_KEYS = ("s221", "s222")


@functools.lru_cache(maxsize=16)
def functional_grid(pulse: PulseSpec) -> FunctionalGrid:
    """Build (and cache) the refined functional grid for a pulse."""
    # Start with enough nodes to resolve the fastest oscillation present in
    # any slow factor, which for the nested integrands is twice the carrier.
    per_period = 16.0 * pulse.window * pulse.omega_tau_d / math.pi
    n = 2048
    while n < min(per_period, GRID_MAX_NODES):
        n *= 2
    coarse = _build_arrays(pulse, n + 1)
    errors = None
    while True:
        fine = _build_arrays(pulse, 2 * n + 1)
        errors = {
            key: float(np.max(np.abs(fine[key][::2] - coarse[key])))
            for key in _PRIMARY_KEYS + _NESTED_KEYS
        }
        primary_ok = all(errors[key] < GRID_TOL for key in _PRIMARY_KEYS)
        nested_ok = all(errors[key] < GRID_TOL_NESTED for key in _NESTED_KEYS)
        if (primary_ok and nested_ok) or 2 * n + 1 >= GRID_MAX_NODES:
            if not primary_ok:
                raise QuadratureNonConvergence(
                    f"functional grid stuck at error {max(errors[key] for key in _PRIMARY_KEYS):.2e} "
                    f"with {2 * n + 1} nodes"
                )
            return FunctionalGrid(pulse, fine, errors)
        coarse, n = fine, 2 * n


def functional_s22(pulse: PulseSpec, u: float, tol: float = GRID_TOL_NESTED) -> complex:
    """Nested functional s22 = s221 + s222 at scaled time u."""
    grid = functional_grid(pulse)
    if grid.nested_error > tol:
        raise QuadratureNonConvergence(
            f"nested functionals reached {grid.nested_error:.2e}, needed {tol:.1e} "
            f"(omega_tau_d = {pulse.omega_tau_d:.3g} too fast for the node cap)"
        )
    fs = grid.evaluate(u)
    return fs.s22


def functional_set(pulse: PulseSpec, u: float) -> FunctionalSet:
    """All functionals at scaled time u from the shared grid."""
    return functional_grid(pulse).evaluate(u)
