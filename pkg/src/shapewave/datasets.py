"""Deterministic signal generators and CSV ingestion/emission.

All generators are pure functions of their arguments, including the noise
seed: noise streams come from numpy's default PCG64 generator seeded per
call, so equal inputs give bitwise-equal outputs.

CSV formats (UTF-8, LF or CRLF, plain decimal notation):

* signal files:  header ``t,f``, one ``time,value`` record per line
* phase files:   header ``t,theta``
* shape files:   header ``tau,s`` (one period sampled on a uniform grid)
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import Signal, validate_signal
from .errors import NonFiniteState, ParseError

#: Absolute value beyond which an ODE trajectory counts as blown up.
BLOWUP_LIMIT = 1.0e6


@dataclass(frozen=True)
class NoiseSpec:
    """Additive white Gaussian noise: standard deviation and RNG seed."""

    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0.0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")

    def draw(self, n: int) -> np.ndarray:
        return self.sigma * np.random.default_rng(self.seed).standard_normal(n)


@dataclass(frozen=True)
class DuffingParams:
    """Parameters of the forced oscillator ``u'' + u + eps*u^(1+w) = gamma*cos(beta*t)``.

    The power term is evaluated as ``sign(u) * |u|**(1+w)`` so non-integer
    exponents are well defined; the default exponent 2 gives the cubic case.

    ``epsilon`` defaults to +1, a hardening restoring force.  With the
    softening sign (-1) and the default initial state (1, 1) the motion of
    this undamped system is unbounded (the initial energy exceeds the
    potential barrier at |u| = 1), so integration would stop with
    :class:`NonFiniteState` almost immediately.
    """

    epsilon: float = 1.0
    gamma: float = 0.1
    beta: float = 1.0 / 25.0
    omega_exponent: float = 2.0
    u0: float = 1.0
    v0: float = 1.0
    t_span: float = 400.0
    dt: float = 0.01

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_span / self.dt < 1000:
            raise ValueError("t_span/dt must be at least 1000")
        if self.omega_exponent <= 0.0:
            raise ValueError(f"omega_exponent must be positive, got {self.omega_exponent}")


def integrate_duffing(params: DuffingParams):
    """Integrate the oscillator with classical fixed-step 4th-order Runge-Kutta.

    Returns
    -------
    (times, u, v) : ndarrays of length round(t_span/dt) + 1

    Raises
    ------
    NonFiniteState
        When the state stops being finite or exceeds ``BLOWUP_LIMIT``.
    """
    eps = params.epsilon
    gamma = params.gamma
    beta = params.beta
    pw = 1.0 + params.omega_exponent
    dt = params.dt
    steps = int(round(params.t_span / dt))

    def acc(t, u, v):
        return gamma * np.cos(beta * t) - u - eps * np.sign(u) * np.abs(u) ** pw

    u = np.empty(steps + 1)
    v = np.empty(steps + 1)
    u[0], v[0] = params.u0, params.v0
    uk, vk = float(params.u0), float(params.v0)
    for k in range(steps):
        t = k * dt
        k1u = vk
        k1v = acc(t, uk, vk)
        k2u = vk + 0.5 * dt * k1v
        k2v = acc(t + 0.5 * dt, uk + 0.5 * dt * k1u, vk + 0.5 * dt * k1v)
        k3u = vk + 0.5 * dt * k2v
        k3v = acc(t + 0.5 * dt, uk + 0.5 * dt * k2u, vk + 0.5 * dt * k2v)
        k4u = vk + dt * k3v
        k4v = acc(t + dt, uk + dt * k3u, vk + dt * k3v)
        uk = uk + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        vk = vk + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not (np.isfinite(uk) and np.isfinite(vk)) or abs(uk) > BLOWUP_LIMIT:
            raise NonFiniteState(f"trajectory blew up at t = {(k + 1) * dt:.4g}")
        u[k + 1], v[k + 1] = uk, vk
    times = np.arange(steps + 1) * dt
    return times, u, v


def gen_duffing(params: DuffingParams | None = None, noise: NoiseSpec = NoiseSpec(),
                n_samples: int | None = 8192) -> Signal:
    """Integrate the oscillator and return the (optionally noisy) displacement.

    The dense trajectory is thinned to about ``n_samples`` points; pass
    ``n_samples=None`` to keep every integration step.
    """
    if params is None:
        params = DuffingParams()
    times, u, _ = integrate_duffing(params)
    if n_samples is not None and n_samples < len(times):
        idx = np.unique(np.round(np.linspace(0, len(times) - 1, n_samples)).astype(int))
        times, u = times[idx], u[idx]
    if noise.sigma > 0.0:
        u = u + noise.draw(len(u))
    return validate_signal(times, u)


def example1_shape(tau):
    """The generating shape of the first synthetic benchmark."""
    tau = np.asarray(tau, dtype=float)
    return 1.0 / (1.1 + np.cos(tau + np.cos(2.0 * tau)))


def gen_example1(n_samples: int = 4096, noise: NoiseSpec = NoiseSpec()):
    """First synthetic benchmark: intra-wave FM under a smooth envelope.

    On ``t in [0, 1]``::

        theta(t) = 40*pi*t + 2*cos(6*pi*t)
        a(t)     = 1 / (2 + sin(2*pi*t))
        f(t)     = a(t) / (1.1 + cos(theta + cos(2*theta))) + noise

    Returns
    -------
    (Signal, ndarray, callable)
        The signal, the exact phase samples, and the exact shape evaluator
        ``s(tau) = 1 / (1.1 + cos(tau + cos(2*tau)))``.
    """
    if n_samples < 512:
        raise ValueError(f"need at least 512 samples, got {n_samples}")
    t = np.linspace(0.0, 1.0, n_samples)
    theta = 40.0 * np.pi * t + 2.0 * np.cos(6.0 * np.pi * t)
    envelope = 1.0 / (2.0 + np.sin(2.0 * np.pi * t))
    f = envelope * example1_shape(theta)
    if noise.sigma > 0.0:
        f = f + noise.draw(n_samples)
    return validate_signal(t, f), theta, example1_shape


def gen_morphing_shape(n_samples: int, shape_a, shape_b, l_theta: int) -> Signal:
    """Signal whose shape blends linearly from ``shape_a`` to ``shape_b``.

    ``f(t) = (1 - t) * shape_a(theta) + t * shape_b(theta)`` with the linear
    phase ``theta = 2*pi*l_theta*t`` on [0, 1].  Both evaluators must be
    2*pi-periodic.
    """
    t = np.linspace(0.0, 1.0, n_samples)
    theta = 2.0 * np.pi * l_theta * t
    f = (1.0 - t) * np.asarray(shape_a(theta), dtype=float) + t * np.asarray(shape_b(theta), dtype=float)
    return validate_signal(t, f)


# ---- CSV ------------------------------------------------------------------


def _read_two_columns(path, expected_header):
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        for line_no, row in enumerate(reader, start=1):
            if not row:
                continue
            if line_no == 1:
                header = tuple(cell.strip() for cell in row)
                if header != expected_header:
                    raise ParseError(
                        f"expected header {','.join(expected_header)!r}, got {','.join(header)!r} "
                        f"at line 1",
                        line=1,
                    )
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 columns, got {len(row)} at line {line_no}", line=line_no)
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                raise ParseError(f"non-numeric value at line {line_no}", line=line_no) from None
    if not rows:
        raise ParseError("no data records", line=1)
    data = np.asarray(rows, dtype=float)
    return data[:, 0], data[:, 1]


def load_signal_csv(path) -> Signal:
    """Read a ``t,f`` file and validate it as a :class:`Signal`."""
    times, values = _read_two_columns(path, ("t", "f"))
    return validate_signal(times, values)


def load_phase_csv(path) -> np.ndarray:
    """Read a ``t,theta`` file and return the raw phase samples."""
    _, phases = _read_two_columns(path, ("t", "theta"))
    return phases


def _write_two_columns(path, header, col_a, col_b):
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(f"{header[0]},{header[1]}\n")
        for a, b in zip(col_a, col_b):
            handle.write(f"{a:.17g},{b:.17g}\n")


def write_signal_csv(path, signal: Signal):
    _write_two_columns(path, ("t", "f"), signal.times, signal.values)


def write_phase_csv(path, times, phases):
    _write_two_columns(path, ("t", "theta"), times, phases)


def write_shape_csv(path, tau, values):
    _write_two_columns(path, ("tau", "s"), tau, values)
