"""Seeded invariant suite run by ``spinorbit selftest``."""
from __future__ import annotations

import math

import numpy as np

from .biphoton import (
    aligned_difference,
    biphoton_input,
    coincidence_probability,
    hom_output_state,
    substitute_output_operators,
)
from .fields import GridSpec, evaluate_on_grid, psi_from_basis, psi_parameterized
from .interferometer import PortPair, propagate, transfer_matrix
from .modes import BASIS, PoincareAngles, SpinOrbitAmplitudes, product_amplitudes
from .polarization import polarizer_matrix

DEFAULT_SEED = 20240611


def _random_angles(rng: np.random.Generator) -> PoincareAngles:
    t, a = rng.uniform(0, math.pi, 2)
    p, b = rng.uniform(-math.pi, math.pi, 2)
    return PoincareAngles(float(t), float(p), float(a), float(b))


def _check(name: str, value: float, tol: float) -> dict:
    return {"name": name, "max_error": float(value), "tolerance": tol, "passed": bool(value < tol)}


def run_selftest(seed: int = DEFAULT_SEED, trials: int = 20) -> dict:
    rng = np.random.default_rng(seed)
    checks = []

    err = 0.0
    for d in rng.uniform(-2 * math.pi, 2 * math.pi, trials):
        for idx in BASIS:
            m = transfer_matrix(idx, float(d)).m
            err = max(err, float(np.max(np.abs(m.conj().T @ m - np.eye(2)))))
    checks.append(_check("transfer matrix unitarity", err, 1e-12))

    err = 0.0
    for _ in range(trials):
        v = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))
        pair = PortPair(SpinOrbitAmplitudes.from_vector(v[0]), SpinOrbitAmplitudes.from_vector(v[1]))
        out = propagate(pair, float(rng.uniform(-math.pi, math.pi)))
        err = max(err, abs(out.power() - pair.power()) / pair.power())
    checks.append(_check("power conservation", err, 1e-12))

    coinc, phase = 0.0, 0.0
    for _ in range(trials):
        amps = product_amplitudes(_random_angles(rng))
        for sign, d in (("+", math.pi / 2), ("-", -math.pi / 2)):
            out = substitute_output_operators(biphoton_input(amps), d).normalized()
            coinc = max(coinc, coincidence_probability(out))
            phase = max(phase, aligned_difference(out, hom_output_state(amps, sign)))
    checks.append(_check("HOM coincidence suppression", coinc, 1e-12))
    checks.append(_check("HOM closed form", phase, 1e-12))

    err = 0.0
    for _ in range(trials):
        ang = _random_angles(rng)
        amps = product_amplitudes(ang)
        r = rng.uniform(0, 3, 200)
        phi = rng.uniform(0, 2 * math.pi, 200)
        for sign in "+-":
            a = psi_from_basis(amps, sign, r, phi)
            b = psi_parameterized(ang, sign, r, phi)
            err = max(err, float(np.max(np.abs(a - b))))
    checks.append(_check("basis vs parameterized field", err, 1e-10))

    spec = GridSpec(half_extent=4.0, samples=256)
    amps = product_amplitudes(_random_angles(rng))
    total = evaluate_on_grid(spec, lambda r, p, w: psi_from_basis(amps, "-", r, p, w)).total_power()
    checks.append(_check("grid normalization", abs(total - 1.0), 1e-4))

    err = 0.0
    for g in rng.uniform(0, math.pi, trials):
        m = polarizer_matrix(float(g))
        err = max(err, float(np.max(np.abs(m @ m - m))))
    checks.append(_check("polarizer idempotence", err, 1e-14))

    return {
        "seed": seed,
        "trials": trials,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
