"""Two-photon states as sparse polynomials in creation operators.

A state is stored as a map from canonical monomials (sorted tuples of mode
labels) to complex coefficients, acting on the vacuum.  Creation operators
commute, so a monomial is a multiset.  The squared Fock norm weights each
monomial by the product of factorials of its label multiplicities, i.e. 2
for (p^dag)^2 and 1 for p^dag q^dag with p != q.
"""
from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import InvalidParameterError, InvalidStateError
from .interferometer import Sign, _check_sign, psi_coefficients
from .modes import BASIS, BasisModeIndex, SpinOrbitAmplitudes

PRUNE_TOL = 1e-15
INPUT_PORTS = ("a", "b")
OUTPUT_PORTS = ("c", "d")


class ModeLabel(NamedTuple):
    port: str
    j: int
    k: int

    @property
    def idx(self) -> BasisModeIndex:
        return BasisModeIndex(self.j, self.k)

    def __str__(self) -> str:
        return f"{self.port}{self.j}{self.k}"


def label(port: str, idx: BasisModeIndex) -> ModeLabel:
    if port not in INPUT_PORTS + OUTPUT_PORTS:
        raise InvalidParameterError(f"unknown port {port!r}")
    return ModeLabel(port, idx[0], idx[1])


def _canonical(labels: Iterable[ModeLabel]) -> tuple[ModeLabel, ...]:
    return tuple(sorted(labels))


def monomial_weight(mono: tuple[ModeLabel, ...]) -> int:
    """<vac| m m^dag |vac> for a monomial of creation operators."""
    w = 1
    for n in Counter(mono).values():
        w *= math.factorial(n)
    return w


class OperatorPolynomial:
    """Complex-coefficient polynomial in commuting creation operators."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, complex] | None = None):
        acc: dict[tuple[ModeLabel, ...], complex] = {}
        for mono, coef in (terms or {}).items():
            key = _canonical(mono)
            acc[key] = acc.get(key, 0j) + complex(coef)
        self.terms = {m: c for m, c in acc.items() if abs(c) > PRUNE_TOL}

    @classmethod
    def linear(cls, coefs: Mapping[ModeLabel, complex]) -> "OperatorPolynomial":
        return cls({(lab,): c for lab, c in coefs.items()})

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __add__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0j) + c
        return OperatorPolynomial(out)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, OperatorPolynomial):
            out: dict[tuple, complex] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    key = _canonical(m1 + m2)
                    out[key] = out.get(key, 0j) + c1 * c2
            return OperatorPolynomial(out)
        return OperatorPolynomial({m: c * other for m, c in self.terms.items()})

    __rmul__ = __mul__

    def coefficient(self, *labels: ModeLabel) -> complex:
        return self.terms.get(_canonical(labels), 0j)

    def labels(self) -> set[ModeLabel]:
        return {lab for mono in self.terms for lab in mono}

    def ports(self) -> set[str]:
        return {lab.port for lab in self.labels()}

    def fock_norm_sq(self) -> float:
        return float(sum(abs(c) ** 2 * monomial_weight(m) for m, c in self.terms.items()))

    def normalized(self) -> "OperatorPolynomial":
        n = self.fock_norm_sq()
        if n == 0:
            raise InvalidStateError("cannot normalize the zero polynomial")
        return self * (1 / math.sqrt(n))

    def __repr__(self):
        parts = [f"({c:.6g})*{'*'.join(str(l) + '^' for l in m)}" for m, c in sorted(self.terms.items())]
        return "OperatorPolynomial(" + " + ".join(parts) + ")"


def _check_normalized(amps: SpinOrbitAmplitudes, tol: float = 1e-10) -> np.ndarray:
    v = amps.vector
    if not np.all(np.isfinite(v)):
        raise InvalidParameterError("amplitudes must be finite")
    norm = float(np.sum(np.abs(v) ** 2))
    if abs(norm - 1.0) > tol:
        raise InvalidParameterError(f"amplitudes must be normalized, sum |e|^2 = {norm}")
    return v


def port_operator(amps_vector: np.ndarray, port: str) -> OperatorPolynomial:
    """sum_jk coef_jk p_jk^dag for a 4-vector in BASIS order."""
    return OperatorPolynomial.linear({label(port, idx): c for idx, c in zip(BASIS, amps_vector)})


def biphoton_input(amps: SpinOrbitAmplitudes) -> OperatorPolynomial:
    """(sum e_jk a_jk^dag)(sum e_jk b_jk^dag) |vac>, unit Fock norm."""
    v = _check_normalized(amps)
    return port_operator(v, "a") * port_operator(v, "b")


def _input_relation(lab: ModeLabel, delta: float) -> OperatorPolynomial:
    # (a^dag, b^dag) in terms of (c^dag, d^dag), per parity class.
    s, c = math.sin(delta / 2), math.cos(delta / 2)
    cl = ModeLabel("c", lab.j, lab.k)
    dl = ModeLabel("d", lab.j, lab.k)
    if lab.idx.even:
        row = {"a": (1j * s, 1j * c), "b": (1j * c, -1j * s)}[lab.port]
    else:
        row = {"a": (c, s), "b": (s, -c)}[lab.port]
    return OperatorPolynomial.linear({cl: row[0], dl: row[1]})


def substitute_output_operators(poly: OperatorPolynomial, delta: float) -> OperatorPolynomial:
    """Rewrite a state over input-port operators in terms of output-port ones."""
    if not math.isfinite(delta):
        raise InvalidParameterError("delta must be finite")
    bad = poly.ports() - set(INPUT_PORTS)
    if bad:
        raise InvalidStateError(f"substitution expects input-port labels only, found ports {sorted(bad)}")
    cache: dict[ModeLabel, OperatorPolynomial] = {}
    out = OperatorPolynomial()
    for mono, coef in poly:
        term = OperatorPolynomial({(): coef})
        for lab in mono:
            if lab not in cache:
                cache[lab] = _input_relation(lab, delta)
            term = term * cache[lab]
        out = out + term
    return out


def _split_weights(poly: OperatorPolynomial) -> tuple[float, float]:
    bad = poly.ports() - set(OUTPUT_PORTS)
    if bad:
        raise InvalidStateError(f"detection statistics need output-port labels, found {sorted(bad)}")
    norm = poly.fock_norm_sq()
    if norm == 0:
        raise InvalidStateError("zero polynomial has no detection statistics")
    coinc = 0.0
    for mono, coef in poly:
        if len(mono) != 2:
            raise InvalidStateError("detection statistics are defined for two-photon states only")
        if {mono[0].port, mono[1].port} == {"c", "d"}:
            coinc += abs(coef) ** 2
    return coinc, norm


def coincidence_probability(poly: OperatorPolynomial) -> float:
    """Probability that one photon exits c and the other exits d."""
    coinc, norm = _split_weights(poly)
    return coinc / norm


def bunching_probability(poly: OperatorPolynomial) -> float:
    coinc, norm = _split_weights(poly)
    return (norm - coinc) / norm


def hom_output_state(amps: SpinOrbitAmplitudes, sign: Sign) -> OperatorPolynomial:
    """Closed-form bunched output (Psi_c^2 - Psi_d^2)/2 at delta = +-pi/2.

    sign "+" means delta = +pi/2 (collective mode Psi_-), "-" means -pi/2
    (Psi_+).  The factor 1/2 gives unit Fock norm.
    """
    _check_sign(sign)
    v = _check_normalized(amps)
    coeffs = psi_coefficients(SpinOrbitAmplitudes.from_vector(v), "-" if sign == "+" else "+")
    pc = port_operator(coeffs, "c")
    pd = port_operator(coeffs, "d")
    return (pc * pc - pd * pd) * 0.5


def aligned_difference(p: OperatorPolynomial, q: OperatorPolynomial) -> float:
    """Max coefficient difference after dividing each by its value at p's largest monomial."""
    if not p.terms:
        return max((abs(c) for _, c in q), default=0.0)
    ref = max(p.terms, key=lambda m: (abs(p.terms[m]), m))
    qref = q.terms.get(ref, 0j)
    if qref == 0:
        return math.inf
    pn = p * (1 / p.terms[ref])
    qn = q * (1 / qref)
    keys = set(pn.terms) | set(qn.terms)
    return max(abs(pn.terms.get(k, 0j) - qn.terms.get(k, 0j)) for k in keys)


def equal_up_to_global_phase(p: OperatorPolynomial, q: OperatorPolynomial, atol: float = 1e-12) -> bool:
    if abs(p.fock_norm_sq() - q.fock_norm_sq()) > atol:
        return False
    return aligned_difference(p, q) <= atol


def sweep_probabilities(amps: SpinOrbitAmplitudes, deltas: Iterable[float]) -> list[tuple[float, float, float]]:
    """(delta, coincidence, bunching) rows for the biphoton input of ``amps``."""
    state = biphoton_input(amps)
    rows = []
    for d in deltas:
        out = substitute_output_operators(state, d)
        coinc, norm = _split_weights(out)
        rows.append((float(d), coinc / norm, (norm - coinc) / norm))
    return rows
