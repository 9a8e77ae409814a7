"""Flat matrix models: magic unitaries of rank-one projections.

A magic basis xi induces the model v_ij = |xi_ij><xi_ij|.  A word in the
generators collapses to a single rank-one operator,

    v_(i1,j1) ... v_(im,jm)
        = ( prod_t <xi_(it,jt), xi_(i(t+1),j(t+1))> ) |xi_(i1,j1)><xi_(im,jm)|,

so zero/nonzero questions reduce to products of Gram factors.  The module
evaluates words in this closed form, scans all index tuples of a given length
for the free-orbital property (words vanish only when two consecutive factors
share exactly one of row/column), and checks the commutation pattern
[v_ij, v_kl] = 0 <=> i = k or j = l.  A brute-force classical model over S_n
is included as a contrast oracle: there the generators are the indicator
functions 1_(j -> i) on permutations.

Monomials are tuples of 1-based ``(row, column)`` pairs; the text form is
comma-separated ``row:column`` items, e.g. ``"1:1,2:2,1:1,2:2"``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import magic_bases
from .errors import (BudgetExceeded, DimensionTooLarge, EmptyMonomial,
                     IndexOutOfRange, NotMagic)

TOL_ZERO = 1e-12      # |coefficient| below this counts as a vanished word
TOL_NONZERO = 1e-9    # |coefficient| above this counts as a surviving word
TOL_MAGIC_LAW = 1e-11
DEFAULT_BUDGET = 10 ** 9

Monomial = tuple[tuple[int, int], ...]


# --- monomial combinatorics -------------------------------------------------

def parse_monomial(text: str) -> Monomial:
    """Parse ``"1:1,2:2"`` into ((1, 1), (2, 2)); empty string is the identity."""
    text = text.strip()
    if not text:
        return ()
    pairs = []
    for item in text.split(","):
        left, sep, right = item.partition(":")
        if not sep:
            raise ValueError(f"bad monomial item {item!r}, expected row:column")
        pairs.append((int(left), int(right)))
    return tuple(pairs)


def format_monomial(mono: Monomial) -> str:
    return ",".join(f"{i}:{j}" for i, j in mono)


def validate_monomial(mono: Monomial, n: int) -> None:
    for pair in mono:
        i, j = pair
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexOutOfRange(f"pair {pair} outside 1..{n}")


def is_trivially_zero(mono: Monomial) -> bool:
    """True when two consecutive factors share exactly one of row/column."""
    for (i1, j1), (i2, j2) in zip(mono, mono[1:]):
        if (i1 == i2) != (j1 == j2):
            return True
    return False


def reduce_monomial(mono: Monomial) -> Monomial | None:
    """Collapse adjacent equal pairs (projections are idempotent) and return
    None when a collapse exposes two consecutive factors sharing exactly one
    of row/column.  Idempotent; the empty word is the identity."""
    out: list[tuple[int, int]] = []
    for pair in mono:
        if out and out[-1] == pair:
            continue
        if out:
            i1, j1 = out[-1]
            i2, j2 = pair
            if (i1 == i2) != (j1 == j2):
                return None
        out.append(pair)
    return tuple(out)


# --- the model ---------------------------------------------------------------

@dataclass(frozen=True)
class FlatModel:
    """Magic unitary of rank-one projections plus its precomputed Gram table."""

    basis: magic_bases.MagicBasis
    n: int
    gram: np.ndarray = field(repr=False)       # (n, n, n, n) complex
    gram_abs: np.ndarray = field(repr=False)   # same shape, magnitudes

    def projection(self, i: int, j: int) -> np.ndarray:
        v = self.basis.vector(i, j)
        return np.outer(v, v.conj())

    def gram_entry(self, a: tuple[int, int], b: tuple[int, int]) -> complex:
        return complex(self.gram[a[0] - 1, a[1] - 1, b[0] - 1, b[1] - 1])


def model_from_basis(basis: magic_bases.MagicBasis,
                     tol_construct: float = magic_bases.TOL_CONSTRUCT) -> FlatModel:
    """Build the flat model after checking the grid really is magic."""
    magic_bases.require_magic(basis, tol_construct)
    G = magic_bases.gram_table(basis)
    return FlatModel(basis=basis, n=basis.n, gram=G, gram_abs=np.abs(G))


def magic_law_residual(model: FlatModel) -> float:
    """max over rows/columns of || sum_k v_ik - 1 || (and the column version)."""
    n = model.n
    eye = np.eye(n)
    worst = 0.0
    for s in range(1, n + 1):
        row = sum(model.projection(s, k) for k in range(1, n + 1))
        col = sum(model.projection(k, s) for k in range(1, n + 1))
        worst = max(worst, np.abs(row - eye).max(), np.abs(col - eye).max())
    return worst


@dataclass(frozen=True)
class MonomialValue:
    """coefficient * |xi_ket><xi_bra|, or the identity when the word is empty."""

    coefficient: complex
    ket_index: tuple[int, int] | None
    bra_index: tuple[int, int] | None
    is_identity: bool = False

    def matrix(self, model: FlatModel) -> np.ndarray:
        if self.is_identity:
            return np.eye(model.n, dtype=complex)
        ket = model.basis.vector(*self.ket_index)
        bra = model.basis.vector(*self.bra_index)
        return self.coefficient * np.outer(ket, bra.conj())

    def trace(self, model: FlatModel) -> complex:
        if self.is_identity:
            return complex(model.n)
        return self.coefficient * model.gram_entry(self.bra_index, self.ket_index)


def monomial_value(model: FlatModel, mono: Monomial) -> MonomialValue:
    """Closed-form value of a generator word in the model.

    The coefficient is the product of consecutive Gram factors; the word is
    zero in the model iff |coefficient| <= TOL_ZERO.
    """
    if not mono:
        raise EmptyMonomial("use the explicit identity for the empty word")
    validate_monomial(mono, model.n)
    coeff = complex(1.0)
    for a, b in zip(mono, mono[1:]):
        coeff *= model.gram_entry(a, b)
    return MonomialValue(coefficient=coeff, ket_index=mono[0], bra_index=mono[-1])


def orbital_related(model: FlatModel, itup: tuple[int, ...], jtup: tuple[int, ...],
                    tol_nonzero: float = TOL_NONZERO) -> bool:
    """Whether (i1..im) ~ (j1..jm), i.e. u_(i1,j1)...u_(im,jm) != 0 in the model."""
    if len(itup) != len(jtup):
        raise ValueError("tuples must have equal length")
    if not itup:
        return True
    mono = tuple(zip(itup, jtup))
    return abs(monomial_value(model, mono).coefficient) > tol_nonzero


# --- exhaustive free-orbital scan --------------------------------------------

@dataclass
class OrbitalScanReport:
    """Result of scanning every length-m word of a model.

    ``min_nonzero`` is the smallest |coefficient| among words without a
    consecutive row/column clash; ``max_zero`` the largest among words with
    one (None when m = 1: no adjacent pairs exist).  The scan passes when the
    vanishing words are exactly the trivially-zero ones.
    """

    n: int
    m: int
    total: int
    passed: bool
    min_nonzero: float
    max_zero: float | None
    violations: list = field(default_factory=list)
    tol_zero: float = TOL_ZERO
    tol_nonzero: float = TOL_NONZERO

    def gap_ratio(self) -> float | None:
        if self.max_zero is None:
            return None
        if self.max_zero == 0.0:
            return math.inf
        return self.min_nonzero / self.max_zero

    def to_dict(self) -> dict:
        return {
            "n": self.n, "m": self.m, "total_words": self.total,
            "pass": self.passed,
            "gap_min_nonzero": self.min_nonzero,
            "gap_max_zero": self.max_zero,
            "violations": [[list(p) for p in w] for w in self.violations],
            "tol_zero": self.tol_zero, "tol_nonzero": self.tol_nonzero,
        }


def check_free_orbitals(model: FlatModel, m: int,
                        budget: int = DEFAULT_BUDGET,
                        tol_zero: float = TOL_ZERO,
                        tol_nonzero: float = TOL_NONZERO,
                        max_violations: int = 32) -> OrbitalScanReport:
    """Exhaustively evaluate |coefficient| for all n^(2m) words of length m.

    Words are organized by leading pair; for each leading pair the remaining
    m-1 factors are enumerated as numpy axes, carrying the running product of
    Gram magnitudes and a "had a trivial clash" flag.  Memory per chunk is
    (n^2)^(m-1) floats.
    """
    n = model.n
    total = n ** (2 * m)
    if total > budget:
        raise BudgetExceeded(f"scan touches {total} words > budget {budget}")
    if m < 1:
        raise ValueError("m must be >= 1")

    if m == 1:
        return OrbitalScanReport(n=n, m=m, total=total, passed=True,
                                 min_nonzero=1.0, max_zero=None,
                                 tol_zero=tol_zero, tol_nonzero=tol_nonzero)

    n2 = n * n
    M = model.gram_abs.reshape(n2, n2)
    rows = np.repeat(np.arange(n), n)
    cols = np.tile(np.arange(n), n)
    clash = (rows[:, None] == rows[None, :]) ^ (cols[:, None] == cols[None, :])

    min_nonzero = math.inf
    max_zero = 0.0
    violations: list = []

    for lead in range(n2):
        # last axis = current endpoint pair, so the word can be extended
        prod = M[lead][None, :].copy()
        triv = clash[lead][None, :].copy()
        for _ in range(m - 2):
            prod = (prod[:, :, None] * M[None, :, :]).reshape(-1, n2)
            triv = (triv[:, :, None] | clash[None, :, :]).reshape(-1, n2)
        prod = prod.reshape(-1)
        triv = triv.reshape(-1)

        nz = prod[~triv]
        if nz.size:
            min_nonzero = min(min_nonzero, float(nz.min()))
        z = prod[triv]
        if z.size:
            max_zero = max(max_zero, float(z.max()))

        bad = np.nonzero((~triv & (prod <= tol_zero)) | (triv & (prod > tol_zero)))[0]
        for flat in bad[:max_violations - len(violations)]:
            violations.append(_unflatten_word(lead, int(flat), n, m))
        if len(violations) >= max_violations:
            break

    passed = not violations and min_nonzero > tol_nonzero and \
        (max_zero <= tol_zero)
    return OrbitalScanReport(n=n, m=m, total=total, passed=passed,
                             min_nonzero=min_nonzero,
                             max_zero=max_zero if m > 1 else None,
                             violations=violations,
                             tol_zero=tol_zero, tol_nonzero=tol_nonzero)


def _unflatten_word(lead: int, flat: int, n: int, m: int) -> Monomial:
    n2 = n * n
    digits = []
    for _ in range(m - 1):
        digits.append(flat % n2)
        flat //= n2
    digits.reverse()
    word = [lead] + digits
    return tuple((d // n + 1, d % n + 1) for d in word)


# --- commutation pattern -----------------------------------------------------

def commutation_pattern(model: FlatModel, tol: float = 1e-10) -> np.ndarray:
    """Boolean (n^2, n^2) matrix: entry[(i,j),(k,l)] iff v_ij and v_kl commute.

    Pairs are enumerated row-major, pair (i, j) at index (i-1)*n + (j-1).
    For a rank-one model the commutator norm has the closed form
    sqrt(2) * |g| * sqrt(1 - |g|^2) with g = <xi_ij, xi_kl>, so commutation
    is exactly |g| in {0, 1}.
    """
    n = model.n
    mags = model.gram_abs.reshape(n * n, n * n)
    comm_norm = math.sqrt(2.0) * mags * np.sqrt(np.clip(1.0 - mags ** 2, 0.0, None))
    # v_ij commutes with itself exactly; the closed form amplifies the one-ulp
    # noise in |<xi, xi>| = 1 to sqrt size, so pin the diagonal
    np.fill_diagonal(comm_norm, 0.0)
    return comm_norm <= tol


def expected_commutation_pattern(n: int) -> np.ndarray:
    """The pattern [i = k or j = l] in the same (n^2, n^2) layout."""
    rows = np.repeat(np.arange(n), n)
    cols = np.tile(np.arange(n), n)
    return (rows[:, None] == rows[None, :]) | (cols[:, None] == cols[None, :])


# --- classical contrast model --------------------------------------------------

@dataclass(frozen=True)
class ClassicalModel:
    """All of S_n, kept as explicit permutation tuples (sigma[j-1] = sigma(j))."""

    n: int
    permutations: tuple

    def __post_init__(self):
        if self.n > 8:
            raise DimensionTooLarge("classical oracle capped at n <= 8")


def classical_model(n: int) -> ClassicalModel:
    if n > 8:
        raise DimensionTooLarge(f"classical oracle capped at n <= 8, got {n}")
    perms = tuple(itertools.permutations(range(1, n + 1)))
    return ClassicalModel(n=n, permutations=perms)


def classical_zero(cm: ClassicalModel, mono: Monomial) -> bool:
    """True iff no sigma in S_n satisfies sigma(j_t) = i_t for every factor."""
    validate_monomial(mono, cm.n)
    for sigma in cm.permutations:
        if all(sigma[j - 1] == i for i, j in mono):
            return False
    return True


def check_free_orbitals_classical(cm: ClassicalModel, m: int,
                                  max_violations: int = 32) -> OrbitalScanReport:
    """Classical analogue of the exhaustive scan: a word survives iff some
    permutation satisfies all its constraints.  Gap statistics degenerate to
    1.0 / 0.0 since indicator products are 0/1-valued."""
    n = cm.n
    total = n ** (2 * m)
    violations = []
    any_zero_nontrivial = False
    for word in itertools.product(
            itertools.product(range(1, n + 1), repeat=2), repeat=m):
        triv = is_trivially_zero(word)
        zero = classical_zero(cm, word)
        if zero != triv:
            any_zero_nontrivial = True
            if len(violations) < max_violations:
                violations.append(word)
    return OrbitalScanReport(n=n, m=m, total=total,
                             passed=not any_zero_nontrivial,
                             min_nonzero=1.0, max_zero=0.0 if m > 1 else None,
                             violations=violations)
