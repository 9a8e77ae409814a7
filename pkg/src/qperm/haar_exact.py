"""Exact Haar-state calculus on low-degree generator words of the quantum
permutation group.

The Haar state h is tracial, invariant under the antipode
(h(u_(i1,j1)...u_(im,jm)) = h(u_(jm,im)...u_(j1,i1))) and invariant under
independent relabelings of rows and columns.  Consequently the value of h on
a reduced word of degree <= 4 depends only on the orbit of the word under
cyclic rotation, antipode flip and relabeling.  Up to degree 4 the orbits of
nonvanishing words are represented by

    d1 = u11,  d2 = u11 u22,  d3 = u11 u22 u33,
    a1 = u11 u22 u11 u22,   a2 = u11 u22 u11 u23,  a3 = u11 u22 u11 u33,
    a4 = u11 u22 u13 u24,   a5 = u11 u22 u13 u32,  a6 = u11 u22 u13 u34,
    a7 = u11 u22 u33 u44,

and every other reduced word of degree <= 4 has h = 0 because some cyclic
rotation meets the row/column orthogonality of a magic unitary.

Degree <= 3 values follow from expanding against row sums:
h(d1) = 1/n, h(d2) = 1/(n(n-1)), h(d3) = 1/(n(n-1)(n-2)).  The degree-4
values are pinned by six independent row/column completion identities plus
the fourth moment of the main character fix = sum_i u_ii being the Catalan
number C4 = 14.  With r(n) = n(n-1)(n^2 - 3n + 1) the solution is

    a1 = (2n-5)/r(n)            a5 = -(n-3)/((n-2) r(n))
    a2 = (n-3)/r(n)             a6 = 1/((n-2) r(n))
    a3 = (n-2)/r(n)             a7 = n/((n-2) r(n))
    a4 = -1/r(n)

``solve_degree4_system`` re-derives this table at any n by assembling the
completion identities (classifying every expansion term with the module's own
canonicalizer), row-reducing over exact rationals with a4 as the free
parameter, and pinning a4 with the moment identity.  All arithmetic is exact
(``fractions.Fraction``); floats never enter this module.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DegreeTooHigh, DimensionTooLarge, DimensionTooSmall,
                     EmptyMonomial, NotClassifiable)
from .flat_model import (Monomial, is_trivially_zero, reduce_monomial,
                         validate_monomial)

ZERO = "zero"
DEGREE_CLASS_TAGS = {1: ("d1",), 2: ("d2",), 3: ("d3",),
                     4: ("a1", "a2", "a3", "a4", "a5", "a6", "a7")}
CLASS_TAGS = ("d1", "d2", "d3", "a1", "a2", "a3", "a4", "a5", "a6", "a7")

REPRESENTATIVES: dict[str, Monomial] = {
    "d1": ((1, 1),),
    "d2": ((1, 1), (2, 2)),
    "d3": ((1, 1), (2, 2), (3, 3)),
    "a1": ((1, 1), (2, 2), (1, 1), (2, 2)),
    "a2": ((1, 1), (2, 2), (1, 1), (2, 3)),
    "a3": ((1, 1), (2, 2), (1, 1), (3, 3)),
    "a4": ((1, 1), (2, 2), (1, 3), (2, 4)),
    "a5": ((1, 1), (2, 2), (1, 3), (3, 2)),
    "a6": ((1, 1), (2, 2), (1, 3), (3, 4)),
    "a7": ((1, 1), (2, 2), (3, 3), (4, 4)),
}


class BoundaryDimensionWarning(UserWarning):
    """Degree-4 evaluation at n = 4: outside the n >= 5 range of the bounds."""


# --- orbit machinery ---------------------------------------------------------

def dense_relabel(word: Monomial) -> Monomial:
    """Relabel rows and columns independently in order of first occurrence.

    This is the lexicographically smallest relabeling, so minimizing the
    result over rotations and the antipode flip gives a canonical orbit form.
    """
    rmap: dict[int, int] = {}
    cmap: dict[int, int] = {}
    out = []
    for i, j in word:
        out.append((rmap.setdefault(i, len(rmap) + 1),
                    cmap.setdefault(j, len(cmap) + 1)))
    return tuple(out)


def antipode(word: Monomial) -> Monomial:
    """Reverse the word and swap row with column in every factor."""
    return tuple((j, i) for i, j in reversed(word))


def rotations(word: Monomial):
    for r in range(len(word)):
        yield word[r:] + word[:r]


def cyclic_reduce(word: Monomial) -> Monomial | None:
    """Reduce a word as a cyclic word (traciality): collapse adjacent equal
    factors including across the wrap, and return None when any adjacency
    shares exactly one of row/column."""
    w = reduce_monomial(word)
    while True:
        if w is None:
            return None
        if len(w) <= 1:
            return w
        (i1, j1), (im, jm) = w[0], w[-1]
        if w[0] == w[-1]:
            w = reduce_monomial(w[:-1])
            continue
        if (i1 == im) != (j1 == jm):
            return None
        return w


def canonical_form(word: Monomial) -> Monomial:
    """Minimum of dense relabelings over all rotations and the antipode flip.

    The input must be cyclically reduced; the output identifies the orbit of
    the word under every Haar-state invariance."""
    candidates = []
    for flipped in (word, antipode(word)):
        for rot in rotations(flipped):
            candidates.append(dense_relabel(rot))
    return min(candidates)


_CANON_TO_TAG = {canonical_form(rep): tag for tag, rep in REPRESENTATIVES.items()}
assert len(_CANON_TO_TAG) == len(REPRESENTATIVES), "class orbits must be disjoint"


@dataclass(frozen=True)
class MonomialClass:
    tag: str                      # ZERO or one of CLASS_TAGS
    representative: Monomial      # fixed representative ((),) for ZERO: empty

    @property
    def is_zero(self) -> bool:
        return self.tag == ZERO


_ZERO_CLASS = MonomialClass(tag=ZERO, representative=())


def canonicalize(mono: Monomial, n: int) -> MonomialClass:
    """Class of a generator word under all Haar-state invariances.

    Returns the ZERO class when the word vanishes as a cyclic word (two
    factors sharing exactly one of row/column become adjacent under some
    rotation), otherwise the unique tag whose representative shares the
    word's orbit.  Words whose reduced degree exceeds 4 raise DegreeTooHigh.
    """
    if not mono:
        raise EmptyMonomial("the identity word has no class tag")
    validate_monomial(mono, n)
    w = cyclic_reduce(mono)
    if w is None:
        return _ZERO_CLASS
    if len(w) > 4:
        raise DegreeTooHigh(f"reduced degree {len(w)} > 4")
    tag = _CANON_TO_TAG.get(canonical_form(w))
    if tag is None:
        raise NotClassifiable(f"word {w} matched no class orbit")
    return MonomialClass(tag=tag, representative=REPRESENTATIVES[tag])


@dataclass(frozen=True)
class LabelAction:
    """Row permutation sigma and column permutation tau acting by
    u_ij -> u_(sigma(i), tau(j));  sigma[k-1] = sigma(k)."""

    sigma: tuple[int, ...]
    tau: tuple[int, ...]

    def __post_init__(self):
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(1, n + 1)) or \
           sorted(self.tau) != list(range(1, len(self.tau) + 1)):
            raise ValueError("sigma and tau must be permutations of 1..n")

    def apply(self, mono: Monomial) -> Monomial:
        return tuple((self.sigma[i - 1], self.tau[j - 1]) for i, j in mono)


# --- exact values ------------------------------------------------------------

def degree4_denominator(n: int) -> int:
    """r(n) = n(n-1)(n^2 - 3n + 1), the common denominator of degree-4 values."""
    return n * (n - 1) * (n * n - 3 * n + 1)


def class_value(tag: str, n: int) -> Fraction:
    """Exact Haar value of a class representative at dimension n."""
    if tag == ZERO:
        return Fraction(0)
    if tag == "d1":
        return Fraction(1, n)
    if tag == "d2":
        return Fraction(1, n * (n - 1))
    if tag == "d3":
        return Fraction(1, n * (n - 1) * (n - 2))
    r = degree4_denominator(n)
    table = {
        "a1": Fraction(2 * n - 5, r),
        "a2": Fraction(n - 3, r),
        "a3": Fraction(n - 2, r),
        "a4": Fraction(-1, r),
        "a5": Fraction(-(n - 3), (n - 2) * r),
        "a6": Fraction(1, (n - 2) * r),
        "a7": Fraction(n, (n - 2) * r),
    }
    if tag not in table:
        raise KeyError(f"unknown class tag {tag!r}")
    return table[tag]


def haar_value_snplus(mono: Monomial, n: int) -> Fraction:
    """Exact Haar value of a generator word of reduced degree <= 4.

    n = 4 is allowed but sits on the boundary of the degree-4 analysis
    (the exotic bounds require n >= 5), so it emits a warning.
    """
    if n < 4:
        raise DimensionTooSmall("degree-4 Haar values need n >= 4")
    if not mono:
        return Fraction(1)
    if n == 4:
        warnings.warn(
            "n = 4 degree-4 evaluation: outside the n >= 5 bounds range; "
            "see n4_boundary_report()", BoundaryDimensionWarning, stacklevel=2)
    cls = canonicalize(mono, n)
    return class_value(cls.tag, n)


def catalan(k: int) -> int:
    """C_k by the convolution recurrence C_(k+1) = sum_i C_i C_(k-i)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    cs = [1]
    for m in range(k):
        cs.append(sum(cs[i] * cs[m - i] for i in range(m + 1)))
    return cs[k]


# --- the degree-4 linear system ----------------------------------------------

# Completion identities h(w * sum_k u_(row,k)) = h(w), resp. sum_k u_(k,col):
# each expands into class multiples because the appended factor either reuses
# a symbol of w or introduces a fresh one.
_EXPANSIONS = (
    (((1, 1), (2, 2), (1, 1)), "row", 2),
    (((1, 1), (2, 2), (1, 1)), "row", 3),
    (((1, 1), (2, 2), (1, 3)), "row", 2),
    (((1, 1), (2, 2), (1, 3)), "col", 2),
    (((1, 1), (2, 2), (1, 3)), "row", 3),
    (((1, 1), (2, 2), (3, 3)), "row", 4),
)

_A_TAGS = DEGREE_CLASS_TAGS[4]


def _degree_le3_value(word: Monomial, n: int) -> Fraction:
    cls = canonicalize(word, n)
    if cls.tag in _A_TAGS:
        raise ValueError("expected a word of reduced degree <= 3")
    return class_value(cls.tag, n)


def assemble_expansion_equations(n: int) -> list[tuple[dict[str, Fraction], Fraction]]:
    """The six completion identities as equations sum_tag coeff*alpha_tag = rhs.

    Every expansion term is classified by ``canonicalize``; terms of reduced
    degree <= 3 move into the right-hand side with their exact values."""
    equations = []
    for base, mode, fixed in _EXPANSIONS:
        symbols = {j for _, j in base} if mode == "row" else {i for i, _ in base}
        fresh = min(set(range(1, len(symbols) + 2)) - symbols)
        coeffs: dict[str, Fraction] = {}
        rhs = _degree_le3_value(base, n)
        for k, mult in [(s, 1) for s in sorted(symbols)] + [(fresh, n - len(symbols))]:
            if mult == 0:
                continue
            pair = (fixed, k) if mode == "row" else (k, fixed)
            cls = canonicalize(base + (pair,), n)
            if cls.tag == ZERO:
                continue
            if cls.tag in _A_TAGS:
                coeffs[cls.tag] = coeffs.get(cls.tag, Fraction(0)) + mult
            else:
                rhs -= mult * class_value(cls.tag, n)
        equations.append((coeffs, rhs))
    return equations


@dataclass(frozen=True)
class Degree4Solution:
    """Affine solution alpha_tag = const + slope * alpha4, plus the pinned
    alpha4 and the resulting exact value table."""

    n: int
    affine: dict[str, tuple[Fraction, Fraction]]   # tag -> (const, slope)
    alpha4: Fraction
    table: dict[str, Fraction]                     # all seven tags

    def evaluate(self, alpha4: Fraction) -> dict[str, Fraction]:
        out = {tag: c + s * alpha4 for tag, (c, s) in self.affine.items()}
        out["a4"] = alpha4
        return out


def _row_reduce_affine(equations, n: int) -> dict[str, tuple[Fraction, Fraction]]:
    """Gaussian elimination over Fraction, a4 as the free parameter.

    Unknown order (a1, a2, a3, a5, a6, a7); each augmented row carries two
    right-hand sides: the constant part and the coefficient of -a4.
    """
    unknowns = ("a1", "a2", "a3", "a5", "a6", "a7")
    rows = []
    for coeffs, rhs in equations:
        row = [Fraction(coeffs.get(t, 0)) for t in unknowns]
        row.append(rhs)                                  # constant rhs
        row.append(-Fraction(coeffs.get("a4", 0)))       # coefficient of a4
        rows.append(row)
    ncols = len(unknowns)
    pivot_rows = []
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(rows)) if rows[k][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivot_rows.append(c)
        r += 1
    if r != ncols:
        raise ValueError(f"completion system has rank {r}, expected {ncols} at n={n}")
    affine = {}
    for idx, c in enumerate(pivot_rows):
        affine[unknowns[c]] = (rows[idx][ncols], rows[idx][ncols + 1])
    affine["a4"] = (Fraction(0), Fraction(1))
    return affine


def _dense_patterns(k: int, distinct_only_pairs: bool):
    """Dense tuples (first occurrences 1, 2, ...) of length k; optionally
    restricted to t1 != t2 and t3 != t4 (the double-sum constraint)."""
    out = []
    for tup in itertools.product(range(1, k + 1), repeat=k):
        seen: dict[int, int] = {}
        dense = tuple(seen.setdefault(v, len(seen) + 1) for v in tup)
        if dense != tup:
            continue
        if distinct_only_pairs and (tup[0] == tup[1] or tup[2] == tup[3]):
            continue
        out.append(tup)
    return out


def _falling(n: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= n - t
    return out


def _affine_moment_sum(affine, n: int, k: int, distinct_only_pairs: bool):
    """sum over diagonal index tuples of h(u_(t,t) products) as an affine
    function (const, slope) of a4, by dense-pattern counting."""
    const = Fraction(0)
    slope = Fraction(0)
    for pattern in _dense_patterns(k, distinct_only_pairs):
        word = tuple((t, t) for t in pattern)
        cls = canonicalize(word, max(4, k))
        mult = _falling(n, len(set(pattern)))
        if cls.tag == ZERO:
            continue
        if cls.tag in _A_TAGS:
            c, s = affine[cls.tag]
            const += mult * c
            slope += mult * s
        else:
            const += mult * class_value(cls.tag, n)
    return const, slope


def solve_degree4_system(n: int) -> Degree4Solution:
    """Assemble the six completion identities, row-reduce them exactly with
    a4 as the parameter, and pin a4 by h(fix^4) = C4.

    n = 4 is allowed for diagnostics but flagged; the bounds need n >= 5.
    """
    if n < 4:
        raise DimensionTooSmall("the degree-4 system needs n >= 4")
    if n == 4:
        warnings.warn("solving the degree-4 system at the n = 4 boundary",
                      BoundaryDimensionWarning, stacklevel=2)
    equations = assemble_expansion_equations(n)
    affine = _row_reduce_affine(equations, n)
    const, slope = _affine_moment_sum(affine, n, 4, distinct_only_pairs=False)
    if slope == 0:
        raise ValueError("moment identity does not determine a4")
    alpha4 = (Fraction(catalan(4)) - const) / slope
    table = {tag: c + s * alpha4 for tag, (c, s) in affine.items()}
    return Degree4Solution(n=n, affine=affine, alpha4=alpha4, table=table)


# --- bounds ------------------------------------------------------------------

@dataclass(frozen=True)
class BoundsTable:
    """Open intervals (lower, upper) for the seven degree-4 classes."""

    n: int
    intervals: dict[str, tuple[Fraction, Fraction]]

    def contains(self, tag: str, value: Fraction) -> bool:
        lo, hi = self.intervals[tag]
        return lo < value < hi


def exotic_bounds(n: int) -> BoundsTable:
    """Bounds valid for any quantum permutation group with free three-orbitals.

    Positivity of a1 = h(|u22 u11 u22|^2) and a2 = h(|u22 u11 u23|^2) confines
    the parameter to a4 in (-(n-4)!/n!, 0); pushing the window through the
    affine solution bounds every class.  Requires n >= 5 (the window collapses
    against the n = 4 boundary).
    """
    if n < 5:
        raise DimensionTooSmall("exotic bounds need n >= 5")
    affine = _row_reduce_affine(assemble_expansion_equations(n), n)
    window = (Fraction(-1, n * (n - 1) * (n - 2) * (n - 3)), Fraction(0))
    intervals = {}
    for tag in _A_TAGS:
        c, s = affine[tag]
        lo, hi = sorted((c + s * window[0], c + s * window[1]))
        intervals[tag] = (lo, hi)
    return BoundsTable(n=n, intervals=intervals)


def fix4_exotic_bound(n: int) -> Fraction:
    """Best upper bound on h(fix^4) from the degree-4 bounds alone.

    Degree <= 3 classes enter with exact values, degree-4 classes with the
    upper endpoints of their intervals; the result is a strict bound.
    """
    bounds = exotic_bounds(n)
    total = Fraction(0)
    for pattern in _dense_patterns(4, distinct_only_pairs=False):
        word = tuple((t, t) for t in pattern)
        cls = canonicalize(word, 4)
        mult = _falling(n, len(set(pattern)))
        if cls.tag == ZERO:
            continue
        if cls.tag in _A_TAGS:
            total += mult * bounds.intervals[cls.tag][1]
        else:
            total += mult * class_value(cls.tag, n)
    return total


# --- moments -----------------------------------------------------------------

def fix_moment(n: int, k: int) -> Fraction:
    """h(fix^k) by literal enumeration of all n^k diagonal index tuples,
    each reduced, classified and summed with its exact class value."""
    if k > 4:
        raise DegreeTooHigh("moments available for k <= 4")
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return Fraction(1)
    if n == 4:
        warnings.warn("fix moments at the n = 4 boundary",
                      BoundaryDimensionWarning, stacklevel=2)
    elif n < 4:
        raise DimensionTooSmall("fix moments need n >= 4")
    cache: dict[Monomial, Fraction] = {}
    total = Fraction(0)
    for tup in itertools.product(range(1, n + 1), repeat=k):
        seen: dict[int, int] = {}
        dense = tuple(seen.setdefault(v, len(seen) + 1) for v in tup)
        word = tuple((t, t) for t in dense)
        if word not in cache:
            cls = canonicalize(word, max(4, n))
            cache[word] = class_value(cls.tag, n)
        total += cache[word]
    return total


def fix_moment_by_class_count(n: int, k: int) -> Fraction:
    """h(fix^k) by dense-pattern counting (equivalent to ``fix_moment`` but
    O(1) in n), used for sweeps over large n."""
    if k > 4:
        raise DegreeTooHigh("moments available for k <= 4")
    total = Fraction(0)
    for pattern in _dense_patterns(k, distinct_only_pairs=False):
        word = tuple((t, t) for t in pattern)
        cls = canonicalize(word, max(4, k))
        total += _falling(n, len(set(pattern))) * class_value(cls.tag, n)
    return total


def double_sum_identity(n: int) -> Fraction:
    """sum_(i != j) sum_(k != l) h(u_ii u_jj u_kk u_ll), exactly."""
    total = Fraction(0)
    for pattern in _dense_patterns(4, distinct_only_pairs=True):
        word = tuple((t, t) for t in pattern)
        cls = canonicalize(word, 4)
        total += _falling(n, len(set(pattern))) * class_value(cls.tag, n)
    return total


# --- classical oracle --------------------------------------------------------

_PERM_TABLE: dict[int, "np.ndarray"] = {}


def brute_force_classical_haar(n: int, mono: Monomial) -> Fraction:
    """Uniform average over S_n of the indicator product: the fraction of
    permutations with sigma(j_t) = i_t for every factor.

    The full permutation table is enumerated once per n and the constraints
    are checked against every row; the count stays exact."""
    import numpy as np
    if n > 8:
        raise DimensionTooLarge("classical oracle capped at n <= 8")
    validate_monomial(mono, n)
    perms = _PERM_TABLE.get(n)
    if perms is None:
        perms = np.array(list(itertools.permutations(range(1, n + 1))),
                         dtype=np.int8)
        _PERM_TABLE[n] = perms
    mask = np.ones(len(perms), dtype=bool)
    for i, j in mono:
        mask &= perms[:, j - 1] == i
    return Fraction(int(mask.sum()), math.factorial(n))


# --- n = 4 boundary diagnostic -------------------------------------------------

@dataclass(frozen=True)
class BoundaryReport:
    """Side-by-side degree-4 data at n = 4.

    ``formula_value`` is h(u11 u22 u11 u22) from the solved system;
    ``model_trace`` is tr(v11 v22 v11 v22) in the explicit 4x4 rank-one model,
    computed in exact rational arithmetic.  ``consistent`` records whether
    both are strictly positive, as the model forces for a faithful-on-trace
    state family."""

    formula_value: Fraction
    model_trace: Fraction
    consistent: bool


def n4_boundary_report() -> BoundaryReport:
    from . import magic_bases
    basis = magic_bases.build_pauli_basis_4()

    def exact_gram(a, b):
        va = basis.exact_vector(*a)
        vb = basis.exact_vector(*b)
        return sum(x * y for x, y in zip(va, vb))

    word = REPRESENTATIVES["a1"]
    coeff = Fraction(1)
    for a, b in zip(word, word[1:]):
        coeff *= exact_gram(a, b)
    trace = coeff * exact_gram(word[-1], word[0])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryDimensionWarning)
        formula = solve_degree4_system(4).table["a1"]
    return BoundaryReport(formula_value=formula, model_trace=trace,
                          consistent=formula > 0 and trace > 0)


# --- serialization -----------------------------------------------------------

_FORMULA_STRINGS = {
    "a1": "(2n-5)/r(n)",
    "a2": "(n-3)/r(n)",
    "a3": "(n-2)/r(n)",
    "a4": "-1/r(n)",
    "a5": "-(n-3)/((n-2) r(n))",
    "a6": "1/((n-2) r(n))",
    "a7": "n/((n-2) r(n))",
}


def haar_table_dict(n: int) -> dict:
    """CLI-facing dump: class -> formula string, exact value, open bounds."""
    bounds = exotic_bounds(n) if n >= 5 else None
    out = {"n": n, "denominator_r": degree4_denominator(n), "classes": {}}
    for tag in _A_TAGS:
        val = class_value(tag, n)
        entry = {
            "representative": ",".join(f"{i}:{j}" for i, j in REPRESENTATIVES[tag]),
            "formula": _FORMULA_STRINGS[tag] + " with r(n) = n(n-1)(n^2-3n+1)",
            "value": [val.numerator, val.denominator],
        }
        if bounds is not None:
            lo, hi = bounds.intervals[tag]
            entry["bounds"] = [[lo.numerator, lo.denominator],
                               [hi.numerator, hi.denominator]]
        out["classes"][tag] = entry
    return out
