import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from qperm import flat_model as fm
from qperm import magic_bases as mb
from qperm.errors import (BudgetExceeded, DimensionTooLarge, EmptyMonomial,
                          NotMagic)


@pytest.fixture(scope="module")
def model4():
    return fm.model_from_basis(mb.build_pauli_basis_4())


@pytest.fixture(scope="module")
def model5():
    return fm.model_from_basis(mb.build_fourier_basis(5))


class TestMonomialText:
    def test_parse_format_round_trip(self):
        mono = ((1, 3), (2, 2), (1, 1))
        assert fm.parse_monomial("1:3,2:2,1:1") == mono
        assert fm.format_monomial(mono) == "1:3,2:2,1:1"

    def test_empty_is_identity(self):
        assert fm.parse_monomial("") == ()

    def test_bad_item(self):
        with pytest.raises(ValueError):
            fm.parse_monomial("1:1,22")


class TestWordCombinatorics:
    def test_trivially_zero(self):
        assert not fm.is_trivially_zero(((1, 3), (2, 2), (1, 1)))
        assert fm.is_trivially_zero(((1, 1), (1, 2)))
        assert not fm.is_trivially_zero(((1, 1), (1, 1)))

    def test_reduce_collapses_adjacent_equal(self):
        assert fm.reduce_monomial(((1, 1), (1, 1), (2, 2))) == ((1, 1), (2, 2))

    def test_reduce_detects_clash(self):
        assert fm.reduce_monomial(((1, 1), (1, 2))) is None
        # a collapse can expose a clash
        assert fm.reduce_monomial(((1, 1), (2, 2), (2, 2), (2, 3))) is None

    def test_reduce_keeps_separated_repeat(self):
        word = ((1, 1), (2, 2), (1, 1))
        assert fm.reduce_monomial(word) == word

    def test_reduce_idempotent(self):
        rng = random.Random(7)
        for _ in range(300):
            word = tuple((rng.randint(1, 4), rng.randint(1, 4))
                         for _ in range(rng.randint(0, 6)))
            once = fm.reduce_monomial(word)
            if once is not None:
                assert fm.reduce_monomial(once) == once


class TestModelConstruction:
    def test_magic_law(self, model4, model5):
        assert fm.magic_law_residual(model4) < 1e-12
        assert fm.magic_law_residual(model5) < 1e-11

    def test_rejects_non_magic(self):
        xi = mb.build_fourier_basis(5).xi.copy()
        xi[0, 0] = xi[0, 1]
        with pytest.raises(NotMagic):
            fm.model_from_basis(mb.MagicBasis(n=5, xi=xi, kind="custom"))

    def test_projections_are_projections(self, model5):
        for i, j in [(1, 1), (2, 4), (5, 3)]:
            p = model5.projection(i, j)
            assert np.abs(p @ p - p).max() < 1e-12
            assert np.abs(p - p.conj().T).max() < 1e-12


class TestMonomialValue:
    def test_single_gram_factor(self, model4):
        val = fm.monomial_value(model4, ((1, 1), (2, 2)))
        assert abs(val.coefficient - 1 / 3) < 1e-14
        assert val.ket_index == (1, 1) and val.bra_index == (2, 2)

    def test_row_clash_vanishes(self, model4):
        val = fm.monomial_value(model4, ((1, 1), (1, 2)))
        assert abs(val.coefficient) < 1e-14

    def test_alternating_word(self, model4):
        val = fm.monomial_value(model4, ((1, 1), (2, 2), (1, 1), (2, 2)))
        assert abs(abs(val.coefficient) - (1 / 3) ** 3) < 1e-14
        assert abs(val.trace(model4) - (1 / 3) ** 4) < 1e-14

    def test_empty_rejected(self, model4):
        with pytest.raises(EmptyMonomial):
            fm.monomial_value(model4, ())

    @pytest.mark.parametrize("n", [4, 5])
    def test_closed_form_matches_literal_product(self, n):
        model = fm.model_from_basis(
            mb.build_pauli_basis_4() if n == 4 else mb.build_fourier_basis(n))
        rng = random.Random(20240 + n)
        for _ in range(250):
            m = rng.randint(1, 6)
            mono = tuple((rng.randint(1, n), rng.randint(1, n)) for _ in range(m))
            literal = model.projection(*mono[0])
            for pair in mono[1:]:
                literal = literal @ model.projection(*pair)
            assert np.abs(fm.monomial_value(model, mono).matrix(model)
                          - literal).max() < 1e-10


class TestOrbitalRelation:
    def test_degree_one_full(self, model5):
        for i, j in itertools.product(range(1, 6), repeat=2):
            assert fm.orbital_related(model5, (i,), (j,))

    def test_degree_three_example(self, model5):
        assert fm.orbital_related(model5, (1, 2, 1), (3, 2, 1))

    def test_consecutive_same_row(self, model5):
        assert not fm.orbital_related(model5, (1, 1), (2, 3))

    @pytest.mark.parametrize("m", [1, 2])
    def test_reflexive_and_symmetric(self, model5, m):
        n = model5.n
        for itup in itertools.product(range(1, n + 1), repeat=m):
            assert fm.orbital_related(model5, itup, itup)
        for itup in itertools.product(range(1, n + 1), repeat=m):
            for jtup in itertools.product(range(1, n + 1), repeat=m):
                assert fm.orbital_related(model5, itup, jtup) == \
                    fm.orbital_related(model5, jtup, itup)


class TestFreeOrbitalScan:
    @pytest.mark.parametrize("n,m", [(4, 1), (4, 2), (4, 3), (4, 4), (5, 2), (5, 3)])
    def test_scans_pass(self, n, m):
        model = fm.model_from_basis(
            mb.build_pauli_basis_4() if n == 4 else mb.build_fourier_basis(n))
        report = fm.check_free_orbitals(model, m)
        assert report.passed
        assert report.total == n ** (2 * m)
        if m > 1:
            assert report.min_nonzero > 1e-9
            assert report.max_zero <= 1e-12

    def test_zero_set_is_exactly_the_clashes(self, model5):
        # independent brute force at m = 2
        report = fm.check_free_orbitals(model5, 2)
        assert report.passed
        for p1 in itertools.product(range(1, 6), repeat=2):
            for p2 in itertools.product(range(1, 6), repeat=2):
                mono = (p1, p2)
                coeff = fm.monomial_value(model5, mono).coefficient
                assert (abs(coeff) <= 1e-12) == fm.is_trivially_zero(mono)

    def test_budget(self, model5):
        with pytest.raises(BudgetExceeded):
            fm.check_free_orbitals(model5, 5, budget=10 ** 6)

    def test_violation_witnesses_decode_correctly(self, model4):
        # an absurd zero threshold flags clash-free words; the reported
        # witnesses must actually be clash-free words of small coefficient
        report = fm.check_free_orbitals(model4, 3, tol_zero=0.2,
                                        max_violations=16)
        assert not report.passed
        assert report.violations
        for word in report.violations:
            assert len(word) == 3
            assert not fm.is_trivially_zero(word)
            coeff = fm.monomial_value(model4, word).coefficient
            assert abs(coeff) <= 0.2

    def test_report_json_shape(self, model4):
        data = fm.check_free_orbitals(model4, 2).to_dict()
        assert data["pass"] is True
        assert set(data) >= {"pass", "gap_min_nonzero", "gap_max_zero", "violations"}


class TestCommutationPattern:
    @pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
    def test_pattern_matches_expectation(self, n):
        model = fm.model_from_basis(
            mb.build_pauli_basis_4() if n == 4 else mb.build_fourier_basis(n))
        got = fm.commutation_pattern(model)
        assert np.array_equal(got, fm.expected_commutation_pattern(n))

    def test_norm_formula_against_literal(self, model4):
        n = 4
        pattern = fm.commutation_pattern(model4)
        for i, j, k, l in itertools.product(range(1, 5), repeat=4):
            a = model4.projection(i, j)
            b = model4.projection(k, l)
            comm = np.abs(a @ b - b @ a).max()
            expected = pattern[(i - 1) * n + (j - 1), (k - 1) * n + (l - 1)]
            assert (comm < 1e-10) == expected

    def test_examples(self, model4):
        n = 4
        pat = fm.commutation_pattern(model4)

        def at(a, b):
            return pat[(a[0] - 1) * n + a[1] - 1, (b[0] - 1) * n + b[1] - 1]

        assert at((1, 1), (1, 2))       # same row: orthogonal, commute
        assert at((1, 1), (1, 1))
        assert not at((1, 1), (2, 2))   # |<xi11, xi22>| = 1/3 strictly inside (0,1)


class TestClassicalModel:
    def test_cap(self):
        with pytest.raises(DimensionTooLarge):
            fm.classical_model(9)

    def test_counts(self):
        assert len(fm.classical_model(5).permutations) == 120

    def test_classical_zero_examples(self):
        cm = fm.classical_model(4)
        assert fm.classical_zero(cm, ((3, 1), (2, 2), (1, 1)))
        assert not fm.classical_zero(cm, ((1, 1), (2, 2)))
        assert not fm.classical_zero(cm, ((1, 2),))

    @pytest.mark.parametrize("n", [4, 5])
    def test_low_orbitals_free_but_not_three(self, n):
        cm = fm.classical_model(n)
        assert fm.check_free_orbitals_classical(cm, 1).passed
        assert fm.check_free_orbitals_classical(cm, 2).passed
        report = fm.check_free_orbitals_classical(cm, 3)
        assert not report.passed

    def test_paper_witness_word(self):
        cm = fm.classical_model(4)
        witness = fm.parse_monomial("1:3,2:2,1:1")
        assert fm.classical_zero(cm, witness)
        assert not fm.is_trivially_zero(witness)
