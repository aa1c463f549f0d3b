from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from phaseinj.constructions import fixture_3x8, gaussian_random, vandermonde
from phaseinj.ensemble import Field, MeasurementEnsemble, intensity_map, super_analysis_operator
from phaseinj.errors import FieldMismatch, GuardExceeded, ShapeError, ZeroVector
from phaseinj.injectivity import (
    Verdict,
    complement_property,
    complex_injectivity,
    complex_injectivity_m2,
    full_spark,
    hmw_test,
    injectivity_bounds,
    local_injectivity_sample,
    pair_from_null_matrix,
    real_injectivity,
    singular_combination,
    witness_pair_ok,
)
from phaseinj.numerics import rank_of


def real(cols):
    return MeasurementEnsemble(np.array(cols, dtype=float).T, Field.REAL)


def cplx(cols):
    return MeasurementEnsemble(np.array(cols, dtype=complex).T, Field.COMPLEX)


E1_E2_DIAG = [(1, 0), (0, 1), (1, 1)]


def exact_det(rows):
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[Fraction(v) for v in r] for r in rows]
    n, det = len(a), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def check_witness(phi, v):
    """Witness soundness for a NotInjective verdict."""
    if v.pair is not None:
        assert witness_pair_ok(phi, *v.pair)
    if v.subset:
        a = phi.matrix
        sc = [i for i in range(phi.N) if i not in v.subset]
        assert rank_of(a[:, list(v.subset)]).rank < phi.M
        assert rank_of(a[:, sc]).rank < phi.M


def planted_degenerate(rng, m):
    """Real M x (2M-1) ensemble whose first M columns are dependent."""
    a = rng.standard_normal((m, 2 * m - 1))
    a[:, m - 1] = a[:, : m - 1] @ rng.standard_normal(m - 1)
    return MeasurementEnsemble(a, Field.REAL)


class TestComplementProperty:
    def test_three_vectors_in_plane(self):
        assert complement_property(real(E1_E2_DIAG)) == (True, None)

    def test_basis_fails_at_first_singleton(self):
        assert complement_property(real([(1, 0), (0, 1)])) == (False, (0,))

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_too_few_vectors(self, rng, m):
        ok, s = complement_property(MeasurementEnsemble(rng.standard_normal((m, 2 * m - 2))))
        assert not ok and s is not None

    def test_witness_is_least(self):
        # two parallel pairs: no singleton fails, S = {0, 1} does
        phi = real([(1, 0), (2, 0), (0, 1), (0, 3)])
        ok, s = complement_property(phi)
        assert not ok
        failing = []
        for k in range(1, 3):
            for t in combinations(range(4), k):
                tc = [i for i in range(4) if i not in t]
                if rank_of(phi.matrix[:, list(t)]).rank < 2 and rank_of(phi.matrix[:, tc]).rank < 2:
                    failing.append(t)
        assert s == failing[0] == (0, 1)

    def test_complex_refused(self):
        with pytest.raises(FieldMismatch):
            complement_property(cplx(E1_E2_DIAG))

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            complement_property(MeasurementEnsemble(np.ones((2, 25))))

    def test_nonspanning(self):
        assert complement_property(real([(1, 0), (2, 0), (3, 0)])) == (False, ())


class TestRealInjectivity:
    def test_injective(self):
        v = real_injectivity(real(E1_E2_DIAG))
        assert v.verdict is Verdict.INJECTIVE and v.holds

    def test_basis_pair(self):
        phi = real([(1, 0), (0, 1)])
        v = real_injectivity(phi)
        assert v.verdict is Verdict.NOT_INJECTIVE and v.subset == (0,)
        check_witness(phi, v)
        # the textbook collision
        assert np.array_equal(intensity_map(phi, [1, 1]), intensity_map(phi, [-1, 1]))

    def test_vandermonde(self):
        assert real_injectivity(vandermonde(3, [1, 2, 3, 4, 5])).holds

    def test_random_witnesses(self, rng):
        for _ in range(20):
            m = int(rng.integers(2, 5))
            n = int(rng.integers(m, 2 * m - 1))
            phi = MeasurementEnsemble(rng.standard_normal((m, n)))
            v = real_injectivity(phi)
            assert v.verdict is Verdict.NOT_INJECTIVE
            check_witness(phi, v)

    def test_lifted_span_is_whole_space(self, rng):
        phi = vandermonde(3, [1, 2, 3, 4, 5])
        assert real_injectivity(phi).holds
        a = phi.matrix
        for _ in range(20):
            u = rng.standard_normal(3)
            lifted = np.stack([a[:, n] * (a[:, n] @ u) for n in range(phi.N)], axis=1)
            assert rank_of(lifted).rank == 3


class TestFullSpark:
    def test_minors_1_2_1(self):
        phi = real([(1, 1), (1, 2), (1, 3)])
        minors = [exact_det([[1, 1], [1, 2]]), exact_det([[1, 1], [1, 3]]), exact_det([[1, 1], [2, 3]])]
        assert minors == [1, 2, 1]
        assert full_spark(phi)

    @pytest.mark.parametrize("m,n", [(2, 5), (3, 6), (4, 8)])
    def test_vandermonde(self, m, n):
        assert full_spark(vandermonde(m, list(range(1, n + 1))))

    def test_zero_column(self):
        assert not full_spark(real([(1, 0), (0, 0), (1, 1)]))

    def test_shape(self):
        with pytest.raises(ShapeError):
            full_spark(MeasurementEnsemble(np.eye(3)[:, :2]))

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            full_spark(MeasurementEnsemble(np.ones((2, 10))), guard=10)

    def test_agrees_with_exact_minors(self, rng):
        for _ in range(10):
            a = rng.integers(-2, 3, size=(3, 6))
            exact = all(exact_det(a[:, list(c)].tolist()) != 0 for c in combinations(range(6), 3))
            assert full_spark(MeasurementEnsemble(a.astype(float))) == exact

    def test_cp_iff_full_spark_at_2m_minus_1(self, rng):
        agree = 0
        for i in range(50):
            m = 2 + i % 3
            phi = planted_degenerate(rng, m) if i % 5 == 0 else MeasurementEnsemble(rng.standard_normal((m, 2 * m - 1)))
            cp, _ = complement_property(phi)
            assert cp == full_spark(phi)
            agree += 1
        assert agree == 50


class TestComplexM2:
    def test_four_vectors_injective(self):
        assert complex_injectivity_m2(cplx([(1, 0), (0, 1), (1, 1), (1, 1j)])).holds

    def test_exact_det_of_lift(self):
        # unnormalized (|a|^2, |b|^2, Re a conj b, Im a conj b) rows
        rows = [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 2, 0], [1, 1, 0, -2]]
        assert exact_det(rows) == -4

    def test_three_vectors(self):
        phi = cplx(E1_E2_DIAG)
        v = complex_injectivity_m2(phi)
        assert v.verdict is Verdict.NOT_INJECTIVE
        assert v.pair is not None and witness_pair_ok(phi, *v.pair)

    def test_repeated_column(self):
        phi = cplx([(1, 0), (1, 0), (0, 1), (1, 1)])
        v = complex_injectivity_m2(phi)
        assert v.verdict is Verdict.NOT_INJECTIVE
        assert witness_pair_ok(phi, *v.pair)

    def test_shape(self):
        with pytest.raises(ShapeError):
            complex_injectivity_m2(cplx([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))

    def test_random_transition(self):
        inj4 = sum(complex_injectivity_m2(gaussian_random("complex", 2, 4, s)).holds for s in range(100))
        inj3 = sum(complex_injectivity_m2(gaussian_random("complex", 2, 3, s)).holds for s in range(100))
        assert inj4 >= 99 and inj3 == 0


class TestHmw:
    def test_fixture(self):
        v = hmw_test(fixture_3x8())
        assert v.verdict is Verdict.INJECTIVE
        h = v.null_matrix
        assert abs(np.linalg.det(h)) > 1e-6 * np.linalg.norm(h) ** 3

    def test_real_entries_oracle(self, rng):
        for _ in range(5):
            phi = MeasurementEnsemble(rng.standard_normal((3, 8)), Field.COMPLEX)
            x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            h = np.outer(x, x.conj()) - np.outer(x.conj(), x)
            assert np.linalg.matrix_rank(h) <= 2
            sa = super_analysis_operator(phi)
            assert np.linalg.norm(sa.apply(h)) <= 1e-9 * np.linalg.norm(h)
            v = hmw_test(phi)
            assert v.verdict is Verdict.NOT_INJECTIVE
            check_witness(phi, v)

    def test_too_few(self, rng):
        phi = gaussian_random("complex", 3, 4, 1)
        v = hmw_test(phi)
        assert v.verdict is Verdict.NOT_INJECTIVE
        assert v.pair is not None and witness_pair_ok(phi, *v.pair)

    def test_shape(self):
        with pytest.raises(ShapeError):
            hmw_test(cplx([(1, 0), (0, 1), (1, 1), (1, 1j)]))

    def test_random_transition(self):
        verdicts7 = [hmw_test(gaussian_random("complex", 3, 7, s)) for s in range(100)]
        verdicts8 = [hmw_test(gaussian_random("complex", 3, 8, s)) for s in range(100)]
        assert all(v.verdict is Verdict.NOT_INJECTIVE for v in verdicts7)
        assert sum(v.holds for v in verdicts8) >= 99
        for s, v in enumerate(verdicts7):
            assert v.pair is not None and witness_pair_ok(gaussian_random("complex", 3, 7, s), *v.pair)

    def test_singular_combination(self, rng):
        for _ in range(5):
            g = rng.standard_normal((2, 3, 3)) + 1j * rng.standard_normal((2, 3, 3))
            a, b = (g[k] + g[k].conj().T for k in range(2))
            t = singular_combination(a, b)
            c = a * np.cos(t) + b * np.sin(t)
            assert 0.0 <= t <= np.pi
            s = np.linalg.svd(c, compute_uv=False)
            assert s[-1] <= 1e-9 * s[0]

    def test_pair_from_null_matrix(self):
        x0, y0 = np.array([1, 1j, 0]), np.array([1, -1j, 0])
        h = np.outer(x0, x0.conj()) - np.outer(y0, y0.conj())
        x, y = pair_from_null_matrix(h)
        d = np.outer(x, x.conj()) - np.outer(y, y.conj())
        # eigenvalues +-2 tie in modulus, so the roles of x and y may swap
        assert np.allclose(d, h) or np.allclose(d, -h)


class TestLocalSample:
    def test_fixture_rank(self, rng):
        phi = fixture_3x8()
        for _ in range(20):
            u = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            assert local_injectivity_sample(phi, u).rank == 5

    def test_single_vector(self, rng):
        phi = cplx([(1, 0)])
        assert local_injectivity_sample(phi, [1, 1j]).rank <= 1

    def test_upper_bound(self, rng):
        for _ in range(10):
            m = int(rng.integers(2, 5))
            phi = gaussian_random("complex", m, 6 * m, int(rng.integers(1000)))
            u = rng.standard_normal(m) + 1j * rng.standard_normal(m)
            assert local_injectivity_sample(phi, u).rank <= 2 * m - 1

    def test_zero(self):
        with pytest.raises(ZeroVector):
            local_injectivity_sample(cplx([(1, 0)]), [0, 0])


class TestComplexDispatch:
    def test_m4_below_bound(self):
        v = complex_injectivity(gaussian_random("complex", 4, 6, 0))
        assert v.verdict is Verdict.NOT_INJECTIVE

    def test_m4_inconclusive(self):
        assert complex_injectivity(gaussian_random("complex", 4, 12, 0)).verdict is Verdict.INCONCLUSIVE

    def test_dispatch_m3(self):
        assert complex_injectivity(fixture_3x8()).holds


class TestBounds:
    def test_complex_m4(self):
        b = injectivity_bounds("complex", 4)
        assert (b.necessary_N, b.generic_sufficient_N) == (9, 12)

    def test_complex_m5(self):
        assert injectivity_bounds("complex", 5).necessary_N == 16

    def test_real_m3(self):
        b = injectivity_bounds("real", 3)
        assert (b.necessary_N, b.generic_sufficient_N) == (5, 5)

    def test_necessary_below_sufficient(self):
        for m in range(2, 40):
            for f in ("real", "complex"):
                b = injectivity_bounds(f, m)
                assert b.necessary_N <= b.generic_sufficient_N

    def test_small_m(self):
        with pytest.raises(ShapeError):
            injectivity_bounds("real", 1)


def _verdict_of(op, phi):
    v = op(phi)
    return v if isinstance(v, bool) else (v[0] if isinstance(v, tuple) else v.verdict)


class TestInvariance:
    CASES = [
        (real_injectivity, lambda: real(E1_E2_DIAG)),
        (real_injectivity, lambda: real([(1, 0), (0, 1), (1, 0), (2, 1)])),
        (lambda p: complement_property(p), lambda: real([(1, 0), (0, 1)])),
        (full_spark, lambda: real([(1, 1), (1, 2), (1, 3)])),
        (full_spark, lambda: real([(1, 1), (2, 2), (1, 3)])),
        (complex_injectivity_m2, lambda: cplx([(1, 0), (0, 1), (1, 1), (1, 1j)])),
        (complex_injectivity_m2, lambda: cplx(E1_E2_DIAG)),
        (hmw_test, fixture_3x8),
        (hmw_test, lambda: gaussian_random("complex", 3, 7, 3)),
    ]

    @pytest.mark.parametrize("op,make", CASES)
    @pytest.mark.parametrize("c", [1e-6, 1.0, 1e6])
    def test_scale(self, op, make, c):
        phi = make()
        assert _verdict_of(op, phi.scaled(c)) == _verdict_of(op, phi)

    @pytest.mark.parametrize("op,make", CASES)
    def test_permutation(self, op, make, rng):
        phi = make()
        base = _verdict_of(op, phi)
        for _ in range(3):
            assert _verdict_of(op, phi.permuted(rng.permutation(phi.N))) == base

    def test_scaled_witness_collides(self):
        phi = gaussian_random("complex", 3, 7, 0).scaled(1e6)
        v = hmw_test(phi)
        assert witness_pair_ok(phi, *v.pair)
