import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sidonlab.duality import (
    DiscreteMeasure,
    DualFunctional,
    InconsistentFunctional,
    NormBracket,
    NormComputationError,
    aligned_phases,
    apply,
    canonical_sign_patterns,
    lift_to_roots,
    measure_upper_bound,
    norm_bracket,
    real_unconditional_constant,
    reduced_patterns_0123,
    sidon_constant_bracket,
    sign_orbit,
    verify_representation,
)
from sidonlab.extremal_family import family_coefficients
from sidonlab.trigpoly import FrequencySet, TrigPolynomial, moduli_sum

from strategies import polynomials

FLAGSHIP = TrigPolynomial.from_coefficients(range(4), [-4 / 15, 2 / 5, 1 / 5, 2 / 15])
S0123 = FrequencySet((0, 1, 2, 3))


def ell(*values, freqs=None):
    freqs = tuple(range(len(values))) if freqs is None else freqs
    return DualFunctional.of(freqs, values)


class TestApply:
    def test_ones_is_evaluation_at_one(self):
        for tau in (0.0, 1.0):
            p = family_coefficients(tau)
            assert apply(ell(1, 1, 1, 1), p) == pytest.approx(complex(p(0.0)), abs=1e-15)

    def test_flagship_alignment(self):
        # 4/15 + 2/5 + 1/5 + 2/15 = 1
        assert apply(ell(-1, 1, 1, 1), FLAGSHIP) == pytest.approx(1, abs=1e-15)

    def test_rejects_mismatch(self):
        with pytest.raises(ValueError):
            apply(ell(1, 1), FLAGSHIP)

    @given(polynomials())
    def test_phase_alignment_gives_moduli_sum(self, p):
        c = p.coefficients
        u = np.where(np.abs(c) > 0, np.exp(-1j * np.angle(c)), 1)
        assert apply(DualFunctional(p.support, u), p) == pytest.approx(moduli_sum(p), abs=1e-12)

    @given(polynomials(), st.lists(st.floats(-3, 3), min_size=9, max_size=9))
    def test_holder(self, p, vals):
        v = np.asarray(vals[: len(p.support)])
        l = DualFunctional(p.support, v)
        assert abs(apply(l, p)) <= moduli_sum(p) * np.abs(v).max() + 1e-12


class TestLift:
    def test_ones_is_dirac(self):
        mu = lift_to_roots(ell(1, 1, 1, 1), 3)
        np.testing.assert_allclose(mu.weights, [1, 0, 0], atol=1e-15)

    @pytest.mark.parametrize("classes", [(1, -1, -1), (1, -1, 1), (1, 1, -1)])
    def test_sign_cases_total_variation(self, classes):
        l = ell(*classes, classes[0])
        mu = lift_to_roots(l, 3)
        assert mu.total_variation == pytest.approx(5 / 3, abs=1e-12)
        assert verify_representation(mu, l)

    def test_moduli_for_first_case(self):
        mu = lift_to_roots(ell(1, -1, -1, 1), 3)
        np.testing.assert_allclose(np.abs(mu.weights), [1 / 3, 2 / 3, 2 / 3], atol=1e-15)

    def test_inconsistent_reports_pair(self):
        with pytest.raises(InconsistentFunctional) as err:
            lift_to_roots(ell(1, -1, -1, -1), 3)
        assert err.value.pair == (0, 3)

    def test_absent_classes_get_zero(self):
        l = ell(1, 1j, freqs=(0, 2))
        mu = lift_to_roots(l, 4)
        assert verify_representation(mu, l)
        assert np.allclose(np.fft.fft(mu.weights), [1, 0, 1j, 0])

    def test_random_consistent(self, rng):
        for _ in range(100):
            N = int(rng.integers(1, 7))
            classes = np.exp(2j * np.pi * rng.random(N))
            freqs = sorted(set(rng.integers(0, 3 * N, size=5).tolist()))
            l = DualFunctional.of(freqs, [classes[j % N] for j in freqs])
            assert verify_representation(lift_to_roots(l, N), l)


class TestRepresentation:
    def test_dirac(self):
        assert verify_representation(DiscreteMeasure(1, [1.0]), ell(1, 1, 1))

    def test_perturbed(self):
        l = ell(1, -1, -1, 1)
        mu = lift_to_roots(l, 3)
        w = np.array(mu.weights)
        w[1] += 1e-6
        assert not verify_representation(DiscreteMeasure(3, w), l)


class TestAlignedPhases:
    def test_positive(self):
        np.testing.assert_array_equal(aligned_phases(DiscreteMeasure(3, [1, 2, 0.5])), [1, 1, 1])

    def test_signs(self):
        u = aligned_phases(DiscreteMeasure(3, [-1 / 3, 2 / 3, 2 / 3]))
        np.testing.assert_allclose(u, [-1, 1, 1])

    def test_subnormal_weight(self):
        u = aligned_phases(DiscreteMeasure(2, [5e-324j, -1e-310]))
        np.testing.assert_allclose(u, [-1j, -1], atol=1e-15)

    def test_zero_weight(self):
        assert aligned_phases(DiscreteMeasure(2, [0, 1j]))[0] == 1

    def test_random(self, rng):
        for _ in range(20):
            mu = DiscreteMeasure(5, rng.normal(size=5) + 1j * rng.normal(size=5))
            s = np.sum(aligned_phases(mu) * mu.weights)
            assert s.real == pytest.approx(mu.total_variation, abs=1e-12)
            assert abs(s.imag) < 1e-12


class TestNormBracket:
    def test_evaluation_has_norm_one(self):
        for freqs in ((0, 1, 2, 3), (0, 2, 5)):
            br = norm_bracket(DualFunctional.of(freqs, np.ones(len(freqs))))
            assert br.contains(1.0, 1e-9) and br.width < 1e-4

    def test_flagship_pattern(self):
        br = norm_bracket(ell(1, 1, -1, 1))
        assert br.contains(5 / 3, 1e-9)
        assert br.width < 1e-3

    def test_lifting_bound_is_not_tight_everywhere(self):
        # (1,-1,-1,1) lifts to total variation 5/3 but its norm is sqrt(2)
        br = norm_bracket(ell(1, -1, -1, 1))
        assert br.contains(np.sqrt(2), 1e-9) and br.width < 1e-3
        assert lift_to_roots(ell(1, -1, -1, 1), 3).total_variation - br.upper > 0.2

    def test_random_unimodular_below_bound(self, rng):
        for _ in range(5):
            l = DualFunctional(S0123, np.exp(2j * np.pi * rng.random(4)))
            br = norm_bracket(l)
            assert br.lower <= br.upper + 1e-9
            assert br.upper <= np.sqrt(3) + 1e-6

    def test_lifting_dominates_lower(self, rng):
        for _ in range(5):
            N = 3
            classes = np.exp(2j * np.pi * rng.random(N))
            l = DualFunctional(S0123, [classes[j % N] for j in range(4)])
            assert lift_to_roots(l, N).total_variation >= norm_bracket(l).lower - 1e-6

    def test_measure_bound_rigorous(self):
        l = ell(1, 1j, -1, 0.3)
        upper, mu = measure_upper_bound(l)
        assert upper >= mu.total_variation
        assert verify_representation(mu, l, tol=1e-6)

    def test_candidates_are_used(self):
        br = norm_bracket(ell(-1, 1, 1, 1), candidates=[FLAGSHIP])
        assert br.lower >= 5 / 3 * (1 - 1e-5)

    def test_inverted_bracket_raises(self):
        with pytest.raises(NormComputationError):
            NormBracket(2.0, 1.0)

    def test_single_character(self):
        br = norm_bracket(ell(2j, freqs=(5,)))
        assert br.lower == br.upper == 2


class TestSignPatterns:
    def test_orbit(self):
        orbit = sign_orbit(S0123, (-1, 1, 1, 1))
        assert set(orbit) == {(-1, 1, 1, 1), (1, -1, -1, -1), (-1, -1, 1, -1), (1, 1, -1, 1)}

    def test_reduction_of_0123(self):
        reps = canonical_sign_patterns(S0123)
        assert len(reps) == 4
        # every orbit meets l(e_0) = l(e_3) = 1
        for r in reps:
            assert any(o[0] == o[3] == 1 for o in sign_orbit(S0123, r))
        assert sorted(reduced_patterns_0123()) == sorted(
            next(o for o in sign_orbit(S0123, r) if o[0] == o[3] == 1) for r in reps
        )


class TestUnconditional:
    def test_single(self):
        br = real_unconditional_constant(FrequencySet((0,)))
        assert br.lower == br.upper == 1

    def test_pair(self):
        br = real_unconditional_constant(FrequencySet((0, 1)))
        assert br.contains(1.0, 1e-9) and br.width < 1e-5

    def test_flagship_exact(self):
        br = real_unconditional_constant(S0123)
        assert br.lower == pytest.approx(5 / 3, abs=1e-9)
        assert br.upper == pytest.approx(5 / 3, abs=1e-9)
        for pattern, info in br.details["patterns"].items():
            if pattern != "1,1,1,1":
                assert info["lifting_total_variation"] == pytest.approx(5 / 3, abs=1e-12)

    def test_shifted_set(self):
        br = real_unconditional_constant(FrequencySet((2, 3, 4, 5)))
        assert br.lower == pytest.approx(5 / 3, abs=1e-9)
        assert br.witness.support.frequencies == (2, 3, 4, 5)

    def test_enumeration_path(self):
        br = real_unconditional_constant(FrequencySet((0, 1, 2)))
        # brute force over all four sign patterns, no symmetry reduction
        from itertools import product

        brute = max(norm_bracket(ell(*s)).lower for s in product((1, -1), repeat=3))
        assert br.lower == pytest.approx(brute, abs=1e-6)
        assert br.lower <= br.upper + 1e-9


class TestSidon:
    def test_pair(self):
        br = sidon_constant_bracket(FrequencySet((0, 1)))
        assert br.upper == 1 and br.lower == pytest.approx(1, abs=1e-5)

    def test_flagship(self):
        br = sidon_constant_bracket(S0123)
        assert br.lower >= 5 / 3 - 1e-6
        assert br.upper == np.sqrt(3)

    def test_interval_two(self):
        br = sidon_constant_bracket(FrequencySet((0, 1, 2)))
        assert br.contains(np.sqrt(2), 1e-9) and br.width < 1e-2

    def test_minimax_folded_in(self):
        br = sidon_constant_bracket(FrequencySet((0, 1)), minimax_value=1.0)
        assert br.lower == 1.0 and br.details["minimax_lower"] == 1.0
