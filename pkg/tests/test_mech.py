import numpy as np
import pytest

from conftest import away_from_band, random_circulatory, random_gyroscopic
from gramstab.core import (
    CirculatorySystem,
    Classification,
    Family,
    GyroscopicSystem,
    InputError,
    circulatory_power_sums,
    circulatory_reduced_polynomial,
    circulatory_verdicts,
    closed_forms,
    example_charged_particle,
    example_circulatory3,
    family_system,
    gyro_power_sum_identities,
    gyro_reduced_polynomial,
    gyroscopic_prop2_verdicts,
    gyroscopic_verdict_thm4,
    newton_power_sums,
    normal_form,
    prop1_verdicts,
)

J = [[0.0, 1.0], [-1.0, 0.0]]


def by_id(verdicts):
    return {v.id: v for v in verdicts}


def test_normal_form_scales_by_mass():
    form = normal_form(2 * np.eye(2), [[0.0, 2.0], [-2.0, 0.0]], 2 * np.eye(2))
    np.testing.assert_allclose(form.D, 0.0)
    np.testing.assert_allclose(form.G, J)
    np.testing.assert_allclose(form.K, np.eye(2))
    np.testing.assert_allclose(form.C, 0.0)
    assert form.classification == Classification.GYROSCOPIC_CONSERVATIVE
    assert form.as_gyroscopic().n == 2
    with pytest.raises(InputError):
        form.as_circulatory()


def test_normal_form_circulatory():
    form = normal_form(np.eye(2), np.zeros((2, 2)), J)
    np.testing.assert_allclose(form.C, J)
    assert not form.K.any()
    assert form.classification == Classification.CIRCULATORY
    np.testing.assert_allclose(form.as_circulatory().C, J)


def test_velocity_free_form_is_circulatory():
    form = normal_form(np.eye(2), np.zeros((2, 2)), np.diag([1.0, -1.0]))
    assert form.classification == Classification.GYROSCOPIC_CONSERVATIVE
    system = form.as_circulatory()
    np.testing.assert_allclose(system.K, np.diag([1.0, -1.0]))
    assert not system.C.any()
    assert form.as_gyroscopic().n == 2


@pytest.mark.parametrize(
    "A2, A3, expected",
    [
        (np.zeros((2, 2)), np.diag([1.0, 2.0]), Classification.CONSERVATIVE),
        (np.eye(2), np.diag([1.0, 2.0]), Classification.DAMPED_NON_GYROSCOPIC),
        (np.eye(2), J, Classification.CONSTRAINT_DAMPING),
        (np.eye(2) + np.array(J), np.eye(2) + np.array(J), Classification.GENERAL),
    ],
)
def test_classification(A2, A3, expected):
    assert normal_form(np.eye(2), A2, A3).classification == expected


def test_singular_mass():
    with pytest.raises(InputError):
        normal_form([[1.0, 0.0], [0.0, 0.0]], np.zeros((2, 2)), np.eye(2))


def test_asymmetric_mass():
    with pytest.raises(InputError):
        normal_form([[1.0, 1.0], [0.0, 1.0]], np.zeros((2, 2)), np.eye(2))


def test_system_inputs_validated():
    with pytest.raises(InputError):
        CirculatorySystem(K=[[1.0, 1.0], [0.0, 1.0]], C=np.zeros((2, 2)))
    with pytest.raises(InputError):
        GyroscopicSystem(G=np.zeros((3, 3)), K=np.eye(2))
    with pytest.raises(InputError):
        example_circulatory3(float("inf"), 0.0)


def test_circulatory_example_point():
    verdicts = by_id(circulatory_verdicts(example_circulatory3(0.0, 1.0)))
    assert list(verdicts) == ["thm2-i", "thm2-ii", "thm2-iii", "rmk-ii-alt", "cor-i", "cor-ii"]
    first = verdicts["thm2-i"]
    assert first.fired
    assert first.lhs == pytest.approx(0.0)
    assert first.rhs == pytest.approx(4.0)


def test_circulatory_power_sums_match_polynomial(rng):
    for _ in range(300):
        system = random_circulatory(rng, int(rng.integers(1, 7)))
        closed = circulatory_power_sums(system)
        computed = newton_power_sums(circulatory_reduced_polynomial(system), 4)
        for k in range(1, 5):
            assert closed.s(k) == pytest.approx(computed.s(k), rel=1e-9, abs=1e-9)


def test_remark_form_equals_second_criterion(rng):
    for _ in range(10_000):
        verdicts = by_id(circulatory_verdicts(random_circulatory(rng, int(rng.integers(2, 7)))))
        second, remark = verdicts["thm2-ii"], verdicts["rmk-ii-alt"]
        if away_from_band(second, remark):
            assert second.fired == remark.fired


def test_corollaries_imply_theorem(rng):
    for _ in range(2000):
        verdicts = by_id(circulatory_verdicts(random_circulatory(rng, int(rng.integers(2, 7)))))
        if verdicts["cor-i"].fired and away_from_band(verdicts["cor-i"]):
            assert verdicts["thm2-i"].fired
        if verdicts["cor-ii"].fired and away_from_band(verdicts["cor-ii"]):
            assert verdicts["thm2-ii"].fired


def test_circulatory_closed_forms(rng):
    forms = closed_forms(Family.CIRCULATORY3)
    for k, c in rng.uniform(-3, 3, (2000, 2)):
        verdicts = by_id(circulatory_verdicts(example_circulatory3(k, c)))
        for name in ("thm2-i", "thm2-ii", "thm2-iii"):
            value = forms[name](k, c)
            if abs(value) > 1e-6:
                assert verdicts[name].fired == (value > 0), (name, k, c)


@pytest.mark.parametrize(
    "g, expected",
    [
        (0.0, False),
        (0.5, True),
        (1.0, True),
        (1.5, True),
        (1.9, True),
        (1.999, True),
        (2.0, False),
        (2.001, False),
        (2.1, False),
        (3.0, False),
    ],
)
def test_two_dimensional_gyroscopic(g, expected):
    for sign in (1.0, -1.0):
        G = sign * g * np.array(J)
        verdict = gyroscopic_verdict_thm4(GyroscopicSystem(G=G, K=-np.eye(2)))
        assert verdict.fired is expected
        assert verdict.margin == pytest.approx(4 * g**2 * (4 - g**2), abs=1e-9)


def test_gyroscopic_hand_values():
    assert gyro_power_sum_identities(example_charged_particle(-1.0, 1.0)).s2_p == pytest.approx(
        0.0, abs=1e-12
    )
    sums = gyro_power_sum_identities(GyroscopicSystem(G=J, K=-np.eye(2)))
    assert sums.s2_p == pytest.approx(2.0)
    assert sums.s4_p == pytest.approx(-2.0)
    assert sums.s2_q == pytest.approx(-1.0)


def test_thm4_equals_first_criterion_on_reduced_polynomial(rng):
    for _ in range(1000):
        system = random_gyroscopic(rng, int(rng.integers(2, 7)))
        thm4 = gyroscopic_verdict_thm4(system)
        first = prop1_verdicts(newton_power_sums(gyro_reduced_polynomial(system), 4))[0]
        if away_from_band(thm4, first):
            assert thm4.fired == first.fired


def test_gyroscopic_identities(rng):
    for _ in range(200):
        system = random_gyroscopic(rng, int(rng.integers(1, 7)))
        sums = gyro_power_sum_identities(system)
        assert sums.s1_q == pytest.approx(sums.s2_p / 2)
        assert sums.s2_q == pytest.approx(sums.s4_p / 2)


def test_charged_particle_reduced_polynomial(rng):
    for k, c in rng.uniform(-3, 3, (100, 2)):
        reduced = gyro_reduced_polynomial(example_charged_particle(k, c))
        expected = (c**2 + k, -(k**2), -(k**3))
        assert reduced.coeffs == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_charged_particle_point():
    verdicts = by_id(gyroscopic_prop2_verdicts(example_charged_particle(-1.0, 1.0)))
    assert verdicts["prop2-iii"].fired
    assert not verdicts["prop2-ii"].fired


def test_charged_particle_closed_forms(rng):
    forms = closed_forms(Family.CHARGED_PARTICLE)
    for k, c in rng.uniform(-3, 3, (2000, 2)):
        system = example_charged_particle(k, c)
        verdicts = by_id(gyroscopic_prop2_verdicts(system))
        verdicts["thm4"] = gyroscopic_verdict_thm4(system)
        assert not verdicts["thm4"].fired
        for name in ("prop2-ii", "prop2-iii"):
            value = forms[name](k, c)
            if abs(value) > 1e-6:
                assert verdicts[name].fired == (value > 0), (name, k, c)


def test_family_system_dispatch():
    assert isinstance(family_system(Family.CIRCULATORY3, 1.0, 2.0), CirculatorySystem)
    assert isinstance(family_system(Family.CHARGED_PARTICLE, 1.0, 2.0), GyroscopicSystem)
