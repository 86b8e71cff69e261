import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conecut.errors import ConecutError, DomainError, NonMonotoneError
from conecut.profiles import area, make_profile, oracle_volume
from conecut.ziggurat import Slab, Ziggurat, build_ziggurat, democritus_gap, faces, gap, total_volume

from conftest import brute_stack_volume, random_monotone_samples


def cone_r(z):
    return 1.0 - z


def test_cone_inscribed_n4(cone):
    zg = build_ziggurat(cone, 4, "inscribed")
    assert len(zg) == 4
    np.testing.assert_allclose(zg.effective_radii, [0.75, 0.5, 0.25, 0.0], atol=1e-15)
    np.testing.assert_allclose(zg.z_starts, [0, 0.25, 0.5, 0.75])
    v = total_volume(zg)
    assert v == pytest.approx(0.21875 * math.pi, rel=1e-15)
    assert v == pytest.approx(0.6872234, abs=1e-7)
    assert v == pytest.approx(brute_stack_volume(cone_r, 1.0, 4, "inscribed"), rel=1e-15)


def test_cone_circumscribed_n4(cone):
    zg = build_ziggurat(cone, 4, "circumscribed")
    np.testing.assert_allclose(zg.effective_radii, [1, 0.75, 0.5, 0.25], rtol=1e-15)
    v = total_volume(zg)
    assert v == pytest.approx(0.46875 * math.pi, rel=1e-15)
    assert v == pytest.approx(1.4726216, abs=1e-7)


@pytest.mark.parametrize("mode", ["inscribed", "circumscribed"])
def test_cylinder_modes_coincide(cylinder, mode):
    zg = build_ziggurat(cylinder, 8, mode)
    np.testing.assert_allclose(zg.effective_radii, 1.0, rtol=1e-15)
    assert total_volume(zg) == pytest.approx(math.pi, rel=1e-15)


def test_empty_stack_volume():
    assert total_volume(Ziggurat([], [], [])) == 0.0


@pytest.mark.parametrize("n", [0, -1, 2.5, True])
def test_build_rejects_bad_counts(cone, n):
    with pytest.raises(ConecutError):
        build_ziggurat(cone, n, "inscribed")


def test_build_rejects_bad_mode(cone):
    with pytest.raises(ConecutError):
        build_ziggurat(cone, 4, "middle")


def test_non_monotone_profile_flagged():
    p = make_profile("tabulated", samples=[(0, 1), (0.5, 2), (1, 0)])
    zg = build_ziggurat(p, 4, "inscribed")
    assert not zg.rigorous
    assert build_ziggurat(make_profile("cone", 1, 1), 4, "inscribed").rigorous


def test_pasting_exact_for_long_stacks(cone):
    zg = build_ziggurat(cone, 3000, "inscribed")
    h = 1.0 / 3000
    np.testing.assert_array_equal(zg.z_starts, np.arange(3000) * h)
    assert np.max(np.abs(zg.z_starts[1:] - (zg.z_starts[:-1] + zg.thicknesses[:-1]))) <= 1e-12


def test_unpasted_stack_rejected():
    with pytest.raises(ConecutError, match="not pasted"):
        Ziggurat([0.0, 0.3], [0.25, 0.25], [1.0, 1.0])


@pytest.mark.parametrize("bad", [dict(thickness=0.0, volume=1.0), dict(thickness=1.0, volume=-1.0)])
def test_slab_invariants(bad):
    with pytest.raises(ConecutError):
        Slab(0.0, **bad)


def test_slab_effective_radius():
    s = Slab(0.0, 0.5, math.pi * 0.25 * 0.5)
    assert s.effective_radius == pytest.approx(0.5)
    assert s.z_end == 0.5


def test_gap_cone_n4(cone):
    g = gap(cone, 4)
    # subtraction of the two hand sums
    assert g.by_subtraction == pytest.approx((0.46875 - 0.21875) * math.pi, rel=1e-15)
    assert g.closed_form == pytest.approx(0.25 * math.pi, rel=1e-15)


def test_gap_cone_n1024(cone):
    g = gap(cone, 1024)
    brute = (brute_stack_volume(cone_r, 1.0, 1024, "circumscribed")
             - brute_stack_volume(cone_r, 1.0, 1024, "inscribed"))
    assert g.closed_form == pytest.approx(math.pi / 1024, rel=1e-15)
    assert g.by_subtraction == pytest.approx(math.pi / 1024, rel=1e-12)
    assert brute == pytest.approx(math.pi / 1024, rel=1e-10)


@pytest.mark.parametrize("n", [1, 7, 64, 1000])
def test_gap_cylinder_zero(cylinder, n):
    g = gap(cylinder, n)
    assert g.by_subtraction == 0.0 and g.closed_form == 0.0


def test_gap_refuses_non_monotone():
    p = make_profile("tabulated", samples=[(0, 1), (0.5, 2), (1, 0)])
    with pytest.raises(NonMonotoneError):
        gap(p, 8)


@pytest.mark.parametrize("n", [1, 2, 5, 64, 1000])
@pytest.mark.parametrize("kind", ["cone", "paraboloid", "cylinder"])
def test_sandwich_and_both_sided_bound(kind, n):
    p = make_profile(kind, 1.5, 2.0)
    exact = oracle_volume(p)
    lo = total_volume(build_ziggurat(p, n, "inscribed"))
    hi = total_volume(build_ziggurat(p, n, "circumscribed"))
    g = gap(p, n).closed_form
    tol = 1e-13 * exact
    assert lo <= exact + tol and exact <= hi + tol
    assert abs(lo - exact) <= g + tol
    assert abs(hi - exact) <= g + tol


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), log_n=st.integers(0, 14))
def test_telescoping_random_tables(seed, log_n):
    p = make_profile("tabulated", samples=random_monotone_samples(np.random.default_rng(seed)))
    g = gap(p, 2**log_n)
    assert g.by_subtraction == pytest.approx(g.closed_form, rel=1e-12)


@pytest.mark.parametrize("kind", ["cone", "paraboloid"])
def test_gap_halves_when_n_doubles(kind):
    p = make_profile(kind, 1.0, 1.0)
    for n in (1, 3, 16, 1000):
        assert gap(p, 2 * n).by_subtraction / gap(p, n).by_subtraction == pytest.approx(0.5, rel=1e-12)


def test_democritus_gap_cone(cone):
    g = democritus_gap(cone, 0.5, 0.1)
    assert g == pytest.approx(0.09 * math.pi, rel=1e-14)
    assert g == pytest.approx(area(cone, 0.5) - area(cone, 0.6), rel=1e-14)
    assert g == pytest.approx(0.2827433, abs=1e-7)


@pytest.mark.parametrize("z,eps", [(0.0, 1.0), (0.3, 1e-6), (0.9, 0.1)])
def test_democritus_gap_cylinder_zero(cylinder, z, eps):
    assert democritus_gap(cylinder, z, eps) == 0.0


def test_democritus_rate(cone):
    # finite differences of r^2 converge to |d(r^2)/dz| = 2(1 - z)
    prev = None
    for k in range(2, 7):
        eps = 10.0**-k
        err = abs(democritus_gap(cone, 0.5, eps) / eps - math.pi)
        if prev is not None:
            assert err < prev
        prev = err
    assert prev <= 1e-5


def test_democritus_faces_stay_distinct(cone):
    for eps in (1e-1, 1e-4, 1e-9):
        lower, upper = faces(cone, 0.5, eps)
        assert lower > upper
        assert democritus_gap(cone, 0.5, eps) > 0


@pytest.mark.parametrize("z,eps", [(-0.1, 0.1), (0.95, 0.1), (0.5, 0.0), (0.5, -0.1)])
def test_democritus_domain(cone, z, eps):
    with pytest.raises(DomainError):
        democritus_gap(cone, z, eps)


def test_json_and_csv(cone):
    zg = build_ziggurat(cone, 4, "inscribed")
    doc = json.loads(zg.to_json())
    assert doc["origin"] == 0.0
    assert [s["volume"] for s in doc["slabs"]] == zg.volumes.tolist()
    back = Ziggurat.from_dict(doc)
    np.testing.assert_array_equal(back.volumes, zg.volumes)
    lines = zg.to_csv().splitlines()
    assert lines[0] == "z_start,thickness,volume"
    assert [float(l.split(",")[2]) for l in lines[1:]] == zg.volumes.tolist()
    assert "0.44178646691106466" in zg.to_csv()  # 17 significant digits
