import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from allspeed.grid import (NG, Field, GridSpec, InvalidState, cons_to_prim, fill_ghosts,
                           prim_to_cons, read_dump, sound_speed_and_mach, write_dump)


def test_cons_to_prim_zero_velocity():
    w = cons_to_prim(np.array([1.0, 0.0, 0.0, 2.5]), 1.4)
    assert np.allclose(w, [1.0, 0.0, 0.0, 1.0], rtol=0, atol=1e-15)


def test_cons_to_prim_with_kinetic_energy():
    w = cons_to_prim(np.array([1.0, 1.0, 0.0, 3.0]), 1.4)
    assert np.allclose(w, [1.0, 1.0, 0.0, 1.0], rtol=0, atol=1e-14)


def test_cons_to_prim_sign_cases():
    w = cons_to_prim(np.array([1.0, 0.0, 0.0, 0.1]), 1.4)
    assert w[3] == pytest.approx(0.04)
    with pytest.raises(InvalidState):
        cons_to_prim(np.array([1.0, 0.0, 0.0, -0.1]), 1.4)


def test_invalid_state_carries_index():
    q = np.ones((4, 3, 3))
    q[3] = 2.5
    q[0, 1, 2] = -1.0
    with pytest.raises(InvalidState) as exc:
        cons_to_prim(q, 1.4)
    assert exc.value.index == (1, 2)


def test_prim_to_cons_examples():
    q = prim_to_cons(np.array([1.0, 0.0, 0.0, 1.0]), 1.4)
    assert np.allclose(q, [1.0, 0.0, 0.0, 2.5], rtol=1e-15)
    q = prim_to_cons(np.array([0.125, 0.0, 0.0, 0.1]), 1.4)
    assert np.allclose(q, [0.125, 0.0, 0.0, 0.25], rtol=1e-15)


def test_roundtrip_many_random_states():
    rng = np.random.default_rng(0)
    w = np.stack([0.1 + 3 * rng.random(1000), rng.standard_normal(1000),
                  rng.standard_normal(1000), 0.5 + 3 * rng.random(1000)])
    back = cons_to_prim(prim_to_cons(w, 1.4), 1.4)
    assert np.max(np.abs(back - w) / np.maximum(np.abs(w), 1e-30)) < 1e-14


@settings(max_examples=200, deadline=None)
@given(rho=st.floats(1e-3, 1e3), u=st.floats(-100, 100), v=st.floats(-100, 100),
       p=st.floats(1e-3, 1e3), gamma=st.floats(1.1, 2.0))
def test_roundtrip_property(rho, u, v, p, gamma):
    w = np.array([rho, u, v, p])
    back = cons_to_prim(prim_to_cons(w, gamma), gamma)
    # the pressure recovery cancels the kinetic energy, so its error scale
    # includes the kinetic term
    scale = np.abs(w)
    scale[3] = max(p, (gamma - 1) * 0.5 * rho * (u * u + v * v))
    assert np.max(np.abs(back - w) / np.maximum(scale, 1e-30)) < 1e-12


def test_sound_speed_and_mach():
    c, m = sound_speed_and_mach(np.array([1.0, 0.0, 0.0, 1.0]), 1.4)
    assert c == pytest.approx(np.sqrt(1.4), rel=1e-15)
    assert m == 0.0
    c, m = sound_speed_and_mach(np.array([1.4, 1.0, 0.0, 1.0]), 1.4)
    assert c == pytest.approx(1.0, rel=1e-15)
    assert m == pytest.approx(1.0, rel=1e-15)


def test_gresho_cell_mach_at_peak_radius():
    # vortex state at r = 0.2 evaluated analytically: v_phi = 1, p = p0 + 0.5
    eps, gamma = 0.1, 1.4
    p0 = 1.0 / (gamma * eps * eps) - 0.5
    w = np.array([1.0, 1.0, 0.0, p0 + 0.5])
    _, m = sound_speed_and_mach(w, gamma)
    assert m == pytest.approx(eps, rel=1e-14)


def test_grid_spec_invariants():
    with pytest.raises(ValueError):
        GridSpec(2, 5, 0.1, 0.1)
    with pytest.raises(ValueError):
        GridSpec(5, 5, -0.1, 0.1)
    with pytest.raises(ValueError):
        GridSpec(5, 5, 0.1, 0.1, bc_x="bogus")


def _random_field(nx, ny, bc_x="periodic", bc_y="periodic", seed=0):
    rng = np.random.default_rng(seed)
    spec = GridSpec(nx, ny, 1.0 / nx, 1.0 / ny, bc_x=bc_x, bc_y=bc_y)
    w = np.stack([1 + rng.random((nx, ny)), rng.standard_normal((nx, ny)),
                  rng.standard_normal((nx, ny)), 1 + rng.random((nx, ny))])
    return Field.from_primitive(spec, w, 1.4)


def test_fill_ghosts_periodic_wraps():
    f = _random_field(4, 4)
    fill_ghosts(f)
    # ghost(-1, j) = interior(3, j)
    assert np.array_equal(f.data[:, NG - 1, NG:-NG], f.interior[:, 3, :])
    assert np.array_equal(f.data[:, NG + 4, NG:-NG], f.interior[:, 0, :])


def test_fill_ghosts_zero_gradient():
    f = _random_field(5, 4, bc_x="zero-gradient")
    fill_ghosts(f)
    assert np.array_equal(f.data[:, NG - 1, NG:-NG], f.interior[:, 0, :])
    assert np.array_equal(f.data[:, 0, NG:-NG], f.interior[:, 0, :])


def test_fill_ghosts_wall_reflects_normal_momentum():
    f = _random_field(5, 4, bc_x="wall")
    fill_ghosts(f)
    ghost = f.data[:, NG - 1, NG:-NG]
    inner = f.interior[:, 0, :]
    assert np.array_equal(ghost[1], -inner[1])
    for comp in (0, 2, 3):
        assert np.array_equal(ghost[comp], inner[comp])


@pytest.mark.parametrize("bc", ["periodic", "zero-gradient", "wall"])
def test_fill_ghosts_idempotent(bc):
    f = _random_field(6, 5, bc_x=bc, bc_y=bc)
    fill_ghosts(f)
    snap = f.data.copy()
    fill_ghosts(f)
    assert np.array_equal(f.data, snap)


def test_fill_ghosts_preserves_interior_sums():
    f = _random_field(6, 5)
    before = f.conserved_totals()
    fill_ghosts(f)
    assert np.array_equal(f.conserved_totals(), before)


def test_dump_roundtrip(tmp_path):
    f = _random_field(5, 7, seed=3)
    f.time = 0.25
    path = tmp_path / "field.txt"
    write_dump(f, path)
    g = read_dump(path)
    assert g.spec.nx == 5 and g.spec.ny == 7
    assert g.time == 0.25
    assert np.array_equal(g.interior, f.interior)


def test_dump_format(tmp_path):
    f = _random_field(3, 3)
    path = tmp_path / "field.txt"
    write_dump(f, path)
    lines = path.read_text().splitlines()
    head = lines[0].split()
    assert len(head) == 7 and head[0] == "3" and head[1] == "3"
    assert len(lines) == 1 + 9
    first = lines[1].split()
    assert first[0] == "0" and first[1] == "0" and len(first) == 6
