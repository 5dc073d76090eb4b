import numpy as np
import pytest

from allspeed.grid import Field, GridSpec, StepFailure, cons_to_prim, fill_ghosts, prim_to_cons
from allspeed.lagrange import (LpStarFaces, face_speeds, lp_advect_and_update, lp_predictor,
                               lp_star_multid, lp_star_split, lp_step)
from allspeed.oracles import divergence_nullspace_sample

GAMMA = 1.4


def _field_from_prim(w, bc="periodic", dx=None, dy=None):
    nx, ny = w.shape[1], w.shape[2]
    spec = GridSpec(nx, ny, dx or 1.0 / nx, dy or 1.0 / ny, bc_x=bc, bc_y=bc)
    return Field.from_primitive(spec, w, GAMMA)


def _uniform(nx, ny, rho=1.0, u=0.4, v=-0.3, p=2.0):
    w = np.empty((4, nx, ny))
    w[0], w[1], w[2], w[3] = rho, u, v, p
    return w


def _prepped(f):
    g = f.copy()
    fill_ghosts(g)
    return g, cons_to_prim(g.data, GAMMA)


def test_split_stars_uniform_state():
    f = _field_from_prim(_uniform(6, 5))
    g, prim = _prepped(f)
    ax, ay = face_speeds(prim, GAMMA, "split")
    stars = lp_star_split(prim, ax, ay)
    assert np.allclose(stars.u_star, 0.4, rtol=0, atol=1e-15)
    assert np.allclose(stars.v_star, -0.3, rtol=0, atol=1e-15)
    assert np.allclose(stars.p_star_x, 2.0, rtol=0, atol=1e-14)
    assert np.allclose(stars.p_star_y, 2.0, rtol=0, atol=1e-14)


def test_split_stars_pressure_jump():
    # p: 1 -> 2 across a face, u = 0, a = 2  =>  u* = -0.25, p* = 1.5
    wl = np.array([1.0, 0.0, 0.0, 1.0])
    wr = np.array([1.0, 0.0, 0.0, 2.0])
    a = np.array(2.0)
    u_star = 0.5 * (wl[1] + wr[1]) - (wr[3] - wl[3]) / (2 * a)
    p_star = 0.5 * (wl[3] + wr[3]) - a * (wr[1] - wl[1]) / 2
    assert u_star == -0.25 and p_star == 1.5
    w = _uniform(6, 5, u=0.0, v=0.0, p=1.0)
    w[3, 3:, :] = 2.0
    f = _field_from_prim(w, bc="zero-gradient")
    g, prim = _prepped(f)
    ax = np.full((9, 7), 2.0)
    ay = np.full((8, 8), 2.0)
    stars = lp_star_split(prim, ax, ay)
    assert stars.u_star[4, 2] == -0.25   # the jump face, interior row
    assert stars.p_star_x[4, 2] == 1.5


def test_split_stars_velocity_jump_zeroes_pressure():
    # u: 0 -> 1 at p = 1 with a = 2 gives p* = 0 at the jump face
    w = _uniform(8, 5, u=0.0, v=0.0, p=1.0)
    w[1, 4:, :] = 1.0
    f = _field_from_prim(w, bc="zero-gradient")
    g, prim = _prepped(f)
    ax = np.full((11, 7), 2.0)
    ay = np.full((10, 8), 2.0)
    stars = lp_star_split(prim, ax, ay)
    assert stars.p_star_x[5, 2] == 0.0


def test_step_guard_trips_on_oversized_dt():
    # a colliding flow with an oversized dt drives the compression factor
    # non-positive; the step must fail rather than return an invalid state
    w = _uniform(8, 5, u=0.0, v=0.0, p=0.05)
    w[1, :4, :] = 2.0
    w[1, 4:, :] = -2.0
    f = _field_from_prim(w, bc="zero-gradient")
    with pytest.raises(StepFailure):
        lp_step(f, 0.1, "split")


def test_multid_stars_uniform_state():
    f = _field_from_prim(_uniform(6, 5))
    g, prim = _prepped(f)
    ax, ay = face_speeds(prim, GAMMA, "multid")
    stars = lp_star_multid(prim, ax, ay, f.spec.dx, f.spec.dy)
    assert np.allclose(stars.u_star, 0.4, rtol=0, atol=1e-15)
    assert np.allclose(stars.p_star_x, 2.0, rtol=0, atol=1e-14)


def test_multid_equals_split_on_y_invariant_data():
    rng = np.random.default_rng(4)
    nx, ny = 12, 6
    w = np.empty((4, nx, ny))
    w[0] = (1 + rng.random(nx))[:, None]
    w[1] = rng.standard_normal(nx)[:, None]
    w[2] = rng.standard_normal(nx)[:, None]
    w[3] = (1 + rng.random(nx))[:, None]
    f = _field_from_prim(w)
    g, prim = _prepped(f)
    ax_s, ay_s = face_speeds(prim, GAMMA, "split")
    ax_m, ay_m = face_speeds(prim, GAMMA, "multid")
    assert np.array_equal(ax_s, ax_m)
    split = lp_star_split(prim, ax_s, ay_s)
    multid = lp_star_multid(prim, ax_m, ay_m, f.spec.dx, f.spec.dy)
    # x-face stars coincide exactly; y-face stars differ by transverse
    # averaging but stay y-invariant, so every y-difference in the update
    # vanishes for both variants (full-update equality is tested separately)
    assert np.array_equal(split.u_star, multid.u_star)
    assert np.array_equal(split.p_star_x, multid.p_star_x)
    for stars in (split, multid):
        assert np.max(np.abs(np.diff(stars.v_star, axis=1))) == 0.0
        assert np.max(np.abs(np.diff(stars.p_star_y, axis=1))) == 0.0
    g1 = lp_step(f, 1e-3, "split")
    g2 = lp_step(f, 1e-3, "multid")
    assert np.max(np.abs(g1.interior - g2.interior)) < 1e-13


def test_multid_pressure_star_ignores_shear():
    nx = ny = 10
    y = np.ones((nx, 1)) * (np.arange(ny)[None, :] + 0.5) / ny
    w = np.stack([np.ones((nx, ny)), np.sin(2 * np.pi * y), np.zeros((nx, ny)),
                  np.full((nx, ny), 2.0)])
    f = _field_from_prim(w)
    g, prim = _prepped(f)
    ax, ay = face_speeds(prim, GAMMA, "multid")
    stars = lp_star_multid(prim, ax, ay, f.spec.dx, f.spec.dy)
    assert np.allclose(stars.p_star_x, 2.0, rtol=0, atol=1e-13)
    assert np.allclose(stars.p_star_y, 2.0, rtol=0, atol=1e-13)


def test_predictor_uniform_state():
    f = _field_from_prim(_uniform(6, 5))
    g, prim = _prepped(f)
    ax, ay = face_speeds(prim, GAMMA, "split")
    stars = lp_star_split(prim, ax, ay)
    pred = lp_predictor(g.data, stars, 1e-3, f.spec.dx, f.spec.dy)
    assert np.allclose(pred.L, 1.0, rtol=0, atol=1e-14)
    assert np.allclose(pred.q_minus, g.data[:, 1:-1, 1:-1], rtol=1e-13)


def test_predictor_linear_star_velocity():
    # [u*] = s dx on every face gives L = 1 + s dt
    f = _field_from_prim(_uniform(6, 5))
    s, dt, dx, dy = -3.0, 0.1, f.spec.dx, f.spec.dy
    nxt, nyt = f.spec.shape
    u_star = s * dx * np.arange(nxt - 1)[:, None] * np.ones((1, nyt - 2))
    stars = LpStarFaces(u_star, np.full_like(u_star, 2.0),
                        np.zeros((nxt - 2, nyt - 1)), np.full((nxt - 2, nyt - 1), 2.0))
    pred = lp_predictor(f.data, stars, dt, dx, dy)
    assert np.allclose(pred.L, 1.0 + s * dt, rtol=1e-14)


def test_predictor_compression_failure():
    f = _field_from_prim(_uniform(6, 5))
    nxt, nyt = f.spec.shape
    u_star = -20.0 * f.spec.dx * np.arange(nxt - 1)[:, None] * np.ones((1, nyt - 2))
    stars = LpStarFaces(u_star, np.full_like(u_star, 2.0),
                        np.zeros((nxt - 2, nyt - 1)), np.full((nxt - 2, nyt - 1), 2.0))
    with pytest.raises(StepFailure):
        lp_predictor(f.data, stars, 0.1, f.spec.dx, f.spec.dy)


@pytest.mark.parametrize("variant", ["split", "multid"])
def test_uniform_state_is_exact_fixed_point(variant):
    f = _field_from_prim(_uniform(7, 6))
    g = lp_step(f, 2e-3, variant)
    assert np.allclose(g.interior, f.interior, rtol=0, atol=1e-14)


@pytest.mark.parametrize("variant", ["split", "multid"])
def test_shear_equilibrium_is_steady(variant):
    nx = ny = 12
    y = np.ones((nx, 1)) * (np.arange(ny)[None, :] + 0.5) / ny
    w = np.stack([np.ones((nx, ny)), np.sin(2 * np.pi * y), np.zeros((nx, ny)),
                  np.ones((nx, ny))])
    f = _field_from_prim(w)
    g = lp_step(f, 2e-3, variant)
    assert np.max(np.abs(g.interior - f.interior)) < 1e-13


@pytest.mark.parametrize("variant", ["split", "multid"])
def test_conservation_over_100_steps(variant):
    rng = np.random.default_rng(9)
    nx, ny = 10, 8
    w = np.stack([1 + 0.3 * rng.random((nx, ny)), 0.3 * rng.standard_normal((nx, ny)),
                  0.3 * rng.standard_normal((nx, ny)), 1 + 0.3 * rng.random((nx, ny))])
    f = _field_from_prim(w)
    t0 = f.conserved_totals()
    scale = np.abs(f.interior).sum(axis=(1, 2)) * f.spec.dx * f.spec.dy
    g = f
    for _ in range(100):
        g = lp_step(g, 2e-4, variant)
    drift = np.abs(g.conserved_totals() - t0) / scale
    assert np.max(drift) < 1e-11


def test_star_divergence_and_pressure_differences_vanish_on_kernel():
    # divergence-kernel identities assembled through the scheme's own star values:
    # with rho, p constant and a divergence-free velocity sample, the p* face
    # differences and the star face-divergence vanish identically.
    nx = ny = 12
    u, v = divergence_nullspace_sample(nx, ny, 1.0 / nx, 1.0 / ny, seed=21)
    w = np.stack([np.ones((nx, ny)), u, v, np.ones((nx, ny))])
    f = _field_from_prim(w)
    g, prim = _prepped(f)
    ax, ay = face_speeds(prim, GAMMA, "multid")
    stars = lp_star_multid(prim, ax, ay, f.spec.dx, f.spec.dy)
    dpx = np.diff(stars.p_star_x, axis=0)
    dpy = np.diff(stars.p_star_y, axis=1)
    assert np.max(np.abs(dpx)) < 1e-13
    assert np.max(np.abs(dpy)) < 1e-13
    face_div = np.diff(stars.u_star, axis=0) / f.spec.dx \
        + np.diff(stars.v_star, axis=1) / f.spec.dy
    assert np.max(np.abs(face_div)) < 1e-13


def transcribe_lp_flux_1d(rho, u, v, p, a, dt, dx, gamma):
    """Independent transcription of the split scheme's conservative 1D flux.

    Arrays carry one ghost cell on each side beyond the cells whose faces
    are requested; returns the flux on faces between consecutive cells.
    """
    e = p / (gamma - 1) + 0.5 * rho * (u * u + v * v)
    u_star = 0.5 * (u[:-1] + u[1:]) - (p[1:] - p[:-1]) / (2 * a)
    p_star = 0.5 * (p[:-1] + p[1:]) - a * (u[1:] - u[:-1]) / 2
    n_face = len(u_star)
    flux = np.zeros((4, n_face - 2))
    for k in range(1, n_face - 1):
        us = u_star[k]
        if us >= 0.0:
            i = k  # donor cell index in the cell arrays
        else:
            i = k + 1
        L = 1 + (dt / dx) * (u_star[i] - u_star[i - 1])
        rho_m = rho[i] / L
        mu_m = (rho[i] * u[i] - (dt / dx) * (p_star[i] - p_star[i - 1])) / L
        mv_m = rho[i] * v[i] / L
        e_m = (e[i] - (dt / dx) * (u_star[i] * p_star[i] - u_star[i - 1] * p_star[i - 1])) / L
        flux[0, k - 1] = us * rho_m
        flux[1, k - 1] = us * mu_m + p_star[k]
        flux[2, k - 1] = us * mv_m
        flux[3, k - 1] = us * e_m + u_star[k] * p_star[k]
    return flux


def test_split_update_matches_conservative_flux_form():
    rng = np.random.default_rng(14)
    nx, ny = 16, 6
    for trial in range(20):
        w = np.empty((4, nx, ny))
        w[0] = (1 + rng.random(nx))[:, None]
        w[1] = (0.7 * rng.standard_normal(nx))[:, None]
        w[2] = (0.7 * rng.standard_normal(nx))[:, None]
        w[3] = (1 + rng.random(nx))[:, None]
        f = _field_from_prim(w)
        dt = 2e-3
        g = lp_step(f, dt, "split")
        # independent 1D computation on the line, periodic extension
        rho = np.pad(w[0, :, 0], 2, mode="wrap")
        u = np.pad(w[1, :, 0], 2, mode="wrap")
        v = np.pad(w[2, :, 0], 2, mode="wrap")
        p = np.pad(w[3, :, 0], 2, mode="wrap")
        c = np.sqrt(GAMMA * p / rho)
        a = 1.01 * np.maximum((rho * c)[:-1], (rho * c)[1:])
        flux = transcribe_lp_flux_1d(rho, u, v, p, a, dt, f.spec.dx, GAMMA)
        q0 = prim_to_cons(w[:, :, 0], GAMMA)
        qnew = q0 - (dt / f.spec.dx) * (flux[:, 1:] - flux[:, :-1])
        assert np.max(np.abs(g.interior[:, :, 0] - qnew)) < 1e-13
