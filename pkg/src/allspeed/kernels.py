"""Fused per-scheme step kernels and the chunked advance loop (numba).

These are loop transliterations of the composed-stencil schemes in
lagrange.py and relaxation.py.  They exist purely for speed: the low-Mach
benchmark runs take tens of millions of forward-Euler steps, which the
sliced-numpy reference path cannot sustain.  Equality with the reference
implementations is enforced by tests; any change here must keep them in
agreement.

The stencil work is split into separable, branch-free array passes (pair
sums/differences first, then transverse combinations) so the compiler can
vectorize them; only the Riemann-fan selection and the rare
subcharacteristic fixup remain scalar.

Layout (padded cell arrays are (nx+4, ny+4)):

* x pair arrays (nxt-1, nyt): [a, j] pairs cells (a, j), (a+1, j);
* x face arrays (nxt-1, nyt-2): [a, b] is the face between padded cells
  (a, b+1) and (a+1, b+1);
* y pair arrays (nxt, nyt-1): [i, b] pairs cells (i, b), (i, b+1);
* y face arrays (nxt-2, nyt-1): [a, b] is the face between padded cells
  (a+1, b) and (a+1, b+1).

Scheme ids: 0 lp-split, 1 lp-multid, 2 relax-split, 3 relax-multid.
Boundary codes: 0 periodic, 1 zero-gradient, 2 wall.
Status codes: 0 ok, 1 non-positive compression factor, 2 invalid state,
3 unresolved subcharacteristic violation.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NG = 2

LP_SPLIT, LP_MULTID, RELAX_SPLIT, RELAX_MULTID = 0, 1, 2, 3
BC_CODES = {"periodic": 0, "zero-gradient": 1, "wall": 2}
OK, FAIL_COMPRESSION, FAIL_STATE, FAIL_SUBCHAR = 0, 1, 2, 3


@njit(cache=True)
def fill_ghosts_nb(q, bcx, bcy):
    nxt = q.shape[1]
    nyt = q.shape[2]
    nx = nxt - 2 * NG
    ny = nyt - 2 * NG
    for comp in range(4):
        sx = -1.0 if (bcx == 2 and comp == 1) else 1.0
        if bcx == 0:
            for g in range(NG):
                for j in range(nyt):
                    q[comp, g, j] = q[comp, g + nx, j]
                    q[comp, NG + nx + g, j] = q[comp, NG + g, j]
        elif bcx == 1:
            for g in range(NG):
                for j in range(nyt):
                    q[comp, g, j] = q[comp, NG, j]
                    q[comp, NG + nx + g, j] = q[comp, NG + nx - 1, j]
        else:
            for m in range(NG):
                for j in range(nyt):
                    q[comp, NG - 1 - m, j] = sx * q[comp, NG + m, j]
                    q[comp, NG + nx + m, j] = sx * q[comp, NG + nx - 1 - m, j]
        sy = -1.0 if (bcy == 2 and comp == 2) else 1.0
        if bcy == 0:
            for i in range(nxt):
                for g in range(NG):
                    q[comp, i, g] = q[comp, i, g + ny]
                    q[comp, i, NG + ny + g] = q[comp, i, NG + g]
        elif bcy == 1:
            for i in range(nxt):
                for g in range(NG):
                    q[comp, i, g] = q[comp, i, NG]
                    q[comp, i, NG + ny + g] = q[comp, i, NG + ny - 1]
        else:
            for i in range(nxt):
                for m in range(NG):
                    q[comp, i, NG - 1 - m] = sy * q[comp, i, NG + m]
                    q[comp, i, NG + ny + m] = sy * q[comp, i, NG + ny - 1 - m]


@njit(cache=True, fastmath=True)
def prim_pass_nb(q, gamma, u, v, p, rc, es):
    """Primitive conversion, rho*c and specific total energy, full padded array.

    Returns the interior max of (|u| + c, |v| + c), or -1.0 on an invalid
    interior state.
    """
    nxt = q.shape[1]
    nyt = q.shape[2]
    for i in range(nxt):
        for j in range(nyt):
            rho = q[0, i, j]
            rs = rho if rho > 1e-300 else 1e-300
            inv = 1.0 / rs
            ui = q[1, i, j] * inv
            vi = q[2, i, j] * inv
            pi = (gamma - 1.0) * (q[3, i, j] - 0.5 * (q[1, i, j] * ui + q[2, i, j] * vi))
            ps = pi if pi > 1e-300 else 1e-300
            u[i, j] = ui
            v[i, j] = vi
            p[i, j] = pi
            rc[i, j] = rho * np.sqrt(gamma * ps * inv)
            es[i, j] = q[3, i, j] * inv
    smax = 0.0
    ok = True
    for i in range(NG, nxt - NG):
        for j in range(NG, nyt - NG):
            if q[0, i, j] <= 0.0 or p[i, j] <= 0.0:
                ok = False
            c = rc[i, j] / q[0, i, j]
            sx = abs(u[i, j]) + c
            sy = abs(v[i, j]) + c
            if sx > smax:
                smax = sx
            if sy > smax:
                smax = sy
    if not ok:
        return -1.0
    return smax


@njit(cache=True, fastmath=True)
def pair_pass_x(u, v, p, rc, su, du, sp, dp, sv, mr):
    for a in range(su.shape[0]):
        for j in range(su.shape[1]):
            su[a, j] = u[a + 1, j] + u[a, j]
            du[a, j] = u[a + 1, j] - u[a, j]
            sp[a, j] = p[a + 1, j] + p[a, j]
            dp[a, j] = p[a + 1, j] - p[a, j]
            sv[a, j] = v[a + 1, j] + v[a, j]
            mr[a, j] = rc[a + 1, j] if rc[a + 1, j] > rc[a, j] else rc[a, j]


@njit(cache=True, fastmath=True)
def pair_pass_y(u, v, p, rc, sv, dv, sp, dp, su, mr):
    for i in range(sv.shape[0]):
        for b in range(sv.shape[1]):
            sv[i, b] = v[i, b + 1] + v[i, b]
            dv[i, b] = v[i, b + 1] - v[i, b]
            sp[i, b] = p[i, b + 1] + p[i, b]
            dp[i, b] = p[i, b + 1] - p[i, b]
            su[i, b] = u[i, b + 1] + u[i, b]
            mr[i, b] = rc[i, b + 1] if rc[i, b + 1] > rc[i, b] else rc[i, b]


@njit(cache=True, fastmath=True)
def face_terms_x(su, du, sp, dp, sv, mr, rxy, multid, am, navg, pavg, pj, div):
    """Per-face normal-velocity/pressure averages, jumps, divergence, max rho*c."""
    nf = am.shape[0]
    nb = am.shape[1]
    if multid:
        for a in range(nf):
            for b in range(nb):
                jc = b + 1
                m = mr[a, jc - 1]
                m = mr[a, jc] if mr[a, jc] > m else m
                m = mr[a, jc + 1] if mr[a, jc + 1] > m else m
                am[a, b] = m
                navg[a, b] = 0.125 * ((su[a, jc + 1] + 2.0 * su[a, jc]) + su[a, jc - 1])
                pavg[a, b] = 0.125 * ((sp[a, jc + 1] + 2.0 * sp[a, jc]) + sp[a, jc - 1])
                pj[a, b] = 0.25 * ((dp[a, jc + 1] + 2.0 * dp[a, jc]) + dp[a, jc - 1])
                div[a, b] = 0.25 * ((du[a, jc + 1] + 2.0 * du[a, jc]) + du[a, jc - 1]) \
                    + (rxy * 0.25) * (sv[a, jc + 1] - sv[a, jc - 1])
    else:
        for a in range(nf):
            for b in range(nb):
                jc = b + 1
                am[a, b] = mr[a, jc]
                navg[a, b] = 0.5 * su[a, jc]
                pavg[a, b] = 0.5 * sp[a, jc]
                pj[a, b] = dp[a, jc]
                div[a, b] = du[a, jc]


@njit(cache=True, fastmath=True)
def face_terms_y(sv, dv, sp, dp, su, mr, ryx, multid, am, navg, pavg, pj, div):
    nf = am.shape[0]
    nb = am.shape[1]
    if multid:
        for a in range(nf):
            for b in range(nb):
                ic = a + 1
                m = mr[ic - 1, b]
                m = mr[ic, b] if mr[ic, b] > m else m
                m = mr[ic + 1, b] if mr[ic + 1, b] > m else m
                am[a, b] = m
                navg[a, b] = 0.125 * ((sv[ic + 1, b] + 2.0 * sv[ic, b]) + sv[ic - 1, b])
                pavg[a, b] = 0.125 * ((sp[ic + 1, b] + 2.0 * sp[ic, b]) + sp[ic - 1, b])
                pj[a, b] = 0.25 * ((dp[ic + 1, b] + 2.0 * dp[ic, b]) + dp[ic - 1, b])
                div[a, b] = 0.25 * ((dv[ic + 1, b] + 2.0 * dv[ic, b]) + dv[ic - 1, b]) \
                    + (ryx * 0.25) * (su[ic + 1, b] - su[ic - 1, b])
    else:
        for a in range(nf):
            for b in range(nb):
                ic = a + 1
                am[a, b] = mr[ic, b]
                navg[a, b] = 0.5 * sv[ic, b]
                pavg[a, b] = 0.5 * sp[ic, b]
                pj[a, b] = dp[ic, b]
                div[a, b] = dv[ic, b]


@njit(cache=True, fastmath=True)
def star_pass(am, navg, pavg, pj, div, kfac, ustar, pstar):
    """Acoustic relaxation star values u*, p* from the face terms."""
    for a in range(am.shape[0]):
        for b in range(am.shape[1]):
            aa = kfac * am[a, b]
            ustar[a, b] = navg[a, b] - 0.5 * (pj[a, b] / aa)
            pstar[a, b] = pavg[a, b] - 0.5 * (aa * div[a, b])


@njit(cache=True, fastmath=True)
def lp_step_nb(q, qnew, bufs, dt, dx, dy, kfac, gamma, multid):
    u, v, p, rc, es = bufs[0], bufs[1], bufs[2], bufs[3], bufs[4]
    sux, dux, spx, dpx, svx, mrx = bufs[5], bufs[6], bufs[7], bufs[8], bufs[9], bufs[10]
    svy, dvy, spy, dpy, suy, mry = bufs[11], bufs[12], bufs[13], bufs[14], bufs[15], bufs[16]
    amx, nax, pax, pjx, dix = bufs[17], bufs[18], bufs[19], bufs[20], bufs[21]
    amy, nay, pay, pjy, diy = bufs[22], bufs[23], bufs[24], bufs[25], bufs[26]
    us, px = bufs[27], bufs[28]
    vs, py = bufs[29], bufs[30]
    lfac, qm = bufs[31], bufs[32]
    fxa, fya = bufs[33], bufs[34]
    nxt = q.shape[1]
    nyt = q.shape[2]
    nx = nxt - 2 * NG
    ny = nyt - 2 * NG
    pair_pass_x(u, v, p, rc, sux, dux, spx, dpx, svx, mrx)
    pair_pass_y(u, v, p, rc, svy, dvy, spy, dpy, suy, mry)
    face_terms_x(sux, dux, spx, dpx, svx, mrx, dx / dy, multid, amx, nax, pax, pjx, dix)
    face_terms_y(svy, dvy, spy, dpy, suy, mry, dy / dx, multid, amy, nay, pay, pjy, diy)
    star_pass(amx, nax, pax, pjx, dix, kfac, us, px)
    star_pass(amy, nay, pay, pjy, diy, kfac, vs, py)
    # compression factors over interior cells plus one halo ring
    lmin = 1.0
    for i in range(1, nxt - 1):
        for j in range(1, nyt - 1):
            a = i - 1
            b = j - 1
            lf = 1.0 + (dt / dx) * (us[a + 1, b] - us[a, b]) + (dt / dy) * (vs[a, b + 1] - vs[a, b])
            lfac[a, b] = lf
            lmin = lf if lf < lmin else lmin
    if lmin <= 0.0:
        return FAIL_COMPRESSION
    for i in range(1, nxt - 1):
        for j in range(1, nyt - 1):
            a = i - 1
            b = j - 1
            inv = 1.0 / lfac[a, b]
            qm[0, a, b] = q[0, i, j] * inv
            qm[1, a, b] = (q[1, i, j] - (dt / dx) * (px[a + 1, b] - px[a, b])) * inv
            qm[2, a, b] = (q[2, i, j] - (dt / dy) * (py[a, b + 1] - py[a, b])) * inv
            qm[3, a, b] = (q[3, i, j]
                           - (dt / dx) * (us[a + 1, b] * px[a + 1, b] - us[a, b] * px[a, b])
                           - (dt / dy) * (vs[a, b + 1] * py[a, b + 1] - vs[a, b] * py[a, b])) * inv
    # donor-cell advective fluxes: up*qL + down*qR is the branch-free upwind form
    for a in range(1, nx + 2):
        for j in range(NG, nyt - NG):
            b = j - 1
            uf = us[a, b]
            up = uf if uf > 0.0 else 0.0
            dn = uf if uf < 0.0 else 0.0
            for comp in range(4):
                fxa[comp, a - 1, j - NG] = up * qm[comp, a - 1, b] + dn * qm[comp, a, b]
    for i in range(NG, nxt - NG):
        for b in range(1, ny + 2):
            vf = vs[i - 1, b]
            up = vf if vf > 0.0 else 0.0
            dn = vf if vf < 0.0 else 0.0
            for comp in range(4):
                fya[comp, i - NG, b - 1] = up * qm[comp, i - 1, b - 1] + dn * qm[comp, i - 1, b]
    ok = True
    for i in range(NG, nxt - NG):
        for j in range(NG, nyt - NG):
            a = i - 1
            b = j - 1
            for comp in range(4):
                qnew[comp, i, j] = qm[comp, a, b] * lfac[a, b] \
                    - (dt / dx) * (fxa[comp, i - 1, j - NG] - fxa[comp, i - 2, j - NG]) \
                    - (dt / dy) * (fya[comp, i - NG, j - 1] - fya[comp, i - NG, j - 2])
            rho = qnew[0, i, j]
            ei = qnew[3, i, j] * rho - 0.5 * (qnew[1, i, j] ** 2 + qnew[2, i, j] ** 2)
            if rho <= 0.0 or ei <= 0.0:
                ok = False
    if not ok:
        return FAIL_STATE
    return OK


@njit(cache=True, fastmath=True)
def relax_face_pass(q, u, v, p, es, am, navg, pavg, pj, div, kfac,
                    axis, flux, nx_lo, ny_lo):
    """Star states, fan selection and flux for one face family.

    For axis 0 the face arrays are indexed [a, b] with left cell (a, b+1)
    and right cell (a+1, b+1); for axis 1 with left (a+1, b) and right
    (a+1, b+1).  nx_lo/ny_lo give the face-index offsets of the flux
    window (faces needed by the interior update).
    """
    nfx = flux.shape[1]
    nfy = flux.shape[2]
    for fa in range(nfx):
        for fb in range(nfy):
            a = fa + nx_lo
            b = fb + ny_lo
            if axis == 0:
                il, jl = a, b + 1
                ir, jr = a + 1, b + 1
            else:
                il, jl = a + 1, b
                ir, jr = a + 1, b + 1
            rl = q[0, il, jl]
            rr = q[0, ir, jr]
            if axis == 0:
                unl = u[il, jl]
                unr = u[ir, jr]
                utl = v[il, jl]
                utr = v[ir, jr]
            else:
                unl = v[il, jl]
                unr = v[ir, jr]
                utl = u[il, jl]
                utr = u[ir, jr]
            pl = p[il, jl]
            pr = p[ir, jr]
            dvt = div[a, b]
            pjt = pj[a, b]
            aa = kfac * am[a, b]
            inva = 1.0 / aa
            denl = 1.0 + 0.5 * rl * dvt * inva - 0.5 * rl * pjt * inva * inva
            denr = 1.0 + 0.5 * rr * dvt * inva + 0.5 * rr * pjt * inva * inva
            trials = 0
            while (denl <= 0.0 or denr <= 0.0) and trials < 5:
                aa *= 2.0
                inva = 1.0 / aa
                denl = 1.0 + 0.5 * rl * dvt * inva - 0.5 * rl * pjt * inva * inva
                denr = 1.0 + 0.5 * rr * dvt * inva + 0.5 * rr * pjt * inva * inva
                trials += 1
            if denl <= 0.0 or denr <= 0.0:
                return FAIL_SUBCHAR
            ustar = navg[a, b] - 0.5 * pjt * inva
            pstar = pavg[a, b] - 0.5 * aa * dvt
            sl = unl - aa / rl
            sr = unr + aa / rr
            if sl > 0.0:
                rhoh = rl
                un = unl
                ut = utl
                en = es[il, jl] * rl
                pih = pl
            elif sr <= 0.0:
                rhoh = rr
                un = unr
                ut = utr
                en = es[ir, jr] * rr
                pih = pr
            else:
                pos = ustar > 0.0
                rhoh = rl / denl if pos else rr / denr
                un = ustar
                ut = utl if pos else utr
                sel = es[il, jl] + (pl * unl - pstar * ustar) * inva
                ser = es[ir, jr] + (pstar * ustar - pr * unr) * inva
                en = rhoh * (sel if pos else ser)
                pih = pstar
            mass = rhoh * un
            if axis == 0:
                flux[0, fa, fb] = mass
                flux[1, fa, fb] = mass * un + pih
                flux[2, fa, fb] = mass * ut
                flux[3, fa, fb] = un * (en + pih)
            else:
                flux[0, fa, fb] = mass
                flux[1, fa, fb] = mass * ut
                flux[2, fa, fb] = mass * un + pih
                flux[3, fa, fb] = un * (en + pih)
    return OK


@njit(cache=True, fastmath=True)
def relax_step_nb(q, qnew, bufs, dt, dx, dy, kfac, gamma, multid):
    u, v, p, rc, es = bufs[0], bufs[1], bufs[2], bufs[3], bufs[4]
    sux, dux, spx, dpx, svx, mrx = bufs[5], bufs[6], bufs[7], bufs[8], bufs[9], bufs[10]
    svy, dvy, spy, dpy, suy, mry = bufs[11], bufs[12], bufs[13], bufs[14], bufs[15], bufs[16]
    amx, nax, pax, pjx, dix = bufs[17], bufs[18], bufs[19], bufs[20], bufs[21]
    amy, nay, pay, pjy, diy = bufs[22], bufs[23], bufs[24], bufs[25], bufs[26]
    fxa, fya = bufs[33], bufs[34]
    nxt = q.shape[1]
    nyt = q.shape[2]
    nx = nxt - 2 * NG
    ny = nyt - 2 * NG
    pair_pass_x(u, v, p, rc, sux, dux, spx, dpx, svx, mrx)
    pair_pass_y(u, v, p, rc, svy, dvy, spy, dpy, suy, mry)
    face_terms_x(sux, dux, spx, dpx, svx, mrx, dx / dy, multid, amx, nax, pax, pjx, dix)
    face_terms_y(svy, dvy, spy, dpy, suy, mry, dy / dx, multid, amy, nay, pay, pjy, diy)
    # flux windows: x-faces a = 1..nx+1 (rows j = NG..), y-faces b = 1..ny+1
    st = relax_face_pass(q, u, v, p, es, amx, nax, pax, pjx, dix, kfac, 0, fxa, 1, 1)
    if st != OK:
        return st
    st = relax_face_pass(q, u, v, p, es, amy, nay, pay, pjy, diy, kfac, 1, fya, 1, 1)
    if st != OK:
        return st
    ok = True
    for i in range(NG, nxt - NG):
        for j in range(NG, nyt - NG):
            for comp in range(4):
                qnew[comp, i, j] = q[comp, i, j] \
                    - (dt / dx) * (fxa[comp, i - 1, j - NG] - fxa[comp, i - 2, j - NG]) \
                    - (dt / dy) * (fya[comp, i - NG, j - 1] - fya[comp, i - NG, j - 2])
            rho = qnew[0, i, j]
            ei = qnew[3, i, j] * rho - 0.5 * (qnew[1, i, j] ** 2 + qnew[2, i, j] ** 2)
            if rho <= 0.0 or ei <= 0.0:
                ok = False
    if not ok:
        return FAIL_STATE
    return OK


@njit(cache=True)
def _alloc_bufs(nxt, nyt):
    nx = nxt - 2 * NG
    ny = nyt - 2 * NG
    return (
        np.empty((nxt, nyt)), np.empty((nxt, nyt)), np.empty((nxt, nyt)),
        np.empty((nxt, nyt)), np.empty((nxt, nyt)),
        # x pair arrays
        np.empty((nxt - 1, nyt)), np.empty((nxt - 1, nyt)), np.empty((nxt - 1, nyt)),
        np.empty((nxt - 1, nyt)), np.empty((nxt - 1, nyt)), np.empty((nxt - 1, nyt)),
        # y pair arrays
        np.empty((nxt, nyt - 1)), np.empty((nxt, nyt - 1)), np.empty((nxt, nyt - 1)),
        np.empty((nxt, nyt - 1)), np.empty((nxt, nyt - 1)), np.empty((nxt, nyt - 1)),
        # x face terms
        np.empty((nxt - 1, nyt - 2)), np.empty((nxt - 1, nyt - 2)),
        np.empty((nxt - 1, nyt - 2)), np.empty((nxt - 1, nyt - 2)),
        np.empty((nxt - 1, nyt - 2)),
        # y face terms
        np.empty((nxt - 2, nyt - 1)), np.empty((nxt - 2, nyt - 1)),
        np.empty((nxt - 2, nyt - 1)), np.empty((nxt - 2, nyt - 1)),
        np.empty((nxt - 2, nyt - 1)),
        # LP stars, compression factor, predictor states
        np.empty((nxt - 1, nyt - 2)), np.empty((nxt - 1, nyt - 2)),
        np.empty((nxt - 2, nyt - 1)), np.empty((nxt - 2, nyt - 1)),
        np.empty((nxt - 2, nyt - 2)), np.empty((4, nxt - 2, nyt - 2)),
        # flux windows
        np.empty((4, nx + 1, ny)), np.empty((4, nx, ny + 1)),
    )


@njit(cache=True)
def advance_nb(q, gamma, kfac, cfl, dx, dy, bcx, bcy, scheme, t, t_stop,
               max_steps, max_retries):
    """Advance q in place to t_stop (or until max_steps / failure).

    Returns (t, steps, retries, status).  dt follows the CFL law each step,
    clamped so the final step lands on t_stop; failed steps are retried with
    halved dt up to max_retries times.
    """
    nxt = q.shape[1]
    nyt = q.shape[2]
    qnew = np.empty_like(q)
    bufs = _alloc_bufs(nxt, nyt)
    u, v, p, rc, es = bufs[0], bufs[1], bufs[2], bufs[3], bufs[4]
    steps = 0
    retries = 0
    tol = 1e-13 * max(1.0, abs(t_stop))
    while t < t_stop - tol and steps < max_steps:
        fill_ghosts_nb(q, bcx, bcy)
        smax = prim_pass_nb(q, gamma, u, v, p, rc, es)
        if smax <= 0.0:
            return t, steps, retries, FAIL_STATE
        dt = cfl * min(dx, dy) / smax
        if t + dt > t_stop:
            dt = t_stop - t
        attempts = 0
        while True:
            if scheme == LP_SPLIT or scheme == LP_MULTID:
                status = lp_step_nb(q, qnew, bufs, dt, dx, dy, kfac, gamma,
                                    scheme == LP_MULTID)
            else:
                status = relax_step_nb(q, qnew, bufs, dt, dx, dy, kfac, gamma,
                                       scheme == RELAX_MULTID)
            if status == OK:
                break
            attempts += 1
            retries += 1
            if attempts > max_retries:
                return t, steps, retries, status
            dt *= 0.5
        for comp in range(4):
            for i in range(NG, nxt - NG):
                for j in range(NG, nyt - NG):
                    q[comp, i, j] = qnew[comp, i, j]
        t += dt
        steps += 1
    return t, steps, retries, OK


@njit(cache=True)
def step_once_nb(q, qnew, gamma, kfac, dt, dx, dy, bcx, bcy, scheme):
    """One step with a caller-chosen dt; q's ghosts are (re)filled here."""
    fill_ghosts_nb(q, bcx, bcy)
    bufs = _alloc_bufs(q.shape[1], q.shape[2])
    smax = prim_pass_nb(q, gamma, bufs[0], bufs[1], bufs[2], bufs[3], bufs[4])
    if smax <= 0.0:
        return FAIL_STATE
    if scheme == LP_SPLIT or scheme == LP_MULTID:
        return lp_step_nb(q, qnew, bufs, dt, dx, dy, kfac, gamma, scheme == LP_MULTID)
    return relax_step_nb(q, qnew, bufs, dt, dx, dy, kfac, gamma, scheme == RELAX_MULTID)
