"""Pure-numpy implementation of the embedding hot kernels.

This is the fallback backend used when the compiled extension is not built;
it is also the semantic reference the compiled kernels are tested against.
Model codes: 0 translation/L1, 1 translation/L2, 2 diagonal bilinear,
3 complex bilinear.  Complex embeddings of logical dimension d are stored
as 2d reals, real halves first.
"""

from __future__ import annotations

import numpy as np

TRANSE_L1, TRANSE_L2, DISTMULT, COMPLEX = 0, 1, 2, 3

name = "numpy"
compiled = False


def _sigmoid_neg(m: np.ndarray) -> np.ndarray:
    """sigma(-m), computed as exp(-softplus(m)) to stay finite for any m."""
    return np.exp(-np.logaddexp(0.0, m))


def score_batch(ent, rel, h, r, t, code: int) -> np.ndarray:
    """Elementwise plausibility scores for index triples; higher is better."""
    H, R, T = ent[h], rel[r], ent[t]
    if code == TRANSE_L1:
        return -np.abs(H + R - T).sum(axis=1)
    if code == TRANSE_L2:
        return -np.sqrt(((H + R - T) ** 2).sum(axis=1))
    if code == DISTMULT:
        return (H * R * T).sum(axis=1)
    if code == COMPLEX:
        d = ent.shape[1] // 2
        hr, hi = H[:, :d], H[:, d:]
        rr, ri = R[:, :d], R[:, d:]
        tr, ti = T[:, :d], T[:, d:]
        return (rr * (hr * tr + hi * ti) + ri * (hr * ti - hi * tr)).sum(axis=1)
    raise ValueError(f"unknown model code {code}")


def loss_and_grad(ent, rel, h, r, t, y, code: int):
    """Summed logistic loss and exact per-example gradient rows.

    Returns (loss, gh, gr, gt) where each g* is (B, width) and row b is the
    partial of the summed loss with respect to the embedding row used by
    example b.  Rows for repeated indices are left separate; accumulation
    happens at update time.

    errstate: a diverging store yields inf/nan here; the training loop
    detects the non-finite loss and aborts with diagnostics.
    """
    with np.errstate(invalid="ignore", over="ignore"):
        return _loss_and_grad(ent, rel, h, r, t, y, code)


def _loss_and_grad(ent, rel, h, r, t, y, code: int):
    H, R, T = ent[h], rel[r], ent[t]
    d = ent.shape[1] // 2
    if code in (TRANSE_L1, TRANSE_L2):
        u = H + R - T
        if code == TRANSE_L1:
            f = -np.abs(u).sum(axis=1)
            dfdh = -np.sign(u)
        else:
            nrm = np.sqrt((u * u).sum(axis=1))
            f = -nrm
            safe = np.where(nrm > 0.0, nrm, 1.0)
            dfdh = -u / safe[:, None]
            dfdh[nrm == 0.0] = 0.0
        dfdr = dfdh
        dfdt = -dfdh
    elif code == DISTMULT:
        f = (H * R * T).sum(axis=1)
        dfdh = R * T
        dfdr = H * T
        dfdt = H * R
    elif code == COMPLEX:
        hr, hi = H[:, :d], H[:, d:]
        rr, ri = R[:, :d], R[:, d:]
        tr, ti = T[:, :d], T[:, d:]
        f = (rr * (hr * tr + hi * ti) + ri * (hr * ti - hi * tr)).sum(axis=1)
        dfdh = np.concatenate([rr * tr + ri * ti, rr * ti - ri * tr], axis=1)
        dfdr = np.concatenate([hr * tr + hi * ti, hr * ti - hi * tr], axis=1)
        dfdt = np.concatenate([rr * hr - ri * hi, rr * hi + ri * hr], axis=1)
    else:
        raise ValueError(f"unknown model code {code}")

    m = y * f
    loss = float(np.logaddexp(0.0, -m).sum())
    coef = (-y * _sigmoid_neg(m))[:, None]
    return loss, coef * dfdh, coef * dfdr, coef * dfdt


def sgd_step(ent, rel, h, r, t, y, lr: float, code: int) -> float:
    """One plain-SGD update in place; returns the summed batch loss.

    Gradients are taken against the embeddings as of batch start, then
    applied; repeated indices within a batch accumulate.
    """
    loss, gh, gr, gt = loss_and_grad(ent, rel, h, r, t, y, code)
    np.add.at(ent, h, -lr * gh)
    np.add.at(rel, r, -lr * gr)
    np.add.at(ent, t, -lr * gt)
    return loss


def renorm_rows(ent, rows) -> None:
    """Project the given entity rows onto the unit L2 sphere in place."""
    block = ent[rows]
    norms = np.sqrt((block * block).sum(axis=1))
    norms[norms == 0.0] = 1.0
    ent[rows] = block / norms[:, None]


def score_tails(ent, rel, h: int, r: int, code: int) -> np.ndarray:
    """Scores of (h, r, e) for every entity e."""
    if code in (TRANSE_L1, TRANSE_L2):
        q = ent[h] + rel[r]
        diff = q[None, :] - ent
        if code == TRANSE_L1:
            return -np.abs(diff).sum(axis=1)
        return -np.sqrt((diff * diff).sum(axis=1))
    if code == DISTMULT:
        return ent @ (ent[h] * rel[r])
    if code == COMPLEX:
        d = ent.shape[1] // 2
        hr, hi = ent[h, :d], ent[h, d:]
        rr, ri = rel[r, :d], rel[r, d:]
        return ent[:, :d] @ (rr * hr - ri * hi) + ent[:, d:] @ (rr * hi + ri * hr)
    raise ValueError(f"unknown model code {code}")


def score_heads(ent, rel, r: int, t: int, code: int) -> np.ndarray:
    """Scores of (e, r, t) for every entity e."""
    if code in (TRANSE_L1, TRANSE_L2):
        q = ent[t] - rel[r]
        diff = ent - q[None, :]
        if code == TRANSE_L1:
            return -np.abs(diff).sum(axis=1)
        return -np.sqrt((diff * diff).sum(axis=1))
    if code == DISTMULT:
        return ent @ (rel[r] * ent[t])
    if code == COMPLEX:
        d = ent.shape[1] // 2
        rr, ri = rel[r, :d], rel[r, d:]
        tr, ti = ent[t, :d], ent[t, d:]
        return ent[:, :d] @ (rr * tr + ri * ti) + ent[:, d:] @ (rr * ti - ri * tr)
    raise ValueError(f"unknown model code {code}")
