"""Named systems used as fixtures, templates and CLI shortcuts."""

from __future__ import annotations

import numpy as np

from linnorm.fq import LinearSystem
from linnorm.ops import subdivide


def identity(m: int, q: int) -> LinearSystem:
    return LinearSystem(np.eye(m, dtype=np.int64), q)


def schatten_equation(r: int, q: int, a: int = 1) -> LinearSystem:
    """a(x_1 + ... + x_r) = a(x_{r+1} + ... + x_{2r})."""
    return LinearSystem([[a] * r + [-a] * r], q)


def chain(m: int, q: int) -> LinearSystem:
    """(m-1) x m system x_1 = x_2 = ... = x_m, so t(f) = E[f^m]."""
    rows = np.zeros((m - 1, m), dtype=np.int64)
    for i in range(m - 1):
        rows[i, i], rows[i, i + 1] = 1, -1
    return LinearSystem(rows, q, k=m)


def u2(q: int) -> LinearSystem:
    return LinearSystem([[1, -1, -1, 1]], q)


def triple_equal(q: int) -> LinearSystem:
    return chain(3, q)


def disjoint_pair(r: int, q: int) -> LinearSystem:
    """x_1+..+x_r = x_{r+1}+..+x_{2r} and x_{2r+1}+..+x_{3r} = x_{3r+1}+..+x_{4r}."""
    one = [1] * r + [-1] * r
    zero = [0] * (2 * r)
    return LinearSystem([one + zero, zero + one], q)


def triple_schatten(r: int, q: int) -> LinearSystem:
    """x_1 - x_2 + ... - x_{2r} = x_{2r+1} - ... - x_{4r} = x_{4r+1} - ... - x_{6r}."""
    alt = [(-1) ** i for i in range(2 * r)]
    neg = [-a for a in alt]
    zero = [0] * (2 * r)
    return LinearSystem([alt + neg + zero, zero + alt + neg], q)


def k23(q: int) -> LinearSystem:
    return LinearSystem([[1, -1, -1, 1, 0, 0], [0, 0, 1, -1, -1, 1]], q)


def deletion_example(q: int) -> LinearSystem:
    return LinearSystem(
        [[1, -1, 0, 0, 0], [1, 1, -2, 0, 0], [0, 0, -2, 1, 1], [0, 0, 0, 1, -1]], q
    )


def one_sub_k4(q: int) -> LinearSystem:
    """2 x 7 forcing system that is not weakly norming."""
    return LinearSystem([[1, 1, -1, -1, 0, 0, 0], [0, 0, 0, 1, 1, -1, -1]], q)


def k41_sub(q: int) -> LinearSystem:
    """3 x 12 system of the 1-subdivision of K_4."""
    return LinearSystem(
        [
            [1, -1, 1, -1, 1, -1, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, -1, 1, -1, 1, -1, 1, 0, 0],
            [-1, 1, 0, 0, 0, 0, 1, -1, 0, 0, 1, -1],
        ],
        q,
    )


def k33(q: int) -> LinearSystem:
    """4 x 9 grid system of K_{3,3} in the displayed form."""
    return LinearSystem(
        [
            [1, -1, 1, -1, 0, 0, 0, 0, 0],
            [0, 0, -1, 1, -1, 1, 0, 0, 0],
            [-1, 0, 0, 1, 0, 0, 1, -1, 0],
            [0, 0, -1, 0, 0, 1, 0, 1, -1],
        ],
        q,
    )


def norming_templates(q: int) -> dict[str, LinearSystem]:
    """Systems known to be norming (Holder holds for real functions)."""
    out = {
        "schatten_1": schatten_equation(1, q),
        "schatten_2": schatten_equation(2, q),
        "schatten_3": schatten_equation(3, q),
        "u2": u2(q),
        "sub1_identity_2": subdivide(identity(2, q), 1),
        "sub2_identity_1": subdivide(identity(1, q), 2),
        "sub2_identity_2": subdivide(identity(2, q), 2),
        "chain_4": chain(4, q),
        "disjoint_pair_2": disjoint_pair(2, q),
    }
    return out


def weakly_norming_templates(q: int) -> dict[str, LinearSystem]:
    """Weakly norming systems; includes every norming template."""
    out = dict(norming_templates(q))
    out.update(
        {
            "triple_equal": triple_equal(q),
            "triple_schatten_1": triple_schatten(1, q),
            "triple_schatten_2": triple_schatten(2, q),
            "k23": k23(q),
            "sub1_triple_equal_2": subdivide(triple_equal(q), 2),
        }
    )
    return out


NAMED = {
    "u2": u2,
    "k23": k23,
    "deletion": deletion_example,
    "1-subK4": one_sub_k4,
    "K41sub": k41_sub,
    "K33": k33,
    "L3": triple_equal,
}
