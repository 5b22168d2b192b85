"""Helpers for sparse vectors (dicts index -> scalar) and multilinear tables.

A multilinear table maps a tuple of basis indices to a sparse vector; absent
keys are zero.
"""

from __future__ import annotations

import itertools


def add_into(acc: dict, vec: dict, coeff=1) -> dict:
    for k, c in vec.items():
        v = acc.get(k)
        v = c * coeff if v is None else v + c * coeff
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def scale(vec: dict, c) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in vec.items()}


def to_dense(vec: dict, n: int, field) -> list:
    out = [field.zero] * n
    for k, v in vec.items():
        out[k] = v
    return out


def from_dense(v) -> dict:
    return {i: x for i, x in enumerate(v) if x}


def apply_table(table: dict, args: list[dict]) -> dict:
    """Evaluate a multilinear table on sparse vectors."""
    out: dict = {}
    if any(not a for a in args):
        return out
    if len(args) == 1:
        for i, c in args[0].items():
            val = table.get((i,))
            if val:
                add_into(out, val, c)
        return out
    # iterate over the (usually small) set of nonzero table entries when that is cheaper
    nprod = 1
    for a in args:
        nprod *= len(a)
    if nprod > len(table):
        for key, val in table.items():
            c = 1
            for a, k in zip(args, key):
                x = a.get(k)
                if x is None:
                    c = None
                    break
                c = c * x
            if c is not None and c:
                add_into(out, val, c)
        return out
    for combo in itertools.product(*(list(a.items()) for a in args)):
        key = tuple(k for k, _ in combo)
        val = table.get(key)
        if val:
            c = 1
            for _, x in combo:
                c = c * x
            add_into(out, val, c)
    return out


def clean_table(table: dict) -> dict:
    return {k: {i: c for i, c in v.items() if c} for k, v in table.items() if any(v.values())}


def sparse_solve(equations, zero, one):
    """Solve sparse linear equations.

    ``equations`` is an iterable of (row, rhs) with ``row`` a dict
    variable -> coefficient. Returns a dict of variable values (free variables
    set to zero, absent from the dict) or None when inconsistent.
    """
    pivots = {}  # pivot variable -> (row without pivot, rhs), pivot coefficient 1
    order = []
    for row, rhs in equations:
        row = {k: c for k, c in row.items() if c}
        # reduce against known pivots until no pivot variable remains
        while True:
            hit = next((v for v in row if v in pivots), None)
            if hit is None:
                break
            c = row.pop(hit)
            prow, prhs = pivots[hit]
            add_into(row, prow, -c)
            rhs = rhs - c * prhs
        if not row:
            if rhs:
                return None
            continue
        var = min(row, key=repr)
        c = row.pop(var)
        inv = one / c
        pivots[var] = ({k: x * inv for k, x in row.items()}, rhs * inv)
        order.append(var)
    values = {}
    for var in reversed(order):
        prow, prhs = pivots[var]
        val = prhs
        for k, c in prow.items():
            x = values.get(k)
            if x:
                val = val - c * x
        if val:
            values[var] = val
    return values
