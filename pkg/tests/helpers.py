"""Random small algebras for property tests."""

import random

from ainfalg.algebra import path_algebra
from ainfalg.dg import DgAlgebra
from ainfalg.field import QQ


def random_acyclic_quiver(rng: random.Random, n_vertices: int, n_arrows: int):
    vertices = [str(i) for i in range(1, n_vertices + 1)]
    arrows = []
    for k in range(n_arrows):
        s = rng.randrange(1, n_vertices)
        t = rng.randrange(s + 1, n_vertices + 1)
        arrows.append((chr(ord("p") + k), str(s), str(t)))
    return vertices, arrows


def random_degree0_algebra(rng: random.Random, max_dim: int = 6, field=QQ):
    """A random basic algebra concentrated in degree 0: an acyclic quiver,
    possibly truncated, or a truncated polynomial ring."""
    while True:
        kind = rng.choice(["quiver", "quiver", "loop"])
        if kind == "loop":
            m = rng.randint(1, max_dim)
            g = path_algebra(field, ["1"], [("x", "1", "1")], max_length=m - 1) if m > 1 else \
                path_algebra(field, ["1"], [])
        else:
            nv = rng.randint(1, 4)
            na = rng.randint(0, 4) if nv > 1 else 0
            verts, arrows = random_acyclic_quiver(rng, nv, na)
            g = path_algebra(field, verts, arrows, max_length=rng.choice([None, 1, 2]))
        if g.dim <= max_dim:
            return g


def _leibniz(g, d_arrows: dict) -> dict:
    """Extend d from arrows to all paths by the Leibniz rule (paths are named by arrow words)."""
    d = {}
    # single-letter arrows; a path name is the concatenation of its arrows
    for i, name in enumerate(g.names):
        if name.startswith("e"):
            continue
        total = {}
        prefix_deg = 0
        for pos, letter in enumerate(name):
            dl = d_arrows.get(letter)
            if dl:
                left = g.element(name[:pos]) if pos else None
                right = g.element(name[pos + 1:]) if pos + 1 < len(name) else None
                term = dl
                if left is not None:
                    term = g.mul(left, term)
                if right is not None:
                    term = g.mul(term, right)
                sign = -1 if prefix_deg % 2 else 1
                for k, c in term.items():
                    total[k] = total.get(k, 0) + sign * c
            prefix_deg += g.degrees[g.index(letter)]
        total = {k: c for k, c in total.items() if c}
        if total:
            d[i] = total
    return d


def random_connective_dga(rng: random.Random, field=QQ, max_dim: int = 16):
    """Acyclic quiver with arrows in degrees 0 and -1; d kills degree-0 arrows and
    sends a degree -1 arrow to a random combination of degree-0 paths with the
    same endpoints. d^2 = 0 holds since d vanishes on degree-0 paths. A square
    s -> m -> t with a degree -1 arrow s -> t is planted so d is usually nonzero."""
    while True:
        if rng.random() < 0.35:
            # Massey pattern: x y z composable, d u = c1 xy, d v = c2 yz
            verts, arrows = random_acyclic_quiver(rng, 4, rng.randint(0, 1))
            degrees = {a: 0 for a, _, _ in arrows}
            arrows += [("x", "1", "2"), ("y", "2", "3"), ("z", "3", "4"), ("u", "1", "3"), ("v", "2", "4")]
            degrees.update(x=0, y=0, z=0, u=-1, v=-1)
        else:
            nv = rng.randint(3, 4)
            verts, arrows = random_acyclic_quiver(rng, nv, rng.randint(0, 3))
            degrees = {a: rng.choice([0, 0, -1]) for a, _, _ in arrows}
            m = rng.randint(2, nv - 1)
            arrows += [("x", "1", str(m)), ("y", str(m), str(nv)), ("u", "1", str(nv))]
            degrees.update(x=0, y=0, u=-1)
        g = path_algebra(field, verts, arrows, degrees=degrees)
        if g.dim > max_dim:
            continue
        d_arrows = {}
        for a, s, t in arrows:
            if degrees[a] != -1:
                continue
            targets = [i for i, n in enumerate(g.names)
                       if not n.startswith("e") and len(n) >= 2 and g.degrees[i] == 0
                       and g.vertices[i] == (s, t)]
            vec = {i: field(rng.randint(-2, 2)) for i in targets}
            vec = {i: c for i, c in vec.items() if c}
            if vec:
                d_arrows[a] = vec
        return DgAlgebra(g, _leibniz(g, d_arrows))
