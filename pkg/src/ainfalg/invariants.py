"""K_0 rank, the K_0 comparison for quotients by DG ideals, and the motive report."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .ainf import AInfAlgebra
from .algebra import GradedAlgebra, format_vector
from .dg import DgAlgebra, is_dg_ideal
from .errors import AlgebraError
from .linalg import Subspace
from .radical import basic_reduction, powers, radical_data


@dataclass
class K0Report:
    rank: int
    simple_labels: list
    h0_dim: int


@dataclass
class MotiveReport:
    target: str
    split_rank: int | None
    rank: int
    block_sizes: list
    smoothness: str
    hypothesis_flags: list = dc_field(default_factory=list)

    @property
    def unit_type(self) -> bool:
        return self.split_rank is not None


def degree_zero_part(a: GradedAlgebra) -> GradedAlgebra:
    idx = a.degree_indices(0)
    return a.restrict([a.std(i) for i in idx], names=[a.names[i] for i in idx], degrees=[0] * len(idx))


def h0_algebra(A) -> GradedAlgebra:
    """H^0 as an ungraded algebra, for a DG algebra, a minimal A-infinity algebra or a graded algebra."""
    if isinstance(A, DgAlgebra):
        return degree_zero_part(A.cohomology())
    if isinstance(A, AInfAlgebra):
        if not A.is_minimal:
            raise AlgebraError("H^0 of a non-minimal A-infinity algebra is not computed; pass a minimal model")
        return degree_zero_part(A.underlying())
    if isinstance(A, GradedAlgebra):
        return degree_zero_part(A)
    raise TypeError(f"unsupported input {type(A).__name__}")


def k0_rank(A) -> K0Report:
    """Rank of K_0: the number of isoclasses of primitive idempotents of H^0 / rad."""
    H0 = h0_algebra(A)
    if H0.dim == 0:
        return K0Report(0, [], 0)
    rd = radical_data(H0)
    basic, n = basic_reduction(H0)
    labels = []
    seen = set()
    for e, lab in zip(rd.idempotents, rd.classes):
        if lab not in seen:
            seen.add(lab)
            labels.append(format_vector(H0, e))
    return K0Report(n, labels, H0.dim)


def _h0_image(A: DgAlgebra, I: Subspace) -> Subspace:
    """Image of H^0(I) in H^0(A)."""
    a = A.algebra
    f = a.field
    r = A.retraction
    idx0 = set(a.degree_indices(0))
    deg0 = Subspace(f, a.dim, [a.std(i) for i in idx0])
    I0 = I.intersect(deg0)
    # cocycles inside I^0
    from .linalg import Matrix, kernel_basis

    vecs = I0.basis()
    if not vecs:
        return Subspace(f, r.cohomology.dim)
    cols = [A.diff_dense(v) for v in vecs]
    M = Matrix(f, a.dim, len(vecs), tuple(tuple(c[i] for c in cols) for i in range(a.dim)))
    ker = kernel_basis(M)
    out = []
    for k in ker:
        v = [sum((c * vec[i] for c, vec in zip(k, vecs)), f.zero) for i in range(a.dim)]
        out.append(r.cohomology.dense(r.proj({i: x for i, x in enumerate(v) if x})))
    return Subspace(f, r.cohomology.dim, out)


def k0_quotient_compare(A: DgAlgebra, ideal) -> dict:
    """Ranks of K_0(A) and K_0(A/I); they agree whenever H^0(I) is nilpotent in H^0(A)."""
    a = A.algebra
    I = ideal if isinstance(ideal, Subspace) else Subspace(a.field, a.dim, [list(v) for v in ideal])
    if not is_dg_ideal(A, I):
        raise AlgebraError("not a DG ideal (closed under d and two-sided multiplication)")
    img = _h0_image(A, I)
    H = A.cohomology()
    chain = powers(H, img) if img.dim else [img]
    nilpotent = chain[-1].dim == 0
    rank_a = k0_rank(A).rank
    rank_q = k0_rank(A.quotient(I)).rank
    out = {
        "rank_a": rank_a,
        "rank_quotient": rank_q,
        "equal": rank_a == rank_q,
        "hypothesis_met": nilpotent,
        "h0_ideal_dim": img.dim,
    }
    if not nilpotent:
        out["note"] = "hypothesis not met: H^0(I) is not nilpotent"
    elif rank_a != rank_q:
        raise AssertionError("K_0 ranks differ although H^0(I) is nilpotent")
    return out


def motive_report(A, smoothness=None, claims: dict | None = None) -> MotiveReport:
    """U(A) = U(S) with S = H^0/rad; unit type U(k)^n when S splits.

    ``smoothness`` is a verdict from the smoothness probe; when omitted the
    probe is run. ``claims`` may carry {"smooth": source} from the input file,
    which is reported as an assertion and never as a verification.
    """
    from .smoothness import NotSmooth, Smooth, smoothness_probe

    flags = []
    H0 = h0_algebra(A)
    rd = radical_data(H0)
    rep = k0_rank(A)
    sizes = []
    for lab in sorted(set(rd.classes)):
        sizes.append(rd.classes.count(lab))
    S_desc = " x ".join("k" if s == 1 else f"M_{s}(k)" for s in sizes) or "0"
    split_rank = len(sizes)
    target = f"U(A) = U({S_desc}) = U(k)^{split_rank}" if split_rank else "U(A) = 0"
    if smoothness is None:
        smoothness = smoothness_probe(A)
    if isinstance(smoothness, Smooth):
        status = f"verified: {smoothness}"
    else:
        status = str(smoothness)
        claimed = (claims or {}).get("smooth")
        if isinstance(smoothness, NotSmooth):
            flags.append("smoothness fails: the unit-type statement is not covered")
        elif claimed:
            flags.append(f"smoothness asserted by the input ({claimed}), not verified")
        else:
            flags.append("smoothness unverified: the unit-type statement is conditional")
    connective = (A.algebra.is_connective() if isinstance(A, DgAlgebra)
                  else A.is_connective() if isinstance(A, (AInfAlgebra, GradedAlgebra)) else False)
    if not connective:
        flags.append("input is not connective")
    return MotiveReport(target, split_rank, rep.rank, sizes, status, flags)
