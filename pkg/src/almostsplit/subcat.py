"""Exact subcategories given by generators, stable approximations and torsion pairs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import exactfield as ef
from .artrans import AlmostSplitCertificate, almost_split_sequence, dtr, ext_socle, verify_ass
from .extensions import (
    ExtClass,
    ShortExact,
    class_to_ses,
    ext_dim,
    ext_space,
    pullback,
    pushout,
    stable_hom_inj,
)
from .repcore import (
    CERTIFIED,
    Rep,
    RepError,
    RepMorphism,
    combine,
    decompose,
    direct_sum,
    dual,
    dual_morphism,
    hom_basis,
    induced_from_quotient,
    is_injective,
    is_projective,
    iso_between_indecomposables,
    quotient_rep,
    require_indecomposable,
    restrict,
    subrep,
    zero_map,
    zero_rep,
)

EXHAUSTIVE_LIMIT = 512


class SubcatError(RepError):
    pass


@dataclass(frozen=True)
class ClosureReport:
    verdict: str  # "closed" | "not_closed" | "unchecked"
    sampled: bool = False  # some Ext space was only checked on a basis plus samples
    witness: str = ""


@dataclass(frozen=True, eq=False)
class SubcatSpec:
    """add(gens): finite direct sums of the (pairwise non-isomorphic) generators."""

    gens: tuple[Rep, ...]
    closure: ClosureReport
    name: str = "C"

    @property
    def quiver(self):
        return self.gens[0].quiver if self.gens else None

    def index_of(self, m: Rep) -> Optional[int]:
        for k, g in enumerate(self.gens):
            if g.dimvec == m.dimvec and iso_between_indecomposables(g, m) is not None:
                return k
        return None


@dataclass(frozen=True)
class Membership:
    verdict: str  # "member" | "non_member" | "undetermined"
    parts: tuple[tuple[int, int], ...] = ()  # (generator index, multiplicity)
    witness: str = ""

    def __bool__(self):
        return self.verdict == "member"


def _unique_indecs(gens: Sequence[Rep], seed: int) -> list[Rep]:
    out: list[Rep] = []
    for g in gens:
        require_indecomposable(g, seed, SubcatError)
        if not any(iso_between_indecomposables(h, g) is not None for h in out if h.dimvec == g.dimvec):
            out.append(g)
    return out


def membership(m: Rep, c: SubcatSpec, seed: int = 0) -> Membership:
    if m.is_zero():
        return Membership("member")
    parts = []
    for part in decompose(m, seed).parts:
        if part.verdict != CERTIFIED:
            return Membership("undetermined", witness=f"summand {list(part.rep.dimvec)} not certified")
        k = c.index_of(part.rep)
        if k is None:
            return Membership("non_member", witness=f"summand {list(part.rep.dimvec)} is not a generator")
        parts.append((k, part.multiplicity))
    return Membership("member", tuple(parts))


def extension_closure(gens: Sequence[Rep], seed: int = 0, samples: int = 8) -> ClosureReport:
    """Decompose middle terms of extensions between generators and test membership.

    An Ext space of dimension <= 1 is exhaustive up to scaling (rescaling a
    class does not change its middle term up to isomorphism); spaces with
    p^d <= EXHAUSTIVE_LIMIT are enumerated; larger ones use a basis plus
    seeded samples and are flagged.
    """
    probe = SubcatSpec(tuple(gens), ClosureReport("unchecked"))
    rng = np.random.default_rng(seed)
    sampled = False
    for a in gens:
        for b in gens:
            sp = ext_space(a, b)
            d = sp.dim
            if d == 0:
                continue
            if d == 1:
                classes = sp.basis()
            elif sp.p ** d <= EXHAUSTIVE_LIMIT:
                classes = [sp.element(v) for v in itertools.product(range(sp.p), repeat=d) if any(v)]
            else:
                sampled = True
                classes = sp.basis() + [sp.element(rng.integers(0, sp.p, size=d)) for _ in range(samples)]
            for cl in classes:
                y = class_to_ses(cl).Y
                if membership(y, probe, seed).verdict != "member":
                    return ClosureReport("not_closed", sampled,
                                         f"extension of {list(a.dimvec)} by {list(b.dimvec)} "
                                         f"has middle term {list(y.dimvec)} outside the subcategory")
    return ClosureReport("closed", sampled)


def make_subcat(gens: Sequence[Rep], name: str = "C", seed: int = 0, check_closure: bool = True) -> SubcatSpec:
    uniq = _unique_indecs(gens, seed)
    closure = extension_closure(uniq, seed) if check_closure else ClosureReport("unchecked")
    return SubcatSpec(tuple(uniq), closure, name)


def _require_member(m: Rep, c: SubcatSpec) -> None:
    if membership(m, c).verdict != "member":
        raise SubcatError(f"representation with dims {list(m.dimvec)} is not in {c.name}")


def is_ext_projective_in(z: Rep, c: SubcatSpec) -> bool:
    _require_member(z, c)
    return all(ext_dim(z, L) == 0 for L in c.gens)


def is_ext_injective_in(x: Rep, c: SubcatSpec) -> bool:
    _require_member(x, c)
    return all(ext_dim(L, x) == 0 for L in c.gens)


# ---------------------------------------------------------------------------
# stable approximations


@dataclass(frozen=True, eq=False)
class Approximation:
    """``f: M -> x`` (right) or ``f: x -> M`` (left), ``M = ⊕ summands``."""

    f: RepMorphism
    summands: tuple[Rep, ...]
    generator_indices: tuple[int, ...]
    minimal: bool

    @property
    def source(self) -> Rep:
        return self.f.src


def _assemble(x: Rep, pieces: Sequence[tuple[Rep, RepMorphism]]) -> RepMorphism:
    if not pieces:
        return zero_map(zero_rep(x.quiver, x.p), x)
    src = direct_sum([r for r, _ in pieces])
    comps = {v: np.concatenate([h.comps[v] for _, h in pieces], axis=1) for v in x.quiver.vertices}
    return RepMorphism(src, x, comps)


def _covers(f: RepMorphism, gens: Sequence[Rep]) -> bool:
    """Whether Hom-bar(L, M) -> Hom-bar(L, x) is onto for every generator L."""
    x = f.dst
    for L in gens:
        target = stable_hom_inj(L, x)
        if target.dim == 0:
            continue
        cols = [target.coords(f @ g) for g in hom_basis(L, f.src)]
        if not cols or ef.rank(np.stack(cols, axis=1), x.p) < target.dim:
            return False
    return True


def right_stable_approx(x: Rep, c: SubcatSpec) -> Approximation:
    """Minimal right injectively stable approximation of ``x`` by ``c``."""
    pieces: list[tuple[Rep, RepMorphism, int]] = []
    for k, L in enumerate(c.gens):
        if is_injective(L):
            continue
        for h in stable_hom_inj(L, x).reps():
            pieces.append((L, h, k))
    if not _covers(_assemble(x, [(r, h) for r, h, _ in pieces]), c.gens):
        raise SubcatError("universal map fails to approximate")  # pragma: no cover
    keep = list(pieces)
    for piece in list(pieces):
        trial = [t for t in keep if t is not piece]
        if _covers(_assemble(x, [(r, h) for r, h, _ in trial]), c.gens):
            keep = trial
    f = _assemble(x, [(r, h) for r, h, _ in keep])
    minimal = all(not _covers(_assemble(x, [(r, h) for j, (r, h, _) in enumerate(keep) if j != i]), c.gens)
                  for i in range(len(keep)))
    return Approximation(f, tuple(r for r, _, _ in keep), tuple(k for _, _, k in keep), minimal)


def left_stable_approx(x: Rep, c: SubcatSpec) -> Approximation:
    """Minimal left projectively stable approximation, via duality."""
    dc = SubcatSpec(tuple(dual(g) for g in c.gens), c.closure, c.name + "^op")
    a = right_stable_approx(dual(x), dc)
    return Approximation(dual_morphism(a.f), tuple(dual(r) for r in a.summands), a.generator_indices, a.minimal)


# ---------------------------------------------------------------------------
# almost split sequences inside the subcategory


@dataclass(frozen=True, eq=False)
class SubcatASS:
    kind: str  # "ext_projective" | "sequence"
    approximation: Optional[Approximation] = None
    eta: Optional[ExtClass] = None
    sequence: Optional[ShortExact] = None
    certificate: Optional[AlmostSplitCertificate] = None
    witness: str = ""


def _pushout_matrix(f: RepMorphism, z: Rep) -> np.ndarray:
    src = ext_space(z, f.src)
    cols = [pushout(f, e).coords for e in src.basis()]
    dst = ext_space(z, f.dst)
    return np.stack(cols, axis=1) if cols else ef.zeros(dst.dim, 0)


def subcat_ass(z: Rep, c: SubcatSpec, seed: int = 0, budget: int = 64) -> SubcatASS:
    """The almost split sequence in ``c`` ending at ``z``, or the Ext-projective verdict."""
    _require_member(z, c)
    require_indecomposable(z, seed, SubcatError)
    if is_projective(z):
        return SubcatASS("ext_projective", witness="projective in the ambient category")
    x = dtr(z)
    approx = right_stable_approx(x, c)
    f = approx.f
    if f.src.is_zero():
        return SubcatASS("ext_projective", approx, witness="stable approximation of DTr is zero")
    m = f.src
    dm = decompose(m, seed)
    if len(dm.parts) != 1 or dm.parts[0].multiplicity != 1:
        raise SubcatError("internal failure: approximation source is decomposable")
    a = _pushout_matrix(f, z)
    if ef.rank(a, z.p) != a.shape[1]:
        raise SubcatError("internal failure: pushout along the approximation is not injective")
    delta = almost_split_sequence(z, seed).delta
    ends = hom_basis(z, z)
    rng = np.random.default_rng(seed)
    trials = list(ends) + [combine(ends, rng.integers(0, z.p, size=len(ends)), z, z) for _ in range(budget)]
    for g in trials:
        target = pullback(delta, g)
        if target.is_zero():
            continue
        sol = ef.solve(a, target.coords.reshape(-1, 1), z.p)
        if sol is not None:
            eta = ext_space(z, m).element(sol[:, 0])
            seq = class_to_ses(eta)
            cert = verify_ass(seq, c.gens)
            return SubcatASS("sequence", approx, eta, seq, cert)
    raise SubcatError("falsification witness: no End(z)-translate of the ambient class "
                      "lies in the image of the approximation")


@dataclass(frozen=True, eq=False)
class ApproximationRecovery:
    """Result of searching the subcategory sequence directly and comparing with the ambient one."""

    found: bool
    left_end: Optional[Rep] = None
    comparison: Optional[RepMorphism] = None  # M -> DTr z
    approximates: bool = False
    minimal: bool = False
    matches_constructed: bool = False


def recover_approximation(z: Rep, c: SubcatSpec, seed: int = 0) -> ApproximationRecovery:
    """Find an almost split sequence of ``c`` ending at ``z`` by scanning socle classes,
    then check that its comparison map into the ambient sequence is a minimal right
    stable approximation of DTr z."""
    x = dtr(z)
    delta = almost_split_sequence(z, seed).delta
    for m in c.gens:
        if is_injective(m) or ext_dim(z, m) == 0:
            continue
        soc = ext_socle(z, m)
        for k in range(soc.shape[1]):
            eta = ext_space(z, m).element(soc[:, k])
            if not verify_ass(class_to_ses(eta), c.gens).valid:
                continue
            basis = hom_basis(m, x)
            cols = [pushout(u, eta).coords for u in basis]
            a = np.stack(cols, axis=1) if cols else ef.zeros(delta.space.dim, 0)
            sol = ef.solve(a, delta.coords.reshape(-1, 1), z.p)
            if sol is None:
                return ApproximationRecovery(True, m)
            u = combine(basis, sol[:, 0], m, x)
            approximates = _covers(u, c.gens)
            minimal = approximates and not _covers(zero_map(zero_rep(x.quiver, x.p), x), c.gens)
            constructed = right_stable_approx(x, c)
            same = (len(constructed.summands) == 1
                    and iso_between_indecomposables(constructed.summands[0], m) is not None)
            return ApproximationRecovery(True, m, u, approximates, minimal, same)
    return ApproximationRecovery(False)


# ---------------------------------------------------------------------------
# torsion pairs


class TorsionError(SubcatError):
    pass


@dataclass(frozen=True, eq=False)
class TorsionPair:
    torsion: SubcatSpec
    free: SubcatSpec
    name: str = "T"


def make_torsion_pair(torsion: Sequence[Rep], free: Sequence[Rep], name: str = "T", seed: int = 0) -> TorsionPair:
    t = make_subcat(torsion, name + ".torsion", seed, check_closure=False)
    f = make_subcat(free, name + ".free", seed, check_closure=False)
    for a in t.gens:
        for b in f.gens:
            if hom_basis(a, b):
                raise TorsionError(f"nonzero map from torsion generator {list(a.dimvec)} "
                                   f"to free generator {list(b.dimvec)}")
    return TorsionPair(t, f, name)


def trace(x: Rep, gens: Sequence[Rep]) -> tuple[Rep, RepMorphism]:
    """Largest subobject generated by ``gens``: images of all maps, iterated until stable."""
    p = x.p
    bases = {v: ef.zeros(x.dims[v], 0) for v in x.quiver.vertices}
    while True:
        qr = quotient_rep(x, bases)
        new = {}
        for v in x.quiver.vertices:
            cols = [bases[v]]
            for L in gens:
                for h in hom_basis(L, qr.rep):
                    cols.append(ef.mul(qr.section[v], h.comps[v], p))
            new[v] = ef.column_basis(np.concatenate(cols, axis=1), p)
        if all(new[v].shape[1] == bases[v].shape[1] for v in bases):
            return subrep(x, bases)
        bases = new


def torsion_canonical_seq(x: Rep, t: TorsionPair, seed: int = 0) -> ShortExact:
    """``0 -> t(x) -> x -> f(x) -> 0`` with membership of both ends checked."""
    tx, incl = trace(x, t.torsion.gens)
    qr = quotient_rep(x, {v: m for v, m in incl.comps.items()})
    seq = ShortExact(incl, qr.proj)
    if membership(tx, t.torsion, seed).verdict != "member":
        raise TorsionError(f"not a torsion pair on this object: trace {list(tx.dimvec)} is not torsion")
    if membership(qr.rep, t.free, seed).verdict != "member":
        raise TorsionError(f"not a torsion pair on this object: quotient {list(qr.rep.dimvec)} is not torsion-free")
    return seq


@dataclass(frozen=True, eq=False)
class TransferResult:
    sequence: ShortExact
    certificate: AlmostSplitCertificate


def torsion_transfer_ass(s: ShortExact, t: TorsionPair, side: str, seed: int = 0) -> TransferResult:
    if side == "torsion":
        if membership(s.Z, t.torsion, seed).verdict != "member":
            raise TorsionError("precondition: the right end is not torsion")
        if is_ext_projective_in(s.Z, t.torsion):
            raise TorsionError("precondition: the right end is Ext-projective in the torsion class "
                               "(Ext^1(Z, L) = 0 for every torsion generator L)")
        ty, iy = trace(s.Y, t.torsion.gens)
        tx, ix = trace(s.X, t.torsion.gens)
        seq = ShortExact(restrict(s.i, ix, iy), s.p @ iy)
        return TransferResult(seq, verify_ass(seq, t.torsion.gens))
    if side == "free":
        if membership(s.X, t.free, seed).verdict != "member":
            raise TorsionError("precondition: the left end is not torsion-free")
        if is_ext_injective_in(s.X, t.free):
            raise TorsionError("precondition: the left end is Ext-injective in the torsion-free class "
                               "(Ext^1(L, X) = 0 for every torsion-free generator L)")
        _, iy = trace(s.Y, t.torsion.gens)
        _, iz = trace(s.Z, t.torsion.gens)
        qy = quotient_rep(s.Y, dict(iy.comps))
        qz = quotient_rep(s.Z, dict(iz.comps))
        seq = ShortExact(qy.proj @ s.i, induced_from_quotient(qy, qz.proj @ s.p))
        return TransferResult(seq, verify_ass(seq, t.free.gens))
    raise TorsionError(f"unknown side {side!r}")


def enumerate_torsion_pairs(indecs: Sequence[Rep]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All torsion pairs of a representation-finite category, as index sets into ``indecs``.

    A pair is (T, F) with F = T^perp and T = perp F, found by scanning subsets.
    """
    n = len(indecs)
    homs = [[bool(hom_basis(a, b)) for b in indecs] for a in indecs]
    seen = set()
    out = []
    for mask in range(1 << n):
        tset = [i for i in range(n) if mask >> i & 1]
        fset = tuple(j for j in range(n) if not any(homs[i][j] for i in tset))
        tclosed = tuple(i for i in range(n) if not any(homs[i][j] for j in fset))
        if tuple(tset) == tclosed and tclosed not in seen:
            seen.add(tclosed)
            out.append((tclosed, fset))
    return out


__all__ = [
    "SubcatError", "ClosureReport", "SubcatSpec", "Membership", "membership", "make_subcat",
    "extension_closure", "is_ext_projective_in", "is_ext_injective_in",
    "Approximation", "right_stable_approx", "left_stable_approx",
    "SubcatASS", "subcat_ass", "ApproximationRecovery", "recover_approximation",
    "TorsionError", "TorsionPair", "make_torsion_pair", "trace", "torsion_canonical_seq",
    "TransferResult", "torsion_transfer_ass", "enumerate_torsion_pairs",
]
