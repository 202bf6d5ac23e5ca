import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from almostsplit import exactfield as ef
from almostsplit.repcore import (
    CERTIFIED,
    PrimeTooSmall,
    Rep,
    RepError,
    RepMorphism,
    cokernel,
    decompose,
    direct_sum,
    dual,
    end_algebra,
    factor_through,
    hom_basis,
    hom_dim,
    image,
    injective,
    injective_envelope,
    is_injective,
    is_isomorphic,
    is_projective,
    kernel,
    minimal_injective_copresentation,
    minimal_projective_presentation,
    projective,
    projective_cover,
    simple,
    socle,
    top,
)

from conftest import P, a2, a3, d4, kronecker
from helpers import hom_dim_oracle, random_rep, scrambled_sum, transport

QUIVERS = {"A2": a2, "A3": a3, "D4": d4, "K2": kronecker}


def rep_strategy(p=P, max_dim=3):
    return st.tuples(st.sampled_from(sorted(QUIVERS)), st.integers(0, 2**32 - 1),
                     st.lists(st.integers(0, max_dim), min_size=4, max_size=4)).map(
        lambda t: _mk(QUIVERS[t[0]](), p, t[2], t[1]))


def _mk(q, p, dims, seed):
    rng = np.random.default_rng(seed)
    return random_rep(q, p, dict(zip(q.vertices, dims)), rng)


def test_rep_validation():
    q = a2()
    with pytest.raises(RepError):
        Rep(q, P, {"1": 1, "2": 1}, {"a": [[1, 1]]})
    with pytest.raises(RepError):
        Rep(q, P, {"1": 1}, {"z": [[1]]})
    with pytest.raises(ef.FieldError):
        Rep(q, 12, {"1": 1})
    m = Rep(q, P, {"1": 1, "2": 1}, {"a": [[1]]})
    with pytest.raises(RepError):
        RepMorphism(m, simple(q, P, "2"), {"2": [[1]]})  # square for a fails


def test_projective_injective_shapes():
    q = a3()
    assert projective(q, P, "1").dimvec == (1, 1, 1)
    assert projective(q, P, "3").dimvec == (0, 0, 1)
    assert injective(q, P, "3").dimvec == (1, 1, 1)
    assert injective(q, P, "1").dimvec == (1, 0, 0)
    q = kronecker()
    assert projective(q, P, "1").dimvec == (1, 2)
    assert injective(q, P, "2").dimvec == (2, 1)


@settings(max_examples=40, deadline=None)
@given(rep_strategy(), st.integers(0, 2**32 - 1))
def test_hom_dim_matches_entrywise_oracle(m, seed):
    n = _mk(m.quiver, m.p, list(np.random.default_rng(seed).integers(0, 3, size=4)), seed)
    assert hom_dim(m, n) == hom_dim_oracle(m, n)
    for f in hom_basis(m, n):
        assert f.src == m and f.dst == n


@settings(max_examples=30, deadline=None)
@given(rep_strategy())
def test_yoneda(m):
    q = m.quiver
    for x in q.vertices:
        assert hom_dim(projective(q, m.p, x), m) == m.dims[x]
        assert hom_dim(m, injective(q, m.p, x)) == m.dims[x]


@settings(max_examples=30, deadline=None)
@given(rep_strategy())
def test_kernel_image_cokernel(m):
    n = _mk(m.quiver, m.p, [2, 1, 2, 1], 5)
    basis = hom_basis(m, n)
    if not basis:
        return
    rng = np.random.default_rng(0)
    f = basis[0]
    for g in basis[1:]:
        f = f + g.scale(int(rng.integers(1, m.p)))
    k, inc = kernel(f)
    im, mono, epi = image(f)
    c, proj = cokernel(f)
    assert (f @ inc).is_zero() and inc.is_mono()
    assert epi.is_epi() and mono.is_mono() and mono @ epi == f
    assert proj.is_epi() and (proj @ f).is_zero()
    for v in m.quiver.vertices:
        assert k.dims[v] + im.dims[v] == m.dims[v]
        assert im.dims[v] + c.dims[v] == n.dims[v]


@settings(max_examples=30, deadline=None)
@given(rep_strategy())
def test_duality_involution(m):
    assert dual(dual(m)) == m
    assert dual(m).quiver == m.quiver.opposite()


@settings(max_examples=30, deadline=None)
@given(rep_strategy())
def test_presentations(m):
    if m.is_zero():
        return
    pr = minimal_projective_presentation(m)
    assert pr.f.is_mono() and pr.epi.is_epi() and (pr.epi @ pr.f).is_zero()
    assert kernel(pr.epi)[0].total_dim == pr.p1.total_dim
    t, _, mult = top(m)
    assert sorted(pr.p0_vertices) == sorted(v for v, k in mult.items() for _ in range(k))
    co = minimal_injective_copresentation(m)
    assert co.mono.is_mono() and co.g.is_epi() and (co.g @ co.mono).is_zero()
    s, _, smult = socle(m)
    assert sorted(co.i0_vertices) == sorted(v for v, k in smult.items() for _ in range(k))


def test_projective_cover_and_envelope_on_simples():
    q = a3()
    s2 = simple(q, P, "2")
    p0, epi, verts = projective_cover(s2)
    assert verts == ("2",) and p0.dimvec == (0, 1, 1) and epi.is_epi()
    i0, mono, verts = injective_envelope(s2)
    assert verts == ("2",) and i0.dimvec == (1, 1, 0) and mono.is_mono()
    assert is_projective(projective(q, P, "1")) and not is_projective(s2)
    assert is_injective(injective(q, P, "2")) and not is_injective(s2)


def test_end_algebra_local():
    q = kronecker()
    m = Rep(q, P, {"1": 1, "2": 1}, {"a": [[1]], "b": [[0]]})
    e = end_algebra(m)
    assert e.dim == 1 and e.is_local
    m2 = direct_sum([m, m])
    e2 = end_algebra(m2)
    assert e2.dim == 4 and not e2.is_local and e2.residue_dim == 4


def test_prime_too_small():
    q = a2()
    p1 = projective(q, 3, "1")
    with pytest.raises(PrimeTooSmall):
        end_algebra(direct_sum([p1, p1, simple(q, 3, "2"), simple(q, 3, "2")]))


def test_factor_through():
    q = a2()
    s1, p1, s2 = simple(q, P, "1"), projective(q, P, "1"), simple(q, P, "2")
    epi = hom_basis(p1, s1)[0]
    mono = hom_basis(s2, p1)[0]
    assert factor_through(epi, epi, "left") is not None
    assert factor_through(mono, mono, "right") is not None
    # the epi P1 -> S1 does not split, the mono S2 -> P1 does not split
    assert factor_through(hom_basis(s1, s1)[0], epi, "left") is None
    assert factor_through(hom_basis(s2, s2)[0], mono, "right") is None
    with pytest.raises(RepError):
        factor_through(epi, mono, "left")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_decompose_reassembles(seed):
    q = a3()
    rng = np.random.default_rng(seed)
    parts = [projective(q, P, "1"), simple(q, P, "2"), injective(q, P, "2")]
    pick = [parts[i] for i in rng.integers(0, 3, size=int(rng.integers(1, 4)))]
    m = scrambled_sum(pick, rng)
    d = decompose(m, seed)
    assert d.certified
    assert d.iso.src == m and d.iso.is_iso()
    assert sorted(s.dimvec for s in d.summands()) == sorted(r.dimvec for r in pick)
    for prj, inc in zip(d.projections(), d.inclusions()):
        assert (prj @ inc).is_iso()


def test_decompose_kronecker_family_members_are_indecomposable():
    q = kronecker()
    for lam in (0, 1, 5):
        m = Rep(q, P, {"1": 2, "2": 2}, {"a": [[1, 0], [0, 1]], "b": [[lam, 1], [0, lam]]})
        d = decompose(m)
        assert len(d.parts) == 1 and d.parts[0].verdict == CERTIFIED


def test_is_isomorphic():
    q = d4()
    rng = np.random.default_rng(3)
    g = Rep(q, P, {"0": 2, "1": 1, "2": 1, "3": 1},
            {"a": [[1], [0]], "b": [[0], [1]], "c": [[1], [1]]})
    h = transport(g, rng)
    v = is_isomorphic(g, h)
    assert v and v.iso.src == g and v.iso.dst == h and v.iso.is_iso()
    degenerate = Rep(q, P, g.dims, {"a": [[1], [0]], "b": [[0], [1]], "c": [[1], [0]]})
    assert not is_isomorphic(g, degenerate)


def test_a2_worked_examples():
    q = a2()
    s1, s2 = simple(q, P, "1"), simple(q, P, "2")
    p1, p2 = projective(q, P, "1"), projective(q, P, "2")
    i1, i2 = injective(q, P, "1"), injective(q, P, "2")
    assert p1.dimvec == (1, 1) and p1.mats["a"].tolist() == [[1]] and p2.dimvec == (0, 1)
    assert i1.dimvec == (1, 0) and i2.dimvec == (1, 1)
    assert hom_dim(p1, p1) == 1 and hom_dim(s1, p1) == 0
    assert hom_dim(p1, direct_sum([], q, P)) == 0
    c, _ = cokernel(hom_basis(p2, p1)[0])
    assert c.dimvec == (1, 0)
    assert top(p1)[0].dimvec == (1, 0) and socle(i2)[0].dimvec == (0, 1)
    assert top(direct_sum([s1, s2]))[0].dimvec == (1, 1)
    pr = minimal_projective_presentation(s1)
    assert pr.p0_vertices == ("1",) and pr.p1_vertices == ("2",)
    assert minimal_projective_presentation(p1).p1.is_zero()
    pr = minimal_projective_presentation(direct_sum([p1, s1]))
    assert pr.p0_vertices == ("1", "1") and pr.p1_vertices == ("2",)
    co = minimal_injective_copresentation(s2)
    assert co.i0_vertices == ("2",) and co.i1_vertices == ("1",)
    assert minimal_injective_copresentation(i2).i1.is_zero()
    with pytest.raises(RepError):
        minimal_injective_copresentation(direct_sum([], q, P))


def test_end_and_decomposition_examples():
    q = a2()
    s1, s2, p1 = simple(q, P, "1"), simple(q, P, "2"), projective(q, P, "1")
    e = end_algebra(p1)
    assert e.dim == 1 and not e.radical_basis()
    e = end_algebra(direct_sum([s1, s1]))
    assert e.dim == 4 and not e.radical_basis()
    d = decompose(direct_sum([p1, s1]))
    assert [(pt.rep.dimvec, pt.multiplicity, pt.verdict) for pt in d.parts] == \
        [((1, 0), 1, CERTIFIED), ((1, 1), 1, CERTIFIED)]
    assert [pt.rep.dimvec for pt in decompose(p1).parts] == [(1, 1)]
    assert decompose(direct_sum([], q, P)).parts == ()
    assert is_isomorphic(p1, p1).verdict == "yes"
    assert is_isomorphic(p1, direct_sum([s1, s2])).verdict == "no"
    assert is_isomorphic(p1, direct_sum([p1, direct_sum([], q, P)])).verdict == "yes"


def test_require_indecomposable():
    from almostsplit.repcore import require_indecomposable

    q = a2()
    s1 = simple(q, P, "1")
    require_indecomposable(s1)
    with pytest.raises(RepError):
        require_indecomposable(direct_sum([s1, s1]))
    with pytest.raises(RepError):
        require_indecomposable(direct_sum([], q, P))
