"""End-to-end checks of the shipped guarantees, one verdict line each.

Every comparison is exact field arithmetic; there are no tolerances to
tune. Counts and seeds are fixed so a run is reproducible, and each
check prints a single PASS or FAIL line so the output reads as a
checklist.
"""

import random

from imperfect.field import Context
from imperfect.pbasis import is_p_independent, lambda_coords
from imperfect.presets import Bundle
from imperfect.rank1 import (
    Mat2,
    bruhat2,
    factor_codim1,
    field_structure,
    gen,
    mult_bruhat,
    perfectness_witness,
    rand_L_element,
)
from imperfect.reconstruct import (
    K0Rep,
    c2_recover,
    g2_recover,
    make_c2_oracle,
    make_g2_oracle,
    negative_control,
    verify_recovery,
)
from imperfect.sp4 import (
    SLOT_ROOT,
    Sp4Root,
    chevalley_gen,
    identity4,
    membership_psp4,
    perfectness_witness_sp4,
    sp4_bruhat,
    torus_matrix,
)
from imperfect.tower import IndifferentSpec, validate_tower
from imperfect.unipotent import (
    TorusElement2,
    center_member,
    commutator,
    torus_act,
    torus_normalizes,
    u_mult,
    z2_member,
)


CTX2 = Context(2, ("t", "u"))
CTX3 = Context(3, ("s", "v"))

ALL_ROOTS = ["alpha", "2alpha+beta", "alpha+beta", "beta",
             "-alpha", "-2alpha+beta", "-alpha+beta", "-beta"]


class verdict:
    """Prints exactly one line per criterion, whatever happens inside."""

    def __init__(self, num, label):
        self.num = num
        self.label = label

    def __enter__(self):
        return self

    def __exit__(self, et, ev, tb):
        status = "PASS" if et is None else "FAIL"
        print(f"criterion {self.num:>2}: {self.label:<40} {status}")
        return False


def rand_sl2(ctx, rng, length=3, max_deg=1, max_terms=2, denominators=False):
    g = Mat2.identity(ctx)
    for _ in range(rng.randint(1, length)):
        kind = rng.choice(["a", "b", "h"])
        c = ctx.rand_ratfunc(rng, max_deg=max_deg, max_terms=max_terms,
                             nonzero=(kind == "h"), denominators=denominators)
        g = g * gen(kind, c, ctx)
    if rng.random() < 0.3:
        g = g * gen("w", None, ctx)
    return g


def rand_sp4_word(ctx, rng, nsteps):
    g = identity4(ctx)
    for _ in range(nsteps):
        name = rng.choice(ALL_ROOTS)
        c = ctx.rand_ratfunc(rng, max_deg=1, max_terms=2, nonzero=True,
                             denominators=False)
        g = g * chevalley_gen(Sp4Root(name), c)
    return g


def rand_unipotent(datum, rng):
    coords = []
    for slot in datum.slots:
        if rng.random() < 0.5:
            coords.append(datum.ctx.zero())
        elif slot.domain is None:
            coords.append(datum.ctx.rand_ratfunc(rng, max_deg=1, max_terms=2,
                                                 denominators=False))
        else:
            coords.append(slot.domain.rand_element(rng))
    return datum.identity().__class__(datum, tuple(coords))


def rand_normalizing_torus(datum, rng):
    ctx = datum.ctx
    s_alpha = ctx.rand_ratfunc(rng, max_deg=1, max_terms=2, nonzero=True,
                               denominators=False)
    if datum.kind == "G2":
        w = ctx.rand_ratfunc(rng, max_deg=1, max_terms=2, nonzero=True,
                             denominators=False)
        s_beta = s_alpha ** 3 * w ** 3
    else:
        s_beta = datum.slot(1).domain.rand_element(rng, nonzero=True)
    return TorusElement2(s_alpha, s_beta)


def in_domain(datum, x):
    for slot, c in zip(datum.slots, x.coords):
        if slot.domain is not None and not slot.domain.contains(c):
            return False
    return True


def conjugation_stays_inside(h, x):
    return in_domain(x.datum, torus_act(h, x))


# ---------------------------------------------------------------------------
# 1. coordinate identity for p-th power expansions
# ---------------------------------------------------------------------------


def test_01_lambda_identity():
    with verdict(1, "lambda coordinate identity"):
        for ctx in (CTX2, CTX3):
            rng = random.Random(100 + ctx.p)
            p = ctx.p
            for i in range(250):
                while True:
                    a = ctx.rand_ratfunc(rng, max_deg=2, max_terms=2,
                                         denominators=(i % 10 == 0))
                    if is_p_independent((a,), (), ctx):
                        break
                cs = [ctx.rand_ratfunc(rng, max_deg=1, max_terms=2,
                                       denominators=(i % 10 == 0))
                      for _ in range(p)]
                b = ctx.zero()
                for j, c in enumerate(cs):
                    b = b + c ** p * a ** j
                coords = lambda_coords((a,), b, ctx)
                assert coords.defined
                rebuilt = ctx.zero()
                for j, lam in enumerate(coords):
                    rebuilt = rebuilt + lam ** p * a ** j
                assert rebuilt == b
        # dependent tuples answer with identically zero coordinates
        for ctx in (CTX2, CTX3):
            rng = random.Random(200 + ctx.p)
            p = ctx.p
            for i in range(25):
                x = ctx.rand_ratfunc(rng, max_deg=1, max_terms=2, nonzero=True)
                y = ctx.rand_ratfunc(rng, max_deg=1, max_terms=2, nonzero=True)
                bad = [(x ** p,), (x, x), (x, x * y ** p),
                       (ctx.one(),), (x, ctx.zero())][i % 5]
                b = ctx.rand_ratfunc(rng, max_deg=1, max_terms=2)
                coords = lambda_coords(bad, b, ctx)
                assert not coords.defined
                assert all(c.is_zero() for c in coords)


# ---------------------------------------------------------------------------
# 2. tower validation on the shipped instances
# ---------------------------------------------------------------------------


def test_02_tower_validation():
    with verdict(2, "tower validation and hand-counted dims"):
        rep = validate_tower(Bundle.load("tower-simple").cfg.tower)
        assert rep.ok
        assert rep.dims["level1.dim_R_over_K1"] == 3
        assert rep.dims["level1.[K:K1]"] == 8  # 2^3 for three variables
        rep = validate_tower(Bundle.load("tower-over-k1").cfg.tower)
        assert rep.ok
        assert rep.dims["level1.[K:K1]"] == 4
        bad = validate_tower(Bundle.load("tower-bad").cfg.tower)
        assert not bad.ok
        assert "level1.independent-basis" in [c.name for c in bad.failed()]


# ---------------------------------------------------------------------------
# 3. rank-1 defining identities in both characteristics
# ---------------------------------------------------------------------------


def test_03_sl2_defining_identities():
    with verdict(3, "rank-1 defining identities"):
        data = Bundle.load("timmesfeld-codim1").timmesfeld()
        for ctx, draw in (
            (data.L.ctx, lambda rng: rand_L_element(data, rng)),
            (CTX3, lambda rng: CTX3.rand_ratfunc(rng, max_deg=1, max_terms=2,
                                                 nonzero=True)),
        ):
            rng = random.Random(300 + ctx.p)
            one = ctx.one()
            w = gen("w", None, ctx)
            assert w == gen("a", one, ctx) * gen("b", -one, ctx) * gen("a", one, ctx)
            for _ in range(100):
                t = draw(rng)
                n_t = gen("a", t, ctx) * gen("b", -t.inverse(), ctx) * gen("a", t, ctx)
                assert n_t == gen("h", t, ctx) * w
                lhs = gen("a", -t, ctx) * n_t * gen("a", -t, ctx)
                assert lhs == gen("b", -t.inverse(), ctx)


# ---------------------------------------------------------------------------
# 4. normal forms round-trip and multiply correctly
# ---------------------------------------------------------------------------


def test_04_bruhat_round_trips():
    with verdict(4, "normal form round trips and products"):
        for ctx in (CTX2, CTX3):
            rng = random.Random(400 + ctx.p)
            for i in range(500):
                g = rand_sl2(ctx, rng, denominators=(i % 20 == 0))
                assert bruhat2(g).to_matrix(ctx) == g
        # the symplectic realization is a characteristic-2 construction
        rng = random.Random(412)
        for _ in range(500):
            g = rand_sp4_word(CTX2, rng, rng.randint(1, 4))
            assert sp4_bruhat(g).to_matrix() == g
        for ctx in (CTX2, CTX3):
            st = field_structure(ctx)
            rng = random.Random(420 + ctx.p)
            for i in range(500):
                dens = i % 50 == 0
                g1 = rand_sl2(ctx, rng, denominators=dens)
                g2 = rand_sl2(ctx, rng, denominators=dens)
                prod = mult_bruhat(bruhat2(g1), bruhat2(g2), st)
                assert prod.to_matrix(ctx) == g1 * g2


# ---------------------------------------------------------------------------
# 5. two-factor splitting over the codimension-one subfield
# ---------------------------------------------------------------------------


def test_05_codim1_factorization():
    with verdict(5, "codimension-one two-factor splitting"):
        data = Bundle.load("timmesfeld-codim1").timmesfeld()
        ctx = data.L.ctx
        t, u = ctx.var("t"), ctx.var("u")
        span = [ctx.one(), t, u, t * u]
        rng = random.Random(500)
        for i in range(200):
            while True:
                tau = ctx.zero()
                for m in span:
                    c = ctx.rand_ratfunc(rng, max_deg=1, max_terms=2,
                                         denominators=(i % 25 == 0))
                    tau = tau + c * c * m
                if not tau.is_zero():
                    break
            f1, f2 = factor_codim1(tau, data)
            assert data.L.contains(f1) and not f1.is_zero()
            assert data.L.contains(f2) and not f2.is_zero()
            assert f1 * f2 == tau


# ---------------------------------------------------------------------------
# 6. unipotent engine: associativity, closure, center recognition
# ---------------------------------------------------------------------------


def test_06_unipotent_engine():
    with verdict(6, "unipotent engine invariants"):
        hexagon = Bundle.load("g2").g2()
        quadrangle = Bundle.load("indifferent-weak").c2()
        for datum, seed in ((hexagon, 6003), (quadrangle, 6002)):
            rng = random.Random(seed)
            for _ in range(300):
                x = rand_unipotent(datum, rng)
                y = rand_unipotent(datum, rng)
                z = rand_unipotent(datum, rng)
                left = u_mult(u_mult(x, y), z)
                right = u_mult(x, u_mult(y, z))
                assert left == right
                assert in_domain(datum, left)
            probes = [datum.generator(i + 1,
                                      slot.domain.rand_element(rng, nonzero=True)
                                      if slot.domain is not None else
                                      datum.ctx.gens()[0])
                      for i, slot in enumerate(datum.slots)]
            for _ in range(200):
                x = rand_unipotent(datum, rng)
                by_comm = all(commutator(x, g).is_identity() for g in probes)
                assert center_member(x) == by_comm
                z2_by_comm = all(center_member(commutator(x, g)) for g in probes)
                assert z2_member(x) == z2_by_comm


# ---------------------------------------------------------------------------
# 7. diagonal torus action
# ---------------------------------------------------------------------------


def test_07_torus_action():
    with verdict(7, "torus action is a domain-aware automorphism"):
        hexagon = Bundle.load("g2").g2()
        quadrangle = Bundle.load("indifferent-proper").c2()
        for datum, seed in ((hexagon, 7003), (quadrangle, 7002)):
            rng = random.Random(seed)
            for _ in range(100):
                h = rand_normalizing_torus(datum, rng)
                x = rand_unipotent(datum, rng)
                y = rand_unipotent(datum, rng)
                assert u_mult(torus_act(h, x), torus_act(h, y)) == \
                    torus_act(h, u_mult(x, y))
        v2 = hexagon.ctx.var("v")
        kfield = hexagon.slot(4).domain
        v3 = quadrangle.ctx.var("v")
        K0 = quadrangle.slot(1).domain
        cases = [
            (hexagon, kfield, 4, v2),
            (quadrangle, K0, 3, v3),
        ]
        for datum, dom, slot, outside in cases:
            rng = random.Random(7100 + slot)
            for _ in range(25):
                h = rand_normalizing_torus(datum, rng)
                x = datum.generator(slot, dom.rand_element(rng, nonzero=True))
                assert torus_normalizes(h, datum)
                assert conjugation_stays_inside(h, x)
            for _ in range(25):
                # the long coordinate picks up a factor outside its subfield
                h = TorusElement2(datum.ctx.one(),
                                  outside * dom.rand_element(rng, nonzero=True))
                x = datum.generator(slot, dom.rand_element(rng, nonzero=True))
                assert not torus_normalizes(h, datum)
                assert not conjugation_stays_inside(h, x)


# ---------------------------------------------------------------------------
# 8. recovering the hexagon field data from the group alone
# ---------------------------------------------------------------------------


def test_08_reconstruction_hexagon():
    with verdict(8, "hexagon reconstruction agrees with ground truth"):
        datum = Bundle.load("g2").g2()
        oracle, codec = make_g2_oracle(datum)
        rec = g2_recover(oracle)
        rep = verify_recovery(rec, codec, n=100, seed=800)
        assert rep.ok, rep.mismatches[:3]
        assert rep.checks >= 100
        neg = negative_control(datum, "wrong-param", n=8, seed=801)
        assert len(neg.mismatches) >= 1


# ---------------------------------------------------------------------------
# 9. recovering the quadrangle field data, with the twisted product
# ---------------------------------------------------------------------------


def test_09_reconstruction_quadrangle():
    with verdict(9, "quadrangle reconstruction agrees with ground truth"):
        datum = Bundle.load("indifferent-weak").c2()
        oracle, codec = make_c2_oracle(datum)
        rec = c2_recover(oracle)
        rep = verify_recovery(rec, codec, n=100, seed=900)
        assert rep.ok, rep.mismatches[:3]
        assert rep.checks >= 100
        # the product is literally a*b = a^2 b on the recovered carrier
        K0 = datum.slot(1).domain
        rng = random.Random(901)

        def k0rep(c):
            return K0Rep(codec.from_coord(1, c), codec.from_coord(3, c),
                         codec.from_coord(4, c * c), codec.from_coord(2, c * c))

        one = datum.ctx.one()
        for _ in range(25):
            a = K0.rand_element(rng, nonzero=True)
            b = K0.rand_element(rng, nonzero=True)
            assert rec.star_test(k0rep(a), k0rep(b), k0rep(a * a * b))
            assert not rec.star_test(k0rep(a), k0rep(b), k0rep(a * a * b + one))
        neg = negative_control(datum, "offset-mul", n=8, seed=902)
        assert len(neg.mismatches) >= 1


# ---------------------------------------------------------------------------
# 10. symplectic membership with and without splitting data
# ---------------------------------------------------------------------------


def test_10_psp4_membership():
    with verdict(10, "symplectic membership verdicts"):
        ctx = CTX2
        t = ctx.var("t")
        u = ctx.var("u")
        spec = IndifferentSpec(ctx, [ctx.one(), t], (t,), [ctx.one()])
        rng = random.Random(1000)

        pool = [ctx.zero(), ctx.one(), t, u]

        def line_elem():
            # short elements of K^2 + tK^2; eight-fold products grow fast
            while True:
                a = rng.choice(pool)
                b = rng.choice(pool)
                c = a * a + b * b * t
                if not c.is_zero():
                    return c

        for _ in range(25):
            g = identity4(ctx)
            for _ in range(8):
                name = rng.choice(ALL_ROOTS)
                g = g * chevalley_gen(Sp4Root(name), line_elem())
            m = membership_psp4(g, spec)
            assert m.verdict == "yes", m.reason
        for name in ALL_ROOTS:
            m = membership_psp4(chevalley_gen(Sp4Root(name), u), spec)
            assert m.verdict == "no", (name, m.reason)
        m = membership_psp4(torus_matrix(u, ctx.one()), spec)
        assert m.verdict == "no"
        # without the splitting a torus coordinate may stay undecided,
        # and that is the only place an undecided answer is allowed
        proper = Bundle.load("indifferent-proper").cfg.indifferent
        v = proper.ctx.var("v")
        m = membership_psp4(torus_matrix(v, proper.ctx.one()), proper)
        assert m.verdict == "unknown"
        assert "torus" in m.reason


# ---------------------------------------------------------------------------
# 11. every root element is a commutator with a torus element
# ---------------------------------------------------------------------------


def test_11_perfectness_witnesses():
    with verdict(11, "perfectness witnesses multiply out"):
        data = Bundle.load("timmesfeld-codim1").timmesfeld()
        ctx = data.L.ctx
        rng = random.Random(1100)
        for _ in range(100):
            s = rand_L_element(data, rng)
            while True:
                tau = rand_L_element(data, rng)
                if not (tau * tau).is_one():
                    break
            sp = perfectness_witness(s, tau)
            assert data.L.contains(sp)
            h = gen("h", tau, ctx)
            a_sp = gen("a", sp, ctx)
            assert h.inverse() * a_sp.inverse() * h * a_sp == gen("a", s, ctx)
        spec = Bundle.load("indifferent-weak").cfg.indifferent
        rng = random.Random(1101)
        for slot in (1, 2, 3, 4):
            dom = spec.K0 if slot in (1, 3) else spec.L0
            for _ in range(25):
                s = dom.rand_element(rng, nonzero=True)
                (sa, sb), sp = perfectness_witness_sp4(slot, s, spec)
                assert dom.contains(sp)
                h = torus_matrix(sa, sb)
                x = chevalley_gen(Sp4Root(SLOT_ROOT[slot]), sp)
                assert h.inverse() * x.inverse() * h * x == \
                    chevalley_gen(Sp4Root(SLOT_ROOT[slot]), s)
