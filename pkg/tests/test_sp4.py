import random

import pytest

from imperfect.field import Context, FieldError
from imperfect.presets import Bundle
from imperfect.rank1 import gen as sl2_gen
from imperfect.sp4 import (
    SLOT_ROOT,
    WEYL_WORDS,
    Bruhat4,
    Mat4,
    Sp4Root,
    StructureData,
    build_group_from_M,
    chevalley_gen,
    descent_slots,
    form_matrix,
    full_datum,
    identity4,
    is_symplectic,
    mat_to_u,
    membership_psp4,
    perfectness_witness_sp4,
    sp4_bruhat,
    torus_coords,
    torus_matrix,
    torus_normalizer_check,
    u_to_mat,
    weyl_apply,
    weyl_rep,
)
from imperfect.tower import IndifferentSpec, SpecError
from imperfect.unipotent import u_mult


CTX = Context(2, ("t", "u"))
CTXV = Context(2, ("t", "u", "v"))

ALL_ROOTS = ["alpha", "2alpha+beta", "alpha+beta", "beta",
             "-alpha", "-2alpha+beta", "-alpha+beta", "-beta"]


def proper_spec():
    return Bundle.load("indifferent-proper").cfg.indifferent


def line_spec():
    # L0 = K0 = K^2 + tK^2: both torus data split at codimension one
    ctx = CTX
    t = ctx.var("t")
    return IndifferentSpec(ctx, [ctx.one(), t], (t,), [ctx.one()])


def rand_word_matrix(spec, rng, length=6, torus=False):
    ctx = spec.ctx
    g = identity4(ctx)
    for _ in range(rng.randint(1, length)):
        name = rng.choice(ALL_ROOTS)
        dom = spec.K0 if Sp4Root(name).length == "short" else spec.L0
        c = dom.rand_element(rng, nonzero=True)
        g = g * chevalley_gen(Sp4Root(name), c)
    if torus and rng.random() < 0.5:
        tau = spec.L0.rand_element(rng, nonzero=True)
        g = g * torus_matrix(ctx.one(), tau)
    return g


def rand_plain_word(ctx, rng, length=5):
    # generator words with small polynomial coordinates; domains are not
    # the point of a round-trip check and large entries swamp the gcds
    g = identity4(ctx)
    for _ in range(rng.randint(1, length)):
        name = rng.choice(ALL_ROOTS)
        c = ctx.rand_ratfunc(rng, max_deg=1, max_terms=2, nonzero=True,
                             denominators=False)
        g = g * chevalley_gen(Sp4Root(name), c)
    if rng.random() < 0.4:
        g = g * torus_matrix(
            ctx.rand_ratfunc(rng, max_deg=1, max_terms=1, nonzero=True,
                             denominators=False), ctx.one())
    return g


def test_form_and_generators():
    for name in ALL_ROOTS:
        r = Sp4Root(name)
        m = chevalley_gen(r, CTX.var("t"))
        assert is_symplectic(m)
    assert is_symplectic(identity4(CTX))
    assert is_symplectic(torus_matrix(CTX.var("t"), CTX.var("u")))
    for word in WEYL_WORDS:
        assert is_symplectic(weyl_rep(word, CTX))
    # an unbalanced diagonal scales the form
    t = CTX.var("t")
    one, zero = CTX.one(), CTX.zero()
    bad = Mat4(CTX, [[t, zero, zero, zero], [zero, one, zero, zero],
                     [zero, zero, one, zero], [zero, zero, zero, one]])
    assert not is_symplectic(bad)


def test_root_length_and_slots():
    assert Sp4Root("alpha").length == "short"
    assert Sp4Root("beta").length == "long"
    assert Sp4Root("2alpha+beta").length == "long"
    assert Sp4Root("alpha+beta").length == "short"
    assert Sp4Root("-beta").slot is None
    assert {Sp4Root(SLOT_ROOT[i]).slot for i in (1, 2, 3, 4)} == {1, 2, 3, 4}
    with pytest.raises(SpecError):
        Sp4Root("gamma")


def test_generator_addition_in_root_groups():
    rng = random.Random(2)
    for name in ALL_ROOTS:
        r = Sp4Root(name)
        a = CTX.rand_ratfunc(rng, denominators=False)
        b = CTX.rand_ratfunc(rng, denominators=False)
        assert chevalley_gen(r, a) * chevalley_gen(r, b) == chevalley_gen(r, a + b)


def test_matrix_commutator_matches_datum_relation():
    datum = full_datum(CTX)
    ctx = CTX
    rng = random.Random(3)
    for _ in range(20):
        t = ctx.rand_ratfunc(rng, max_deg=1, denominators=False)
        a = ctx.rand_ratfunc(rng, max_deg=1, denominators=False)
        x1 = datum.generator(1, t)
        x4 = datum.generator(4, a)
        m1 = u_to_mat(x1)
        m4 = u_to_mat(x4)
        comm = m1.inverse() * m4.inverse() * m1 * m4
        # [x1(t), x4(a)] = x2(t^2 a) x3(t a)
        want = u_mult(datum.generator(2, t * t * a), datum.generator(3, t * a))
        assert comm == u_to_mat(want)


def test_u_mat_roundtrip():
    datum = full_datum(CTX)
    ctx = CTX
    rng = random.Random(4)
    for _ in range(40):
        coords = tuple(ctx.rand_ratfunc(rng, max_deg=1, denominators=False)
                       for _ in range(4))
        from imperfect.unipotent import UElement
        x = UElement(datum, coords)
        assert mat_to_u(u_to_mat(x)) == x


def test_mat_to_u_rejects_bad_input():
    with pytest.raises(SpecError):
        mat_to_u(torus_matrix(CTX.var("t"), CTX.one()))
    with pytest.raises(SpecError):
        mat_to_u(chevalley_gen(Sp4Root("-alpha"), CTX.var("t")))
    # upper triangular but not symplectic-unipotent: break the r[2][3] tie
    ctx = CTX
    rows = identity4(ctx).rows
    rows = [list(r) for r in rows]
    rows[0][1] = ctx.var("t")
    m = Mat4(ctx, rows)
    with pytest.raises(SpecError):
        mat_to_u(m)


def test_weyl_words_are_distinct():
    reps = [weyl_rep(w, CTX) for w in WEYL_WORDS]
    assert len({id(r) for r in reps}) == 8
    for i in range(8):
        for j in range(i + 1, 8):
            assert reps[i] != reps[j]
    assert weyl_rep("e", CTX) == identity4(CTX)
    for w in WEYL_WORDS:
        assert is_symplectic(weyl_rep(w, CTX))


def test_weyl_apply_reflections():
    # the simple reflections act on (x, y) coordinates of x*alpha + y*beta
    assert weyl_apply("a", (1, 0)) == (-1, 0)
    assert weyl_apply("b", (0, 1)) == (0, -1)
    assert weyl_apply("ab", weyl_apply("ab", weyl_apply("ab", weyl_apply(
        "ab", (1, 0))))) == (1, 0)  # the rotation has order 4
    assert weyl_apply("abab", (1, 0)) == (-1, 0)
    assert weyl_apply("abab", (0, 1)) == (0, -1)
    assert descent_slots("e") == ()
    assert set(descent_slots("abab")) == {1, 2, 3, 4}


def test_torus_coords_roundtrip():
    rng = random.Random(5)
    for _ in range(10):
        a = CTX.rand_ratfunc(rng, nonzero=True, denominators=False)
        b = CTX.rand_ratfunc(rng, nonzero=True, denominators=False)
        sa, sb = torus_coords(torus_matrix(a, b))
        assert sa == a and sb == b


def test_sp4_bruhat_roundtrip_words():
    rng = random.Random(6)
    seen_words = set()
    for _ in range(60):
        g = rand_plain_word(CTX, rng)
        br = sp4_bruhat(g)
        assert br.to_matrix() == g
        seen_words.add(br.word)
    assert len(seen_words) >= 5  # several cells actually exercised


def test_sp4_bruhat_roundtrip_domain_words():
    spec = line_spec()
    rng = random.Random(61)
    for _ in range(20):
        g = rand_word_matrix(spec, rng, length=5, torus=True)
        br = sp4_bruhat(g)
        assert br.to_matrix() == g


def test_sp4_bruhat_of_structured_elements():
    ctx = CTX
    t = ctx.var("t")
    br = sp4_bruhat(identity4(ctx))
    assert br.word == "e"
    assert br.s_alpha.is_one() and br.s_beta.is_one()
    br = sp4_bruhat(torus_matrix(t, t))
    assert br.word == "e"
    assert (br.s_alpha, br.s_beta) == (t, t)
    br = sp4_bruhat(weyl_rep("abab", ctx))
    assert br.word == "abab"
    br = sp4_bruhat(chevalley_gen(Sp4Root("-beta"), t))
    assert br.word == "b"


def test_membership_yes_on_generated_products():
    spec = line_spec()
    rng = random.Random(7)
    for _ in range(12):
        g = rand_word_matrix(spec, rng, length=8)
        r = membership_psp4(g, spec)
        assert r.verdict == "yes", r.reason


def test_membership_no_on_outside_coordinates():
    spec = line_spec()
    ctx = spec.ctx
    u = ctx.var("u")
    for name in ALL_ROOTS:
        r = membership_psp4(chevalley_gen(Sp4Root(name), u), spec)
        assert r.verdict == "no", name
    # out-of-field torus coordinate
    r = membership_psp4(torus_matrix(u, ctx.one()), spec)
    assert r.verdict == "no"


def test_membership_unknown_needs_missing_codim1():
    spec = proper_spec()
    ctx = spec.ctx
    v = ctx.var("v")
    r = membership_psp4(torus_matrix(v, ctx.one()), spec)
    assert r.verdict == "unknown"
    assert "torus" in r.reason


def test_membership_witness_multiplies_out():
    spec = line_spec()
    ctx = spec.ctx
    t = ctx.var("t")
    g = torus_matrix(ctx.one(), t * t + t)
    r = membership_psp4(g, spec)
    assert r.verdict == "yes"
    assert r.witness is not None


def test_torus_normalizer_check():
    spec = proper_spec()
    ctx = spec.ctx
    t, u, v = ctx.gens()
    one = ctx.one()
    assert torus_normalizer_check(t * t, t * t, spec)
    assert torus_normalizer_check(v, t, spec)  # short side unconstrained
    assert not torus_normalizer_check(one, v, spec)
    with pytest.raises(FieldError):
        torus_normalizer_check(ctx.zero(), one, spec)


def test_structure_data_mu():
    spec = proper_spec()
    ctx = spec.ctx
    t, u, v = ctx.gens()
    m = StructureData(spec, [])
    assert m.mu(t, u) == t * t * u
    assert m.mu(ctx.one(), u) == u


def test_build_group_from_M():
    b = Bundle.load("indifferent-weak")
    group = b.sp4()
    ctx = group.ctx
    t = ctx.var("t")
    mats = group.torus_matrices()
    assert len(mats) == 1
    assert is_symplectic(mats[0])
    # the declared action scales the extreme slots by t^2 each
    sa, sb = torus_coords(mats[0])
    assert sa ** 2 == t ** 2 * (t ** 2 * t ** 2)  # s_alpha^2 = f1^2 * f4
    assert sb == t ** 2 * t ** 2


def test_build_group_rejects_inconsistent_action():
    spec = proper_spec()
    ctx = spec.ctx
    t = ctx.var("t")
    with pytest.raises(SpecError):
        build_group_from_M(StructureData(spec, [(ctx.one(), t)]))
    with pytest.raises(SpecError):
        build_group_from_M(StructureData(spec, [(ctx.zero(), t)]))


def test_group_membership_with_torus_part():
    group = Bundle.load("indifferent-weak").sp4()
    spec = group.spec
    rng = random.Random(9)
    h = group.torus_matrices()[0]
    for _ in range(6):
        g = rand_word_matrix(spec, rng, length=4) * h
        r = group.membership(g)
        assert r.verdict == "yes", r.reason


def test_perfectness_witness_all_slots():
    spec = proper_spec()
    ctx = spec.ctx
    rng = random.Random(10)
    for slot in (1, 2, 3, 4):
        dom = spec.K0 if slot in (1, 3) else spec.L0
        for _ in range(10):
            s = dom.rand_element(rng, nonzero=True)
            (sa, sb), s_prime = perfectness_witness_sp4(slot, s, spec)
            assert dom.contains(s_prime)
            h = torus_matrix(sa, sb)
            x = chevalley_gen(Sp4Root(SLOT_ROOT[slot]), s_prime)
            comm = h.inverse() * x.inverse() * h * x
            assert comm == chevalley_gen(Sp4Root(SLOT_ROOT[slot]), s)


def test_bruhat4_constructed_cell():
    spec = proper_spec()
    ctx = spec.ctx
    datum = full_datum(ctx)
    t = ctx.var("t")
    u1 = datum.generator(1, t)
    u2 = datum.generator(4, t)
    br = Bruhat4(u1, "ba", ctx.one(), t, u2)
    g = br.to_matrix()
    back = sp4_bruhat(g)
    assert back.to_matrix() == g
    assert back.word == "ba"
