import pytest

from psl2units.errors import NotPrime, ZeroElement
from psl2units.finite_fields import (
    PrimePower, QuadraticExtension, build_setup, is_prime, make_field,
    prime_power_decomposition,
)


def _irreducible_quadratics(l):
    # independent oracle: a monic quadratic over F_l is irreducible iff
    # it has no root
    out = []
    for c1 in range(l):
        for c0 in range(l):
            if all((x * x + c1 * x + c0) % l != 0 for x in range(l)):
                out.append((c0, c1))
    return out


def test_prime_field_modulus_convention():
    fq = make_field(13, 1)
    assert fq.modulus == (0,)
    assert fq.q == 13


def test_f9_modulus_is_smallest_irreducible():
    fq = make_field(3, 2)
    assert fq.modulus == (1, 0)  # X^2 + 1
    assert fq.modulus == min(_irreducible_quadratics(3))


def test_f25_modulus_matches_enumeration_oracle():
    fq = make_field(5, 2)
    assert fq.modulus == min(_irreducible_quadratics(5))


def test_f16_cardinality():
    fq = make_field(2, 4)
    assert fq.q == 16
    assert len(list(fq.elements())) == 16


def test_make_field_rejects_composite_characteristic():
    with pytest.raises(NotPrime):
        make_field(6, 1)
    with pytest.raises(ValueError):
        make_field(7, 0)


def test_prime_power_validation():
    with pytest.raises(NotPrime):
        PrimePower.make(15, 1)
    with pytest.raises(ValueError):
        PrimePower.from_q(12)
    assert prime_power_decomposition(27) == (3, 3)


@pytest.mark.parametrize("l,r", [(13, 1), (3, 2), (2, 4), (5, 2), (3, 3)])
def test_field_axioms_sampled(l, r):
    import random
    fq = make_field(l, r)
    rng = random.Random(0)
    for _ in range(200):
        a, b, c = (rng.randrange(fq.q) for _ in range(3))
        assert fq.add(a, b) == fq.add(b, a)
        assert fq.mul(a, fq.add(b, c)) == fq.add(fq.mul(a, b), fq.mul(a, c))
        assert fq.add(a, fq.neg(a)) == 0
        if a:
            assert fq.mul(a, fq.inv(a)) == 1


@pytest.mark.parametrize("l,r", [(13, 1), (3, 3), (2, 4)])
def test_frobenius_involution_and_fixed_field(l, r):
    fq = make_field(l, r)
    fq2 = QuadraticExtension(fq)
    q = fq.q
    fixed = 0
    for e in range(q * q):
        u = fq2.from_encoding(e)
        v = fq2.frobenius(u)
        assert fq2.frobenius(v) == u
        assert fq2.pow(u, q * q) == u or u == fq2.zero
        if v == u:
            fixed += 1
    assert fixed == q  # Frobenius fixes exactly the base field


@pytest.mark.parametrize("l,r", [(13, 1), (5, 2), (2, 4)])
def test_norm_and_trace_land_in_base_field(l, r):
    fq = make_field(l, r)
    fq2 = QuadraticExtension(fq)
    q = fq.q
    count = 0
    for e in range(1, q * q):
        u = fq2.from_encoding(e)
        t = fq2.trace(u)   # asserts hi == 0 internally
        n = fq2.norm(u)
        assert 0 <= t < q and 0 <= n < q
        count += 1
        if count == 100:
            break


def test_element_order_basics():
    fq = make_field(13, 1)
    assert fq.element_order(1) == 1
    assert fq.element_order(2) == 12  # 2 is primitive mod 13
    with pytest.raises(ZeroElement):
        fq.element_order(0)


def test_setup_q13():
    setup = build_setup(PrimePower.make(13, 1))
    fq2 = setup.fq2
    assert fq2.element_order(setup.alpha) == 14
    assert fq2.norm(setup.alpha) == 1
    t = setup.t
    # the trace satisfies t^3 - t^2 - 2t + 1 = 0 mod 13; the admissible
    # values are exactly the roots of that cubic
    roots = {x for x in range(13) if (x**3 - x**2 - 2 * x + 1) % 13 == 0}
    assert roots == {3, 5, 6}
    assert t in roots
    assert setup.fq.element_order(setup.beta) == 12


def test_setup_minimal_polynomial_of_alpha():
    for (l, r) in ((13, 1), (5, 2), (2, 4), (3, 3)):
        setup = build_setup(PrimePower.make(l, r))
        fq2 = setup.fq2
        t_emb = fq2.embed(setup.t)
        lhs = fq2.add(fq2.sub(fq2.mul(setup.alpha, setup.alpha),
                              fq2.mul(t_emb, setup.alpha)), fq2.one)
        assert lhs == fq2.zero


def test_setup_q16_trace_not_degenerate():
    setup = build_setup(PrimePower.make(2, 4))
    assert setup.t not in (0, 1)  # -1 = 1 in characteristic 2


def test_setup_alpha_order_always_q_plus_1():
    for (l, r) in ((7, 1), (11, 1), (5, 2), (3, 3), (2, 4)):
        setup = build_setup(PrimePower.make(l, r))
        assert setup.fq2.element_order(setup.alpha) == setup.pp.q + 1


def test_setup_deterministic():
    a = build_setup(PrimePower.make(3, 3))
    b = build_setup(PrimePower.make(3, 3))
    assert a.alpha == b.alpha and a.t == b.t and a.beta == b.beta
    assert a.fq.modulus == b.fq.modulus


def test_is_square():
    fq = make_field(13, 1)
    assert fq.is_square(4)
    assert fq.is_square(0)
    assert not fq.is_square(fq.first_primitive())
    f16 = make_field(2, 4)
    assert all(f16.is_square(x) for x in range(16))
    f25 = make_field(5, 2)
    squares = {f25.mul(x, x) for x in range(25)}
    assert all(f25.is_square(x) == (x in squares) for x in range(25))


def test_is_prime_small():
    assert [n for n in range(2, 30) if is_prime(n)] == \
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
