import math
import random
from fractions import Fraction

import numpy as np
import pytest

from quadlod.characters import conductor, make_modulus, trivial_modulus
from quadlod.errors import ZeroOrUnitModulus
from quadlod.regions import canonical_classes
from quadlod.rings import gcd, make_ring


def unit_char_matrix(m):
    """Rows chi, columns unit residues; built from exact phases."""
    rows = []
    for chi in m.characters:
        rows.append([complex(chi.value_of_rid(r)) for r in m.unit_rids])
    return np.array(rows, dtype=np.complex128)


def test_modulus_examples(gauss):
    m = make_modulus(gauss, gauss.element(3, 0))
    assert m.norm == 9 and m.phi == 8
    assert m.unit_group[1] == (8,)  # (Z[i]/3)* is F_9*, cyclic

    m = make_modulus(gauss, gauss.element(1, 1))
    assert m.norm == 2 and m.phi == 1

    m = make_modulus(gauss, gauss.element(5, 0))
    assert m.phi == 16 and tuple(sorted(m.unit_group[1])) == (4, 4)


def test_modulus_rejects_units(gauss):
    with pytest.raises(ZeroOrUnitModulus):
        make_modulus(gauss, gauss.element(1, 0))
    with pytest.raises(ZeroOrUnitModulus):
        make_modulus(gauss, gauss.element(0, 1))


def test_modulus_canonicalizes_q(gauss):
    m = make_modulus(gauss, gauss.element(0, 3))  # 3i, associate of 3
    assert m.q == gauss.element(3, 0)


def test_residue_system_complete(gauss):
    m = make_modulus(gauss, gauss.element(2, 3))
    assert len(m.residues) == m.norm == 13
    # pairwise incongruent and reduction is idempotent
    seen = set()
    for r in m.residues:
        key = m.reduce_coords(r.x, r.y)
        assert key == (r.x, r.y)
        seen.add(key)
    assert len(seen) == 13
    # reduction respects the ideal: x - reduce(x) is divisible by q
    from quadlod.rings import divide_exact

    z = gauss.element(17, -9)
    rx, ry = m.reduce_coords(z.x, z.y)
    assert divide_exact(z - gauss.element(rx, ry), m.q) is not None


def test_euler_phi_examples(gauss):
    assert make_modulus(gauss, gauss.element(3, 0)).phi == 8
    q8 = gauss.element(1, 1) ** 3
    assert make_modulus(gauss, q8).phi == 4
    for prime_el in (gauss.element(1, 1), gauss.element(2, 1), gauss.element(3, 0)):
        m = make_modulus(gauss, prime_el)
        assert m.phi == m.norm - 1


def test_phi_by_product_formula(gauss, eisen):
    # independent oracle: norm(q) * prod over prime divisors (1 - 1/N(p))
    from quadlod.sieve import factor, sieve_primes

    for ring in (gauss, eisen):
        table = sieve_primes(ring, 500)
        for q in canonical_classes(ring, 60):
            if q.norm() < 2:
                continue
            m = make_modulus(ring, q)
            expect = Fraction(m.norm)
            for p, _ in factor(q, table).factors:
                expect *= 1 - Fraction(1, p.norm())
            assert m.phi == expect


def test_character_counts(gauss):
    m = make_modulus(gauss, gauss.element(3, 0))
    assert len(m.characters) == 8
    assert sum(1 for c in m.characters if c.is_principal) == 1
    m2 = make_modulus(gauss, gauss.element(1, 1))
    assert len(m2.characters) == 1 and m2.characters[0].is_principal


@pytest.mark.parametrize(
    "d,coords",
    [(-1, (3, 0)), (-1, (2, 1)), (-1, (4, 1)), (-1, (1, 1)), (-3, (2, 0)), (-3, (3, 1)), (-3, (5, 0))],
)
def test_orthogonality_unitary(d, coords):
    ring = make_ring(d)
    m = make_modulus(ring, ring.element(*coords))
    u = unit_char_matrix(m) / math.sqrt(m.phi)
    eye = np.eye(m.phi)
    assert np.max(np.abs(u @ u.conj().T - eye)) < 1e-9
    assert np.max(np.abs(u.conj().T @ u - eye)) < 1e-9


def test_multiplicativity(gauss):
    m = make_modulus(gauss, gauss.element(4, 1))
    rng = random.Random(3)
    chars = m.characters
    units = m.unit_rids
    for _ in range(300):
        chi = chars[rng.randrange(len(chars))]
        ra, rb = rng.choice(units), rng.choice(units)
        prod = m.mul_rid(ra, rb)
        assert abs(
            chi.value_of_rid(ra) * chi.value_of_rid(rb) - chi.value_of_rid(prod)
        ) < 1e-12


def test_characters_see_units(gauss):
    # chi(u*xi) = chi(u) * chi(xi): no unit invariance is imposed
    m = make_modulus(gauss, gauss.element(3, 0))
    z = gauss.element(2, 1)
    i_unit = gauss.element(0, 1)
    for chi in m.characters:
        assert abs(chi(i_unit * z) - chi(i_unit) * chi(z)) < 1e-12
    assert any(abs(chi(i_unit) - 1) > 0.1 for chi in m.characters)


def test_zero_on_non_coprime(gauss):
    m = make_modulus(gauss, gauss.element(3, 0))
    for chi in m.characters:
        assert chi(gauss.element(3, 0)) == 0j
        assert chi(gauss.element(6, 3)) == 0j


def test_conductor_principal_is_trivial(gauss):
    m = make_modulus(gauss, gauss.element(3, 2))
    prin = [c for c in m.characters if c.is_principal][0]
    assert prin.conductor.norm == 1
    assert not prin.is_primitive


def test_conductor_lifted_character(gauss):
    # q = 3*(1+i): phi(q) = phi(3)*phi(1+i) = 8, so every character mod q
    # factors through (O_K/3)*; the non-principal ones have conductor 3
    q = gauss.element(3, 0) * gauss.element(1, 1)
    m = make_modulus(gauss, q)
    assert m.phi == 8
    for chi in m.characters:
        cond = conductor(chi)
        if chi.is_principal:
            assert cond.norm == 1
        else:
            assert cond.q == gauss.element(3, 0)
        assert not chi.is_primitive


def test_conductor_prime_modulus(gauss):
    m = make_modulus(gauss, gauss.element(2, 1))
    for chi in m.characters:
        if chi.is_principal:
            assert chi.conductor.norm == 1
        else:
            assert chi.conductor.q == m.q
            assert chi.is_primitive


def test_primitive_counts(gauss):
    assert len(make_modulus(gauss, gauss.element(3, 0)).primitive_characters()) == 7
    m9 = make_modulus(gauss, gauss.element(9, 0))
    assert m9.phi == 72
    assert len(m9.primitive_characters()) == 72 - 8
    assert len(make_modulus(gauss, gauss.element(1, 1)).primitive_characters()) == 0


def test_crt_consistency(gauss):
    # q = (1+i)^2 * (2+i): coprime factor moduli
    q1 = gauss.element(1, 1) ** 2
    q2 = gauss.element(2, 1)
    q = q1 * q2
    m, m1, m2 = (make_modulus(gauss, z) for z in (q, q1, q2))
    assert m.phi == m1.phi * m2.phi
    assert len(m.characters) == len(m1.characters) * len(m2.characters)
    # mod-q characters are exactly the products of factor characters
    fingerprints = {
        tuple(chi.phase_of_rid(r) for r in m.unit_rids) for chi in m.characters
    }
    assert len(fingerprints) == m.phi  # distinct as functions
    products = set()
    for c1 in m1.characters:
        for c2 in m2.characters:
            products.add(
                tuple(
                    (c1.phase(m.element(r)) + c2.phase(m.element(r))) % 1
                    for r in m.unit_rids
                )
            )
    assert products == fingerprints


def test_dlog_inverts(gauss, eisen):
    for ring, coords in [(gauss, (5, 0)), (gauss, (1, 1)), (eisen, (4, 1)), (eisen, (6, 0))]:
        m = make_modulus(ring, ring.element(*coords))
        gens, orders = m.unit_group
        assert math.prod(orders) == m.phi if orders else m.phi == 1
        for r in m.unit_rids:
            vec = m.dlog[r]
            acc = m.one_rid
            for g, a in zip(gens, vec):
                acc = m.mul_rid(acc, m.pow_rid(g, a))
            assert acc == r
        # invariant-factor chain
        assert all(n2 <= n1 for n1, n2 in zip(orders, orders[1:]))


def test_trivial_modulus(gauss):
    t = trivial_modulus(gauss)
    assert t.norm == 1 and t.phi == 1
    assert len(t.characters) == 1 and t.characters[0].is_principal
    assert t.coprime(gauss.element(7, 3))


def test_coprime_matches_gcd(gauss):
    m = make_modulus(gauss, gauss.element(3, 1))
    for z in canonical_classes(gauss, 40):
        assert m.coprime(z) == gcd(z, m.q).is_unit()
