import cmath
import math

import pytest

from paleylab.errors import (
    EvenOrTooSmall,
    NotPrime,
    OutOfRange,
    TooLarge,
    WrongResidueClass,
    ZeroArgument,
)
from paleylab.field import chi, gauss_sum, new_field, psi


def test_qr_set_13(ctx13):
    assert ctx13.qr_elements == (1, 3, 4, 9, 10, 12)
    assert len(ctx13.qr_elements) == (13 - 1) // 2


def test_n_is_bit_count():
    assert new_field(13).n == 4
    assert new_field(5).n == 3
    assert new_field(257).n == 9


@pytest.mark.parametrize("bad,err", [
    (9, NotPrime),
    (15, NotPrime),
    (2, EvenOrTooSmall),
    (1, EvenOrTooSmall),
    (-7, EvenOrTooSmall),
    (4, EvenOrTooSmall),
])
def test_rejects_bad_p(bad, err):
    with pytest.raises(err):
        new_field(bad)


def test_rejects_wrong_residue_class():
    with pytest.raises(WrongResidueClass):
        new_field(7, require_1mod4=True)
    # fine without the flag
    assert new_field(7).p == 7


def test_rejects_huge_p():
    with pytest.raises(TooLarge):
        new_field((1 << 20) + 7)


def test_chi_basic(ctx13):
    assert chi(ctx13, 0) == 0
    assert chi(ctx13, 1) == 1
    assert chi(ctx13, 2) == -1
    with pytest.raises(OutOfRange):
        chi(ctx13, 13)
    with pytest.raises(OutOfRange):
        chi(ctx13, -1)


def test_chi_counts_balance(contexts):
    for ctx in contexts.values():
        table = ctx.chi_table
        assert table[0] == 0
        assert (table == 1).sum() == (ctx.p - 1) // 2
        assert (table == -1).sum() == (ctx.p - 1) // 2
        assert int(table.sum()) == 0


def test_chi_multiplicative_exhaustive():
    for p in (5, 13, 29, 97):
        ctx = new_field(p)
        t = ctx.chi_table
        for x in range(1, p):
            for y in range(1, p):
                assert t[x * y % p] == t[x] * t[y]


def test_chi_symmetric_for_1mod4(contexts):
    for ctx in contexts.values():
        t = ctx.chi_table
        assert t[ctx.p - 1] == 1  # chi(-1) = +1
        for x in range(1, ctx.p):
            assert t[ctx.p - x] == t[x]


def test_psi_values():
    ctx = new_field(5)
    z = psi(ctx, 1)
    assert abs(z.real - 0.309017) < 1e-6
    assert abs(z.imag - 0.951057) < 1e-6
    assert abs(psi(ctx, 0) - 1.0) < 1e-15
    with pytest.raises(OutOfRange):
        psi(ctx, 5)


def test_psi_is_additive_character(contexts):
    for ctx in contexts.values():
        p = ctx.p
        for x in range(0, p, max(1, p // 7)):
            for y in range(0, p, max(1, p // 5)):
                lhs = psi(ctx, x) * psi(ctx, y)
                rhs = psi(ctx, (x + y) % p)
                assert abs(lhs - rhs) < 1e-12
        assert abs(abs(psi(ctx, 3)) - 1.0) < 1e-12
        # conjugate pairs multiply to 1
        assert abs(psi(ctx, 2) * psi(ctx, p - 2) - 1.0) < 1e-12


def test_gauss_sum_small():
    ctx = new_field(5)
    g = gauss_sum(ctx, 1)
    assert abs(g - math.sqrt(5)) < 1e-12


def test_gauss_sum_sign_follows_character(contexts):
    for ctx in contexts.values():
        for a in range(1, ctx.p):
            g = gauss_sum(ctx, a)
            assert abs(g.imag) < 1e-9
            assert abs(g.real - chi(ctx, a) * math.sqrt(ctx.p)) < 1e-9


def test_gauss_sum_errors(ctx13):
    with pytest.raises(ZeroArgument):
        gauss_sum(ctx13, 0)
    with pytest.raises(WrongResidueClass):
        gauss_sum(new_field(7), 1)
    with pytest.raises(OutOfRange):
        gauss_sum(ctx13, 13)
