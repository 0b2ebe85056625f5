import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacsyz.ring import (
    GF,
    GREVLEX,
    LEX,
    QQ,
    CharacteristicError,
    NonHomogeneousError,
    Polynomial,
    PolyParseError,
    RingMismatchError,
    RingSpec,
    TermOrder,
    add,
    derivative,
    euler_check,
    field_from_string,
    homogeneous_component,
    is_homogeneous,
    mono_divides,
    monomials_of_degree,
    mul,
    parse_poly,
    scalar_mul,
    total_degree,
)

R3 = RingSpec(3)


def polys(ring=R3, max_deg=3, max_terms=5, homogeneous=None):
    """Random polynomials with small integer coefficients."""
    mono = st.tuples(*[st.integers(0, max_deg)] * ring.nvars)
    if homogeneous is not None:
        monos = list(monomials_of_degree(ring.nvars, homogeneous))
        mono = st.sampled_from(monos)
    terms = st.dictionaries(mono, st.integers(-9, 9), max_size=max_terms)
    return terms.map(lambda t: Polynomial(ring, t))


class TestParse:
    def test_basic(self):
        p = parse_poly("x0^2+2*x1*x2", R3)
        assert p.terms == {(2, 0, 0): 1, (0, 1, 1): 2}

    def test_example_curve_degree(self):
        p = R3.parse("x0*x1*x2*(x0^2+x1^2+x2^2)")
        assert p.degree() == 5 and len(p) == 3

    def test_whitespace_and_unary(self):
        assert R3.parse(" - x0 ^ 2 + ( x1 ) ") == R3.parse("x1-x0^2")

    def test_out_of_range_variable(self):
        with pytest.raises(PolyParseError) as exc:
            R3.parse("x0^7 + x5")
        assert exc.value.position == 7

    @pytest.mark.parametrize("text", ["x0/2", "2x0", "x0 x1", "x0^x1", "x0^2^3", "(x0", "x0+", "", "y0", "x0^-1"])
    def test_rejects(self, text):
        with pytest.raises(PolyParseError):
            R3.parse(text)

    def test_division_message(self):
        with pytest.raises(PolyParseError, match="division"):
            R3.parse("x0/x1")

    @given(polys())
    def test_roundtrip(self, p):
        assert R3.parse(p.to_str()) == p

    @given(polys(RingSpec(4, GF(101))))
    def test_roundtrip_fp(self, p):
        assert p.ring.parse(p.to_str()) == p

    def test_rational_printing(self):
        p = R3.var(0).scale(QQ("1/3")) - R3.var(1)
        assert p.to_str() == "1/3*x0 - x1"
        assert R3.parse("3*x0-x1").to_str() == "3*x0 - x1"

    def test_fp_symmetric_printing(self):
        R = RingSpec(3, GF(7))
        assert R.parse("6*x0").to_str() == "-x0"


class TestArithmetic:
    def test_difference_of_squares(self):
        x0, x1, _ = R3.gens()
        assert mul(add(x0, x1), x0 - x1) == R3.parse("x0^2-x1^2")

    def test_homogeneous_component(self):
        p = R3.parse("x0^2+x1")
        assert homogeneous_component(p, 1) == R3.var(1)
        assert not is_homogeneous(p)
        assert total_degree(p) == 2

    def test_degree_of_toric_f(self):
        g = R3.parse("x0^2+x1^2+x2^2")
        assert total_degree(g * R3.parse("x0*x1*x2")) == 5

    def test_zero(self):
        z = R3.zero()
        assert z.degree() is None and z.total_degree() == -1 and z.is_homogeneous()

    def test_scalar(self):
        assert scalar_mul(3, R3.var(0)) == R3.parse("3*x0")
        assert (R3.var(0) * 0).is_zero()

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatchError):
            R3.var(0) + RingSpec(4).var(0)
        with pytest.raises(RingMismatchError):
            R3.var(0) * R3.with_field(GF()).var(0)

    def test_fp_reduction(self):
        R = RingSpec(3, GF(5))
        assert (R.parse("3*x0") + R.parse("2*x0")).is_zero()

    def test_pow(self):
        assert R3.parse("(x0+x1)^2") == R3.parse("x0^2+2*x0*x1+x1^2")

    @given(polys(), polys(), polys())
    def test_ring_axioms(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == R3.zero()

    @given(polys(max_deg=4))
    def test_sum_of_components(self, p):
        total = R3.zero()
        for t in range(0, 13):
            total = total + p.homogeneous_component(t)
        assert total == p

    def test_no_zero_coefficients_stored(self):
        p = Polynomial(R3, {(1, 0, 0): 0, (0, 1, 0): 2})
        assert p.terms == {(0, 1, 0): 2}


class TestDerivative:
    def test_power_rule(self):
        assert derivative(R3.parse("x0^2*x1"), 0) == R3.parse("2*x0*x1")

    def test_absent_variable(self):
        assert derivative(R3.parse("x0^2+x1^2"), 2).is_zero()

    def test_toric_partial(self):
        f = R3.parse("x0*x1*x2*(x0^2+x1^2+x2^2)")
        assert f.derivative(0) == R3.parse("x1*x2*(3*x0^2+x1^2+x2^2)")

    def test_index_range(self):
        with pytest.raises(IndexError):
            R3.var(0).derivative(3)

    @given(polys(), polys(), st.integers(0, 2))
    def test_leibniz_and_linearity(self, a, b, i):
        assert (a * b).derivative(i) == a.derivative(i) * b + a * b.derivative(i)
        assert (a + b).derivative(i) == a.derivative(i) + b.derivative(i)

    @given(st.integers(1, 5).flatmap(lambda d: polys(homogeneous=d)))
    def test_degree_drops_by_one(self, p):
        for i in range(3):
            q = p.derivative(i)
            if q:
                assert q.degree() == p.degree() - 1


class TestEuler:
    def test_monomial(self):
        assert euler_check(R3.parse("x0*x1*x2"))

    def test_fermat(self):
        assert euler_check(R3.parse("x0^3+x1^3+x2^3"))

    def test_nonhomogeneous(self):
        with pytest.raises(NonHomogeneousError):
            euler_check(R3.parse("x0^2+x1"))

    def test_characteristic_guard(self):
        R = RingSpec(3, GF(3))
        with pytest.raises(CharacteristicError):
            euler_check(R.parse("x0^3+x1^3"))
        assert euler_check(R.parse("x0^2+x1^2"))

    @settings(max_examples=50)
    @given(st.integers(0, 6).flatmap(lambda d: polys(homogeneous=d, max_terms=6)))
    def test_euler_random(self, f):
        assert euler_check(f)


class TestFieldsAndOrders:
    def test_field_strings(self):
        assert field_from_string("q") == QQ
        assert field_from_string("fp") == GF(2147483647)
        assert field_from_string("fp:101") == GF(101)
        with pytest.raises(ValueError):
            field_from_string("fp:100")
        with pytest.raises(ValueError):
            field_from_string("r")

    def test_ring_needs_three_vars(self):
        with pytest.raises(ValueError):
            RingSpec(2)

    def test_fp_rationals(self):
        F = GF(7)
        assert F(QQ("1/2")) == 4
        assert F.inv(3) == 5

    def test_grevlex_vs_lex(self):
        a, b = (1, 0, 2), (2, 1, 0)
        assert LEX.greater(b, a)
        assert GREVLEX.greater(b, a)
        # degree-3 grevlex: x1^3 > x0*x2^2
        assert GREVLEX.greater((0, 3, 0), (1, 0, 2))
        assert LEX.greater((1, 0, 2), (0, 3, 0))

    def test_precedence(self):
        order = TermOrder("lex", (2, 1, 0))
        assert order.greater((0, 0, 1), (5, 0, 0))
        with pytest.raises(ValueError):
            TermOrder("lex", (0, 0, 1))
        with pytest.raises(ValueError):
            TermOrder("deglex")

    @given(st.sampled_from([GREVLEX, LEX]),
           st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), min_size=3, max_size=3))
    def test_multiplicative(self, order, ms):
        u, v, w = ms
        if u == v:
            return
        mw = lambda a: tuple(x + y for x, y in zip(a, w))
        assert order.greater(u, v) == order.greater(mw(u), mw(v))

    def test_monomials_of_degree(self):
        ms = list(monomials_of_degree(3, 2))
        assert len(ms) == 6 and ms[0] == (2, 0, 0)
        assert all(sum(m) == 2 for m in ms)

    def test_divides(self):
        assert mono_divides((1, 0, 0), (2, 1, 0))
        assert not mono_divides((0, 0, 1), (2, 1, 0))

    def test_leading_term(self):
        p = R3.parse("x0*x2^2 + x1^3")
        assert p.leading_term(GREVLEX)[0] == (0, 3, 0)
        assert p.leading_term(LEX)[0] == (1, 0, 2)
