"""Unit tests for presentations, normal forms and coordinate windows."""

import random

import pytest

from affine_amenability.algebra import (
    LETTER_CACHE_SIZE,
    Element,
    add,
    confluence_check,
    enumerate_basis,
    find_zero_divisors,
    format_element,
    format_word,
    group_algebra,
    multiply,
    normal_form,
    parse_element,
    parse_word,
    presentation_from_dict,
    presentation_hash,
    presentation_to_dict,
    right_multiply_subspace,
)
from affine_amenability.errors import (
    ElementSyntaxError,
    InputError,
    NonConfluentError,
    PresentationError,
    TruncationOverflow,
)
from affine_amenability.exactlin import FieldSpec


def random_element(pres, rng, max_len=3, terms=3):
    n = len(pres.generators)
    out = {}
    for _ in range(terms):
        word = tuple(rng.randrange(n) for _ in range(rng.randint(0, max_len)))
        out[word] = rng.randrange(1, pres.p)
    return Element(out)


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


class TestPresentation:
    def test_bundled(self, polyxy):
        assert polyxy.generators == ("x", "y")
        assert polyxy.p == 32003
        assert polyxy.unital

    def test_rule_must_decrease(self):
        with pytest.raises(PresentationError, match="deglex"):
            presentation_from_dict({"generators": ["x", "y"], "rules": [{"lhs": "x*y", "rhs": "y*x"}]})

    def test_unknown_keys(self):
        with pytest.raises(PresentationError, match="Unknown"):
            presentation_from_dict({"generators": ["x"], "relations": []})

    def test_duplicate_generators(self):
        with pytest.raises(PresentationError, match="distinct"):
            presentation_from_dict({"generators": ["x", "x"]})

    def test_non_prime_characteristic(self):
        with pytest.raises(ValueError):
            presentation_from_dict({"char": 6, "generators": ["x"]})

    def test_unit_in_non_unital_rule(self):
        with pytest.raises(InputError):
            presentation_from_dict({"unital": False, "generators": ["x"], "rules": [{"lhs": "x*x", "rhs": "1"}]})

    @pytest.mark.parametrize("rules", [5, "x*x", {"lhs": "x*x", "rhs": "0"}, None])
    def test_rules_must_be_a_list(self, rules):
        with pytest.raises(PresentationError, match="rules"):
            presentation_from_dict({"generators": ["x"], "rules": rules})

    def test_dict_roundtrip(self, z2grp):
        again = presentation_from_dict(presentation_to_dict(z2grp))
        assert presentation_hash(again) == presentation_hash(z2grp)

    def test_hash_ignores_name(self, free2):
        renamed = presentation_from_dict(presentation_to_dict(free2), name="other")
        assert presentation_hash(renamed) == presentation_hash(free2)


class TestGroupAlgebra:
    def test_free_group(self, f2grp):
        assert presentation_hash(group_algebra(["x", "y"])) == presentation_hash(f2grp)

    def test_free_abelian_group(self, z2grp):
        pres = group_algebra(
            ["x", "y"], relations=[("y*x", "x*y"), ("y*X", "X*y"), ("Y*x", "x*Y"), ("Y*X", "X*Y")]
        )
        assert presentation_hash(pres) == presentation_hash(z2grp)

    def test_inverses(self, f2grp):
        assert parse_element("x*X", f2grp) == f2grp.one()
        assert parse_element("Y*y*x", f2grp) == parse_element("x", f2grp)

    def test_self_inverse_name_rejected(self):
        with pytest.raises(PresentationError):
            group_algebra(["_"])


# ---------------------------------------------------------------------------
# Parsing and formatting
# ---------------------------------------------------------------------------


class TestParsing:
    def test_commutator_vanishes(self, polyxy):
        assert parse_element("y*x - x*y", polyxy).is_zero

    def test_powers_and_coefficients(self, free2):
        e = parse_element("x*y + 2*x^2", free2)
        assert format_element(e, free2) == "2*x*x + x*y"

    def test_negative_coefficients(self, free2):
        assert format_element(parse_element("-x", free2), free2) == "-x"
        assert format_element(parse_element("1 - y", free2), free2) == "1 - y"

    def test_zero(self, free2):
        assert format_element(parse_element("x - x", free2), free2) == "0"

    def test_format_parse_inverse(self, z2grp):
        rng = random.Random(8)
        for _ in range(50):
            e = normal_form(random_element(z2grp, rng), z2grp)
            assert parse_element(format_element(e, z2grp), z2grp) == e

    def test_unknown_generator(self, free2):
        with pytest.raises(ElementSyntaxError, match="Unknown generator"):
            parse_element("z", free2)

    @pytest.mark.parametrize("text", ["", "x**y", "x+", "x*(y)", "x y +", "²*x", "x^²", "٣"])
    def test_syntax_errors(self, free2, text):
        with pytest.raises(ElementSyntaxError):
            parse_element(text, free2)

    def test_unit_in_non_unital(self):
        pres = presentation_from_dict({"unital": False, "generators": ["x"]})
        with pytest.raises(ElementSyntaxError):
            parse_element("1 + x", pres)

    def test_parse_word(self, free2):
        assert parse_word("x*y^2", free2) == (0, 1, 1)
        assert parse_word("1", free2) == ()
        assert format_word((1, 0), free2) == "y*x"
        with pytest.raises(ElementSyntaxError):
            parse_word("2*x", free2)


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------


class TestArithmetic:
    def test_relations(self, ex33):
        x, y = parse_element("x", ex33), parse_element("y", ex33)
        assert multiply(x, x, ex33).is_zero
        assert multiply(x, y, ex33).is_zero
        assert format_element(multiply(y, x, ex33), ex33) == "y*x"

    def test_commutative_product(self, polyxy):
        a = parse_element("y^2*x + 1", polyxy)
        b = parse_element("x*y", polyxy)
        assert multiply(a, b, polyxy) == multiply(b, a, polyxy)
        assert format_element(multiply(a, b, polyxy), polyxy) == "x*y + x*x*y*y*y"

    def test_normal_form_is_idempotent(self, polyxy, z2grp, ex33):
        rng = random.Random(17)
        for pres in (polyxy, z2grp, ex33):
            for _ in range(50):
                e = random_element(pres, rng, max_len=4)
                nf = normal_form(e, pres)
                pytest.assume(normal_form(nf, pres) == nf)
                pytest.assume(all(pres.is_normal_word(w) for w in nf.terms))

    def test_normal_form_is_linear(self, polyxy, f2grp):
        rng = random.Random(23)
        for pres in (polyxy, f2grp):
            for _ in range(50):
                a, b = random_element(pres, rng), random_element(pres, rng)
                c = rng.randrange(pres.p)
                lhs = normal_form(add(a, b, pres, c), pres)
                rhs = add(normal_form(a, pres), normal_form(b, pres), pres, c)
                pytest.assume(lhs == rhs)

    def test_multiplication_is_associative(self, polyxy, z2grp, ex33):
        rng = random.Random(29)
        for pres in (polyxy, z2grp, ex33):
            for _ in range(30):
                a, b, c = (random_element(pres, rng, max_len=2) for _ in range(3))
                pytest.assume(multiply(multiply(a, b, pres), c, pres) == multiply(a, multiply(b, c, pres), pres))

    def test_distributive(self, f2grp):
        rng = random.Random(31)
        for _ in range(30):
            a, b, c = (random_element(f2grp, rng, max_len=2) for _ in range(3))
            lhs = multiply(add(a, b, f2grp), c, f2grp)
            rhs = add(multiply(a, c, f2grp), multiply(b, c, f2grp), f2grp)
            assert lhs == rhs


# ---------------------------------------------------------------------------
# Confluence and windows
# ---------------------------------------------------------------------------


NON_CONFLUENT = {"generators": ["x", "y"], "rules": [{"lhs": "x*y", "rhs": "y"}, {"lhs": "y*x", "rhs": "x"}]}


class TestConfluence:
    @pytest.mark.parametrize("name", ["free2", "polyxy", "ex33", "z2grp", "f2grp", "kx"])
    def test_bundled_are_confluent(self, name, request):
        pres = request.getfixturevalue(name)
        assert confluence_check(pres, 8) == []

    def test_overlap_detected(self):
        pres = presentation_from_dict(NON_CONFLUENT)
        ambiguities = confluence_check(pres, 4)
        assert ambiguities
        assert ambiguities[0].word == (0, 1, 0)
        assert ambiguities[0].left != ambiguities[0].right

    def test_overlap_beyond_bound_ignored(self):
        assert confluence_check(presentation_from_dict(NON_CONFLUENT), 2) == []

    def test_basis_refused(self):
        pres = presentation_from_dict(NON_CONFLUENT)
        with pytest.raises(NonConfluentError) as exc:
            enumerate_basis(pres, 2)
        assert exc.value.ambiguities


class TestWindow:
    @pytest.mark.parametrize(
        "name, degree, size", [("free2", 3, 15), ("polyxy", 3, 10), ("ex33", 3, 7), ("kx", 5, 6), ("f2grp", 2, 17)]
    )
    def test_sizes(self, name, degree, size, request):
        assert enumerate_basis(request.getfixturevalue(name), degree).size == size

    def test_deglex_order(self, free2):
        window = enumerate_basis(free2, 2)
        assert window.words == ((), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1))
        assert list(window.columns_up_to(1)) == [0, 1, 2]

    def test_cached(self, free2):
        assert enumerate_basis(free2, 3) is enumerate_basis(free2, 3)

    def test_vector_overflow(self, kx):
        window = enumerate_basis(kx, 2)
        with pytest.raises(TruncationOverflow):
            window.vector(parse_element("x^3", kx))

    def test_element_roundtrip(self, polyxy):
        window = enumerate_basis(polyxy, 3)
        e = parse_element("3*x*y - y^2 + 1", polyxy)
        assert window.element(window.vector(e)) == e

    def test_right_multiply(self, polyxy):
        window = enumerate_basis(polyxy, 3)
        w = window.span_elements([polyxy.one(), parse_element("y", polyxy)])
        wx = right_multiply_subspace(w, parse_element("x", polyxy), window)
        assert wx == window.span_elements([parse_element("x", polyxy), parse_element("x*y", polyxy)])

    def test_right_multiply_overflow(self, kx):
        window = enumerate_basis(kx, 3)
        w = window.span_words([(0, 0, 0)])
        with pytest.raises(TruncationOverflow):
            right_multiply_subspace(w, parse_element("x", kx), window)

    def test_injective_on_domains(self, free2, polyxy):
        rng = random.Random(37)
        for pres in (free2, polyxy):
            window = enumerate_basis(pres, 6)
            columns = list(window.columns_up_to(3))
            for _ in range(40):
                w = window.span_words(window.words[c] for c in rng.sample(columns, rng.randint(1, 6)))
                r = normal_form(random_element(pres, rng, max_len=3), pres)
                if r.is_zero:
                    continue
                pytest.assume(right_multiply_subspace(w, r, window).dim == w.dim)

    def test_word_vector(self, polyxy):
        window = enumerate_basis(polyxy, 3)
        assert window.word_vector((0, 1)) == {window.index[(0, 1)]: 1}
        assert window.word_vector((1, 0, 1)) == window.vector(parse_element("x*y^2", polyxy))
        assert window.span_word_images([(1, 0), (0, 1)]).dim == 1

    def test_letter_cache_is_bounded(self, free2):
        multiply(parse_element("x*y + y", free2), parse_element("y*x", free2), free2)
        info = free2._letter_cache.cache_info()
        assert info.maxsize == LETTER_CACHE_SIZE
        assert 0 < info.currsize <= LETTER_CACHE_SIZE

    def test_field_follows_presentation(self):
        pres = presentation_from_dict({"char": 5, "generators": ["x"]})
        assert enumerate_basis(pres, 1).field == FieldSpec(5)


class TestZeroDivisors:
    def test_found(self, ex33):
        a, b = find_zero_divisors(ex33, 2)
        assert multiply(a, b, ex33).is_zero
        assert format_element(a, ex33) == "x"

    def test_free_algebra(self, free2):
        assert find_zero_divisors(free2, 3) is None
