"""Tests for elements of Γ(B4): realization, orders, normal form, growth."""
from random import Random

import pytest

from app.services.b4 import ALPHA, EPSILON, P, Q, eta_power
from app.services.group import (
    BETA,
    EXCEEDS_CAP,
    SYMBOLS,
    GroupWord,
    GroupWordError,
    NormalForm,
    apply,
    conjugate,
    element_equal,
    enumerate_elements,
    klein_table,
    machine_power,
    normal_form,
    order,
    parse_group_word,
    power,
    realize,
    realize_eta_power,
    verify_cor42,
    verify_cor57,
    verify_lemma55,
    xi_machine,
)
from app.services.mealy import equivalent, is_identity, minimize, transduce_up
from app.services.words import ONES, UPWord, random_upword


def word(text: str) -> GroupWord:
    return parse_group_word(text)


def random_word(rng: Random, max_length: int, symbols: tuple = SYMBOLS) -> GroupWord:
    return GroupWord(tuple(rng.choice(symbols) for _ in range(rng.randint(0, max_length))))


class TestGroupWord:
    """Tests for generator word syntax."""

    @pytest.mark.parametrize(
        "text,symbols",
        [
            ("paq", (P, ALPHA, Q)),
            ("-", ()),
            ("", ()),
            ("pe", (P, EPSILON)),
            ("pb", (P, BETA)),
            ("pαq", (P, ALPHA, Q)),
        ],
    )
    def test_parse(self, text: str, symbols: tuple):
        """Test that generator words parse, including ASCII and Greek spellings."""
        assert parse_group_word(text).symbols == symbols

    @pytest.mark.parametrize("text", ["pxq", "p q", "P", "01"])
    def test_parse_errors(self, text: str):
        """Test that unknown symbols are rejected."""
        with pytest.raises(GroupWordError):
            parse_group_word(text)

    def test_rendering(self):
        """Test that words render in ASCII and in Greek."""
        assert str(word("paq")) == "paq"
        assert word("paq").pretty() == "pαq"
        assert str(GroupWord()) == "-"

    def test_inverse_is_reversal(self):
        """Test that the inverse of an involution word is its reversal."""
        assert word("paq").inverse() == word("qap")

    def test_machine_states_expand_beta(self):
        """Test that β expands to α, q and ε is dropped."""
        assert word("pbe").machine_states() == (P, ALPHA, Q)

    def test_foreign_symbol(self):
        """Test that a word cannot hold a foreign symbol."""
        with pytest.raises(GroupWordError):
            GroupWord(("x",))


class TestRealization:
    """Tests for apply and realize."""

    def test_apply(self):
        """Test that words act on u(v) words left to right."""
        assert apply(word("pqp"), ONES) == UPWord("10", "1")
        assert apply(GroupWord(), UPWord("0", "1")) == UPWord("0", "1")

    @pytest.mark.parametrize("ell", range(6))
    def test_alpha_q_flips_next_letter(self, ell: int):
        """Test that αq flips the letter after the first 0 at every parity."""
        x = UPWord("1" * ell + "0" + "1", "0")
        assert apply(word("aq"), x) == UPWord("1" * ell + "00", "0")

    def test_realize_sizes(self):
        """Test that realized machines have the expected sizes."""
        assert realize(GroupWord()).state_count == 1
        assert realize(word("pp")).state_count == 2
        assert realize(word("pp"), minimal=True).state_count == 1

    def test_realize_xi(self):
        """Test that the realized ξ sends 1^ω to 00(1)."""
        assert transduce_up(minimize(realize(word("paq"))), ONES) == UPWord("00", "1")
        assert transduce_up(xi_machine(), ONES) == UPWord("00", "1")

    def test_realization_soundness(self, rng: Random):
        """Test that realized machines agree with direct application."""
        for _ in range(100):
            w = random_word(rng, 8)
            x = random_upword(rng)
            assert apply(w, x) == transduce_up(realize(w, minimal=True), x)
            assert equivalent(realize(w), realize(w, minimal=True))


class TestEquality:
    """Tests for element equality."""

    @pytest.mark.parametrize(
        "first,second,expected",
        [
            ("qa", "aq", True),
            ("p", "q", False),
            ("aqa", "q", True),
            ("b", "aq", True),
            ("e", "-", True),
            ("pq", "qp", False),
        ],
    )
    def test_element_equal(self, first: str, second: str, expected: bool):
        """Test that element equality matches the known relations."""
        assert element_equal(word(first), word(second)) == expected

    @pytest.mark.parametrize("generator", ["p", "q", "a", "e"])
    def test_involutions(self, generator: str):
        """Test that every generator squares to the identity."""
        assert element_equal(word(generator * 2), GroupWord())


class TestOrder:
    """Tests for orders of elements."""

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("p", 2),
            ("q", 2),
            ("a", 2),
            ("aq", 2),
            ("pq", 8),
            ("pa", 4),
            ("qp", 8),
            ("ap", 4),
            ("-", 1),
            ("e", 1),
        ],
    )
    def test_orders(self, text: str, expected: int):
        """Test that the known element orders are found."""
        assert order(word(text), 4096) == expected

    def test_xi_exceeds_cap(self):
        """Test that ξ exceeds the default cap."""
        assert order(word("paq"), 4096) is EXCEEDS_CAP
        assert EXCEEDS_CAP.value == "EXCEEDS_CAP"

    def test_small_cap(self):
        """Test that the cap bounds the search exactly."""
        assert order(word("pq"), 7) is EXCEEDS_CAP
        assert order(word("pq"), 8) == 8

    def test_cap_must_be_positive(self):
        """Test that a non-positive cap is rejected."""
        with pytest.raises(GroupWordError):
            order(word("p"), 0)

    def test_conjugation_preserves_order(self, rng: Random):
        """Test that conjugation keeps the order."""
        for _ in range(20):
            w = random_word(rng, 4, (P, Q, ALPHA))
            h = random_word(rng, 3, (P, Q, ALPHA))
            found = order(w, 64)
            if found is not EXCEEDS_CAP:
                assert order(conjugate(w, h), 64) == found

    def test_powers(self):
        """Test that powers reach the identity exactly at the order."""
        assert is_identity(power(word("pq"), 8))
        assert not is_identity(power(word("pq"), 4))
        assert is_identity(power(word("paq"), 0))
        with pytest.raises(GroupWordError):
            machine_power(realize(word("p")), -1)


class TestConjugate:
    """Tests for conjugation."""

    def test_conjugate(self):
        """Test that conjugation wraps the word in h and its inverse."""
        assert conjugate(word("pq"), word("p")) == word("ppqp")
        assert conjugate(word("pq"), GroupWord()) == word("pq")
        assert order(conjugate(word("pq"), word("p")), 4096) == 8

    def test_commuting_conjugate(self):
        """Test that q commutes with α."""
        assert element_equal(conjugate(word("q"), word("a")), word("q"))


class TestNormalForm:
    """Tests for the alternating normal form."""

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("qb", "a"),
            ("ppqq", "IDENTITY"),
            ("paq", "pb"),
            ("aqa", "q"),
            ("pqpp", "pq"),
            ("qpq", "qpq"),
            ("epe", "p"),
            ("pqpap", "pqpap"),
            ("-", "IDENTITY"),
        ],
    )
    def test_normal_form(self, text: str, expected: str):
        """Test that normal forms reduce to the expected words."""
        assert str(normal_form(word(text))) == expected

    def test_normal_form_fields(self):
        """Test that the normal form records lead, core and trail."""
        form = normal_form(word("paq"))
        assert form == NormalForm(lead=True, core=(BETA,), trail=False)
        assert normal_form(GroupWord()).is_identity

    def test_invalid_normal_forms(self):
        """Test that inconsistent normal forms are rejected."""
        with pytest.raises(GroupWordError):
            NormalForm(lead=True, core=(), trail=True)
        with pytest.raises(GroupWordError):
            NormalForm(core=(P,))

    def test_soundness_and_shape(self, rng: Random):
        """Test that normal forms denote the same element and alternate p with non-p."""
        for _ in range(100):
            w = random_word(rng, 12)
            symbols = normal_form(w).to_group_word().symbols
            assert element_equal(w, GroupWord(symbols))
            for left, right in zip(symbols, symbols[1:]):
                assert (left == P) != (right == P), f"{w} -> {symbols}"
            assert EPSILON not in symbols


class TestKleinTable:
    """Tests for the subgroup generated by α and q."""

    def test_klein_table(self):
        """Test that α and q generate a Klein four-group."""
        report = klein_table()
        assert report.passed, report.lines()
        assert report.elements == ["I", "α", "q", "αq"]
        assert report.table[0] == ["I", "α", "q", "αq"]
        assert report.table[1][2] == "αq"
        assert report.table[2][3] == "α"
        assert [report.table[i][i] for i in range(4)] == ["I"] * 4


class TestEnumeration:
    """Tests for the growth of Γ(B4)."""

    def test_first_lengths(self):
        """Test that the first sphere sizes are 1, 4, 9."""
        assert enumerate_elements(2) == [(0, 1), (1, 4), (2, 9)]

    def test_growth_is_strictly_increasing(self):
        """Test that the growth sequence strictly increases."""
        growth = [count for _, count in enumerate_elements(7)]
        assert all(later > earlier for earlier, later in zip(growth, growth[1:]))

    def test_negative_length(self):
        """Test that a negative length is rejected."""
        with pytest.raises(GroupWordError):
            enumerate_elements(-1)


class TestVerifications:
    """Tests for the group verification reports."""

    @pytest.mark.parametrize("level", range(5))
    def test_eta_power_machines(self, level: int):
        """Test that doubled η-power machines match the realized words."""
        expected = realize(GroupWord(eta_power(level)), minimal=True)
        assert equivalent(realize_eta_power(level), expected)

    def test_lemma55(self):
        """Test that the order checks all pass."""
        report = verify_lemma55(4096)
        assert report.passed, report.lines()
        assert len(report.checks) == 10

    def test_cor42(self):
        """Test that η-power images and machines are pairwise distinct."""
        report = verify_cor42(8)
        assert report.passed, report.lines()

    def test_cor57(self):
        """Test that ξ powers are distinct and separate 1^ω."""
        report = verify_cor57(8, 24)
        assert report.passed, report.lines()
        assert "cor57.separation[j=8]" in [check.name for check in report.checks]
