from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rank2comm.dsl import (
    JobSpec,
    PoleSpec,
    PotentialSpec,
    build_potential,
    format_spec,
    parse_spec,
    tokenize,
)
from rank2comm.errors import SpecError
from rank2comm.potentials import EllipticPotential, LocalPotential, PolynomialPotential, RationalPotential


def test_elliptic_example():
    spec = parse_spec("job check\ngenus 1\npotential elliptic_wp2 { n 1  g2 4/1  g3 0/1 }")
    assert spec.job == "check" and spec.genus == 1
    assert spec.potential == PotentialSpec("elliptic_wp2", (("n", 1), ("g2", Fraction(4)), ("g3", Fraction(0))))
    p = build_potential(spec.potential)
    assert isinstance(p, EllipticPotential)
    assert p.local_expansions(4)["0"].coeff(-4) == 280


def test_genus_zero_is_semantic_error():
    with pytest.raises(SpecError) as info:
        parse_spec("genus 0")
    assert (info.value.line, info.value.column) == (1, 7)


def test_rational_pole_example():
    spec = parse_spec("potential rational { pole { at 0/1  n 1  phi -4 280/1 } }")
    assert spec.job == "check" and spec.genus is None
    (pole,) = spec.potential.poles
    assert pole == PoleSpec(Fraction(0), ((-4, Fraction(280)),), 1)
    p = build_potential(spec.potential)
    assert isinstance(p, RationalPotential)
    assert p.local_expansions(3)["x=0"].to_dict() == {-4: 280}


def test_pole_n_fills_quantized_strength():
    spec = parse_spec("potential local { pole { at 1/2 n 2 phi 1 3/1 } }")
    assert dict(spec.potential.poles[0].phi) == {-4: 2376, 1: 3}
    assert isinstance(build_potential(spec.potential), LocalPotential)


def test_comments_and_whitespace():
    text = "# header\njob   curve # trailing\n\ngenus 2\npotential polynomial {\n  V 0/1 1/1\n  W 1/2\n}\n"
    spec = parse_spec(text)
    assert spec.job == "curve" and spec.genus == 2
    assert spec.potential.param("V") == (0, 1) and spec.potential.param("W") == (Fraction(1, 2),)
    assert isinstance(build_potential(spec.potential), PolynomialPotential)


def test_tokens_carry_positions():
    toks = tokenize("job check\n  genus 3")
    assert [(t.kind, t.line, t.column) for t in toks[:4]] == [
        ("word", 1, 1), ("word", 1, 5), ("word", 2, 3), ("int", 2, 9)]
    assert toks[-1].kind == "eof"


@pytest.mark.parametrize("text,line,col,expected", [
    ("job dance", 1, 5, {"check", "curve", "frobenius", "explore"}),
    ("genus 1\npotential elliptic_wp2 { n 1 g2 4 g3 0/1 }", 2, 33, {"<p/q>"}),
    ("potential rational { colour 1/1 }", 1, 22, {"constant", "pole", "}"}),
    ("potential rational { pole { at 0/1 where 1/1 } }", 1, 36, {"at", "n", "phi", "}"}),
    ("genus 1\ngenus 2\npotential local { }", 2, 1, None),
    ("potential elliptic_wp2 { n 1 g2 4/1 }", 1, 11, {"g3"}),
    ("genus 1", 2, 1, {"potential"}),
    ("potential elliptic_wp2 { n 1 g2 1/0 g3 0/1 }", 1, 33, {"<p/q>"}),
])
def test_errors_have_position_and_expected(text, line, col, expected):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    err = info.value
    assert (err.line, err.column) == (line, col)
    if expected is not None:
        assert set(err.expected) == expected
    assert f"{line}:{col}" in str(err)


@pytest.mark.parametrize("text", [
    "potential elliptic_wp2 { n 1 g2 4/1 g3 1/1 shift zero }",
    "potential elliptic_wp2 { n 2 g2 4/1 g3 0/1 shift zero }",
    "potential rational { pole { at 0/1 n 1 } pole { at 0/1 n 2 } }",
    "potential rational { pole { at 0/1 phi -4 280/1 phi 1 1/1 } }",
    "potential local { pole { at 0/1 phi -4 280/1 phi -4 1/1 } }",
    "potential local { pole { at 0/1 n 1 phi -4 300/1 } }",
    "potential local { pole { n 1 } }",
    "potential polynomial { V 1/1 V 2/1 }",
    "potential elliptic_wp2 { n 0 g2 4/1 g3 0/1 }",
    "truncation 0\npotential local { }",
    "potential local { pole { at 0/1 n 1 } } $",
])
def test_semantic_and_lexical_errors(text):
    with pytest.raises(SpecError):
        parse_spec(text)


def test_irrational_shift_uses_quadratic_field():
    spec = parse_spec("potential elliptic_wp2 { n 1 g2 2/1 g3 0/1 shift plus }")
    p = build_potential(spec.potential)
    assert p.centers() == ["0", "omega"]


# random valid specs for the round trip
rats = st.fractions(min_value=-50, max_value=50, max_denominator=9)
poles = st.builds(
    lambda at, n, phi: PoleSpec(at, tuple(sorted((e, v) for e, v in phi.items() if v)), n),
    rats, st.one_of(st.none(), st.integers(1, 4)),
    st.dictionaries(st.integers(-3, 6), rats, max_size=3),
)


def _with_n(p: PoleSpec) -> PoleSpec:
    if p.n is None:
        return p
    n = p.n
    phi = dict(p.phi)
    phi[-4] = Fraction(n * (4 * n + 1) * (4 * n + 3) * (4 * n + 4))
    return PoleSpec(p.at, tuple(sorted(phi.items())), n)


pole_lists = st.lists(poles.map(_with_n), max_size=3, unique_by=lambda p: p.at)

potentials = st.one_of(
    st.builds(lambda n, g2, g3: PotentialSpec("elliptic_wp2", (("n", n), ("g2", g2), ("g3", g3))),
              st.integers(1, 5), rats, rats),
    st.builds(lambda g2, sh: PotentialSpec("elliptic_wp2", (("n", 1), ("g2", g2), ("g3", Fraction(0)), ("shift", sh))),
              rats, st.sampled_from(["zero", "plus", "minus"])),
    st.builds(lambda g2, g3, a, b: PotentialSpec("elliptic", (("g2", g2), ("g3", g3), ("wp2", a), ("wp1", b))),
              rats, rats, rats, rats),
    st.builds(lambda c, ps: PotentialSpec(
        "rational", (("constant", c),),
        tuple(PoleSpec(p.at, tuple((e, v) for e, v in p.phi if e < 0), p.n) for p in ps)), rats, pole_lists),
    st.builds(lambda ps: PotentialSpec("local", (), tuple(ps)), pole_lists),
    st.builds(lambda v, w: PotentialSpec("polynomial", (("V", tuple(v)), ("W", tuple(w)))),
              st.lists(rats, min_size=1, max_size=4), st.lists(rats, min_size=1, max_size=4)),
)
jobs = st.builds(
    JobSpec,
    st.sampled_from(["check", "curve", "frobenius", "explore"]),
    potentials,
    st.one_of(st.none(), st.integers(1, 6)),
    st.one_of(st.none(), st.integers(1, 80)),
    st.lists(rats, max_size=3).map(tuple),
    st.one_of(st.none(), st.sampled_from(["json", "text"])),
)


@settings(max_examples=100)
@given(jobs)
def test_parse_print_roundtrip(spec):
    text = format_spec(spec)
    again = parse_spec(text)
    assert again == spec
    assert format_spec(again) == text
