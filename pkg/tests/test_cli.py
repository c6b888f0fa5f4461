"""Parser/printer round trips and command behaviour of the cak CLI."""

from __future__ import annotations

import json
import random
from fractions import Fraction

from cak.cend import CendElement
from cak.cli import (
    format_element,
    format_poly,
    format_word,
    main,
    parse_element,
    parse_order,
    parse_polynomial,
    parse_rules,
    parse_word,
)
from cak.envelope import Report, s2_order
from cak.cli import _emit_report
from cak.freeconf import ConformalPolynomial, NormalWord
from cak.wk import V, pd, xi


def test_element_grammar_examples():
    assert parse_element("v") == CendElement.monomial(1, 0, 0, 0, 1)
    assert parse_element("D^2 xi1 del2 v^3") == CendElement.monomial(1, 2, 1, 2, 3)
    assert parse_element("D") == CendElement.monomial(1, 1, 0, 0, 0)
    assert parse_element("1") == CendElement.one()
    assert parse_element("-1") == CendElement.one().scale(-1)
    assert parse_element("0") == CendElement.zero()
    two_terms = parse_element("-2/3 v + D xi1")
    want = CendElement.monomial(Fraction(-2, 3), 0, 0, 0, 1) + CendElement.monomial(
        1, 1, 1, 0, 0
    )
    assert two_terms == want
    # whitespace never matters
    assert parse_element("  -2/3v+Dxi1 ") == want
    assert parse_element("v ^ 2 xi1") == parse_element("v^2 xi1")
    # product order inside a monomial carries the sign of reordering
    assert parse_element("del1 xi1") == parse_element("1 - xi1 del1")
    assert parse_element("v v^2") == parse_element("v^3")


def test_element_grammar_rejections():
    bad = ["", "xi1^2", "q", "xi", "2/0 v", "v +", "+", "3 3"]
    for s in bad:
        try:
            parse_element(s)
        except ValueError:
            pass
        else:
            raise AssertionError(f"parse_element accepted {s!r}")


def test_word_grammar_examples():
    w = parse_word("xi1.1(xi2.0(v))")
    assert w == NormalWord(0, (xi(1), xi(2), V), (1, 0))
    assert parse_word("D^2(del1.0(v))") == NormalWord(2, (pd(1), V), (0,))
    assert parse_word("v") == NormalWord(0, (V,), ())
    assert parse_word(" xi1 . 1 ( v ) ") == NormalWord(0, (xi(1), V), (1,))
    bad = ["v.1(v", "v)", "D(v)", "v.1(v).0(v)", "xi1.1()", "D^2", "v.1 v"]
    for s in bad:
        try:
            parse_word(s)
        except ValueError:
            pass
        else:
            raise AssertionError(f"parse_word accepted {s!r}")


def test_polynomial_grammar():
    p = parse_polynomial("del1.0(xi1) + xi1.0(del1) - v")
    want = (
        ConformalPolynomial.word(NormalWord(0, (pd(1), xi(1)), (0,)))
        + ConformalPolynomial.word(NormalWord(0, (xi(1), pd(1)), (0,)))
        - ConformalPolynomial.word(NormalWord(0, (V,), ()))
    )
    assert p == want
    assert parse_polynomial("2 v - 2 v").is_zero()
    assert parse_polynomial(format_poly(want)) == want


def _random_element(rng: random.Random) -> CendElement:
    out = CendElement.zero()
    for _ in range(rng.randint(1, 4)):
        coeff = Fraction(rng.choice([-6, -3, -1, 1, 2, 5]), rng.randint(1, 4))
        out = out + CendElement.monomial(
            coeff, rng.randint(0, 3), rng.randrange(8), rng.randrange(8), rng.randint(0, 3)
        )
    return out


def _random_word(rng: random.Random) -> NormalWord:
    pool = [V, xi(1), xi(2), xi(3), pd(1), pd(2), pd(3)]
    k = rng.randint(1, 4)
    letters = tuple(rng.choice(pool) for _ in range(k))
    indices = tuple(rng.randint(0, 3) for _ in range(k - 1))
    return NormalWord(rng.randint(0, 3), letters, indices)


def test_round_trip_thousand_elements_and_words():
    rng = random.Random(2024)
    for _ in range(1000):
        x = _random_element(rng)
        s = format_element(x)
        assert parse_element(s) == x
        assert format_element(parse_element(s)) == s
    for _ in range(1000):
        w = _random_word(rng)
        s = format_word(w)
        assert parse_word(s) == w
        assert format_word(parse_word(s)) == s


def test_rules_file_parsing():
    text = "\n".join(
        [
            "# contraction against the unit-weight generator",
            "del1.1(v) - del1",
            "",
            "xi1.1(v) - xi1   # trailing comment",
        ]
    )
    rules = parse_rules(text, s2_order(1))
    assert [r.name for r in rules] == ["line2", "line4"]
    assert rules[0].leading == NormalWord(0, (pd(1), V), (1,))
    try:
        parse_rules("D^1(v) - v", s2_order(1))
    except ValueError as exc:
        assert "line 1" in str(exc)
    else:
        raise AssertionError("D-bearing rule was accepted")


def test_order_flag_parsing():
    order = parse_order("del1, del2 xi1 xi2 v")
    assert order.rank(pd(1)) == 0 and order.rank(V) == 4
    try:
        parse_order(" , ")
    except ValueError:
        pass
    else:
        raise AssertionError("empty order accepted")


def test_cli_nprod_example(capsys):
    assert main(["nprod", "--rank", "1", "-n", "1", "v", "v"]) == 0
    assert capsys.readouterr().out.strip() == "v"


def test_cli_bracket_of_shifted_weight_generator(capsys):
    assert main(["bracket", "-n", "1", "v - D", "v - D"]) == 0
    assert capsys.readouterr().out.strip() == "2 v - 2 D"


def test_cli_locality_and_tables(capsys):
    assert main(["locality", "v", "D v"]) == 0
    first = capsys.readouterr().out
    assert first.strip().isdigit()
    assert main(["locality", "--map", "phi1", "--n", "3"]) == 0
    table = capsys.readouterr().out
    assert "xi3" in table and "del3" in table
    assert main(["table", "w", "--map", "phi2", "--n", "2"]) == 0
    capsys.readouterr()
    assert main(["table", "k", "--n", "1"]) == 0
    assert "{1}" in capsys.readouterr().out


def test_cli_reduce(capsys):
    # the anticommutation rule rewrites the wrongly ordered pair
    assert main(["reduce", "--n", "1", "xi1.0(del1)"]) == 0
    assert capsys.readouterr().out.strip() == "-del1.0(xi1) + v"
    assert main(["reduce", "--n", "1", "--order", "del1,xi1,v", "xi1.0(del1)"]) == 0
    assert capsys.readouterr().out.strip() == "-del1.0(xi1) + v"


def test_cli_reduce_with_rule_file(tmp_path, capsys):
    path = tmp_path / "rules.txt"
    path.write_text("# demo\ndel1.1(v) - del1\n", encoding="utf-8")
    assert main(["reduce", "--n", "1", "--rules", str(path), "2 del1.1(v)"]) == 0
    assert capsys.readouterr().out.strip() == "2 del1"
    bad = tmp_path / "bad.txt"
    bad.write_text("D^1(v) - v\n", encoding="utf-8")
    assert main(["reduce", "--n", "1", "--rules", str(bad), "v"]) == 2


def test_cli_indep(capsys):
    assert main(["indep", "v", "2 v"]) == 0
    assert "dependent at rank 1" in capsys.readouterr().out
    assert main(["indep", "--json", "v", "2 v"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {"rank": 1, "witness": {"0": "1", "1": "-1/2"}}
    assert main(["indep", "v", "D"]) == 0
    assert "independent" in capsys.readouterr().out


def test_cli_verify_json_and_exit_codes(capsys):
    code = main(["verify", "w", "--n", "1", "--map", "phi2", "--tmax", "1", "--len", "3", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"suite", "n", "map", "checks", "passed"}
    assert payload["passed"] is True
    assert all(set(c) == {"name", "status", "detail"} for c in payload["checks"])
    assert main(["verify", "k", "--n", "1"]) == 0
    assert "suite k" in capsys.readouterr().out
    assert main(["verify", "vir", "--tmax", "1", "--len", "1"]) == 0
    capsys.readouterr()
    assert main(["verify", "axioms", "--samples", "5", "--seed", "2"]) == 0
    capsys.readouterr()


def test_cli_compose(capsys):
    assert main(["compose", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "mixed-overlap" in out and "image under phi2: 0" in out
    assert main(["compose", "--n", "3", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["name"] for r in rows] == ["mixed-overlap", "triple-overlap"]
    assert all(r["image_zero"] for r in rows)


def test_cli_error_exits(capsys):
    try:
        main(["nprod", "-n", "1", "v"])  # missing an element
    except SystemExit as exc:
        assert exc.code == 2
    else:
        raise AssertionError("argparse should exit on missing arguments")
    assert main(["nprod", "-n", "1", "v", "q"]) == 2
    assert main(["nprod", "--rank", "1", "-n", "0", "xi2", "v"]) == 2
    assert main(["nprod", "-n", "-1", "v", "v"]) == 2
    assert main(["locality", "v"]) == 2
    assert main(["locality"]) == 2
    assert main(["reduce", "v"]) == 2
    assert main(["verify", "w"]) == 2
    capsys.readouterr()


def test_emit_report_failure_exit():
    rep = Report("w", 1, "phi2")
    rep.add("broken", False, "defect is nonzero")
    assert _emit_report(rep, False) == 1
    assert _emit_report(rep, True) == 1


def test_cli_output_is_deterministic(capsys):
    main(["verify", "k", "--n", "2", "--json"])
    first = capsys.readouterr().out
    main(["verify", "k", "--n", "2", "--json"])
    assert capsys.readouterr().out == first
    main(["table", "k", "--n", "3"])
    table1 = capsys.readouterr().out
    main(["table", "k", "--n", "3"])
    assert capsys.readouterr().out == table1
