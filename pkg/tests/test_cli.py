from __future__ import annotations

import io
import json
import random
import subprocess
import sys

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from helpers import SMALL_WEIGHTS, ring
from wgraded.cli import InputError, ParseError, parse, parse_polynomials, parse_ring, run
from wgraded.core import Polynomial, random_form


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


# --- parsing ----------------------------------------------------------------------

def test_parse_xy_yz_x5():
    R, I = parse("x:2,y:4,z:5", "x*y; y*z; x^5")
    assert R.weights == (2, 4, 5)
    x, y, z = (Polynomial.variable(R, v) for v in range(3))
    assert I.generators == (x * y, y * z, x ** 5)


def test_parse_ring_sorts_and_keeps_names():
    R = parse_ring("b:3,a:2")
    assert R.weights == (2, 3) and R.names == ("a", "b")
    assert parse_ring("x:2,y:2,z:3").groups == ((2, 2), (3, 1))


def test_homogeneous_accepted():
    R, I = parse("x:2,y:3", "x^3+y^2")
    assert I.generators[0].degree() == 6


def test_inhomogeneous_rejected_with_degrees():
    with pytest.raises(InputError, match="2 vs 3"):
        parse("x:2,y:3", "x+y")


def test_syntax_error_position():
    with pytest.raises(ParseError) as err:
        parse("x:2,y:3", "x*(y")
    assert err.value.position == 4
    with pytest.raises(ParseError) as err:
        parse("x:2,y:3", "x*w")
    assert err.value.position == 2


def test_rational_coefficients_and_division():
    R = parse_ring("x:1,y:1")
    (f,) = parse_polynomials("3/2*x*y - (x^2)/4", R)
    assert f.terms == {(1, 1): mpq(3, 2), (2, 0): mpq(-1, 4)}
    with pytest.raises(InputError):
        parse_polynomials("x/y", R)


@given(st.sampled_from(SMALL_WEIGHTS), st.integers(0, 10**6))
def test_parse_print_round_trip(ws, seed):
    R = ring(ws)
    rng = random.Random(seed)
    f = random_form(R, rng.randint(0, 9), rng, 7)
    if rng.random() < 0.5:
        f = f.scale(mpq(rng.randint(-9, 9) or 1, rng.randint(1, 9)))
    text = f.to_str()
    (g,) = parse_polynomials(text, R) if f else (Polynomial.zero(R),)
    assert g == f
    assert g.to_str() == text


# --- commands -----------------------------------------------------------------------

def test_gin_fixture():
    code, out = call("gin", "x:2,y:4,z:5", "x*y; y*z; x^5", "--order", "wdegrevlex")
    assert code == 0 and out.strip() == "(x^3, x^2*z, x*y^2, y^3*z)"


def test_lexify_fixture():
    code, out = call("lexify", "x:2,y:7", "x^7*y^2; x^14*y", "--json")
    assert code == 1
    assert json.loads(out)["degree"] == 42


def test_hilbert_degree_zero():
    code, out = call("hilbert", "x:2,y:4,z:5", "x*y", "--from", "0", "--to", "0", "--json")
    assert code == 0
    data = json.loads(out)
    assert list(data["table"].values()) == [0]


@pytest.mark.parametrize("argv, code", [
    (("stable", "x:1,y:1", "x*y"), 1),
    (("stable", "x:1,y:1", "x^2"), 0),
    (("islex", "x:2,y:3", "x*y"), 1),
    (("stabilization", "x:2,y:2,z:3", "x^3; x*y*z"), 2),
    (("stabilization", "x:2,y:2,z:3", "x*y*z"), 0),
    (("lexify", "x:2,y:7", "x^14; y^5", "--max-degree", "10"), 2),
    (("gin", "x:2,y:3", "x+y"), 3),
    (("gin", "x:2,y:3"), 3),
    (("gin", "x:0,y:3", "y"), 3),
    (("gin", "x:2,y:3", "x", "--bogus"), 3),
    (("frobenius", "x:2,y:7"), 0),
    (("depth", "x:2,y:4,z:5", "x*y; y*z; x^5"), 0),
])
def test_exit_codes(argv, code):
    assert call(*argv)[0] == code


def test_unknown_command():
    assert call("wibble", "x:1")[0] == 3


def test_betti_json_schema():
    code, out = call("betti", "x:2,y:4,z:5", "x*y; y*z; x^5", "--json")
    assert code == 0
    assert json.loads(out)["betti"] == [[0, 6, 1], [0, 9, 1], [0, 10, 1], [1, 11, 1], [1, 14, 1]]


def test_reg_and_depth_fixture():
    assert json.loads(call("reg", "x:2,y:4,z:5", "x*y; y*z; x^5", "--json")[1])["regularity"] == 5
    assert json.loads(call("depth", "x:2,y:4,z:5", "x^3; x^2*z; x*y^2; y^3*z", "--json")[1])["depth"] == 0


def test_ideal_from_file(tmp_path):
    path = tmp_path / "ideal.txt"
    path.write_text("x*y; y*z; x^5\n")
    assert call("gin", "x:2,y:4,z:5", f"@{path}")[1].strip() == "(x^3, x^2*z, x*y^2, y^3*z)"


@pytest.mark.parametrize("argv", [
    ("gin", "x:1,y:1,z:2", "x^2+y^2; x*z+y^3", "--seed", "4", "--json"),
    ("polarize", "x:1,y:2,z:4", "x^8; x^6*y; x^4*y^2; x^2*y^3; y^4; x^2*y*z; x^6*z", "--json"),
    ("quasipoly", "x:2,y:3", "x^3", "--json"),
    ("lexify", "x:1,y:2,z:4", "x^4; y^2; x^3*y", "--all-orders", "--json"),
])
def test_output_is_byte_identical(argv):
    first = subprocess.run([sys.executable, "-m", "wgraded", *argv], capture_output=True)
    second = subprocess.run([sys.executable, "-m", "wgraded", *argv], capture_output=True)
    assert first.returncode == second.returncode
    assert first.stdout == second.stdout and first.stdout
