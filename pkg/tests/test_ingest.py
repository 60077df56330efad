import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bayes_skeptic.errors import BadDigit, MissingData, ParseError, TooShort
from bayes_skeptic.game import Move, path_stats
from bayes_skeptic.ingest import (
    PI_PREFIX,
    PriceSeries,
    bundled_pi_digits,
    digits_to_moves,
    load_moves,
    load_path_file,
    prices_to_moves,
    read_digit_file,
    read_price_csv,
    resolve_data_path,
    save_moves,
    spigot_pi_digits,
)

H, T = Move.HEADS, Move.TAILS


def test_prices_to_moves_examples():
    assert prices_to_moves([100, 101, 99]) == [H, T]
    assert prices_to_moves(list(range(1, 502))) == [H] * 500


def test_price_ties_are_tails():
    assert prices_to_moves([5, 5, 6, 6]) == [T, H, T]


@given(st.lists(st.floats(0.01, 1e6), min_size=2, max_size=200))
def test_prices_to_moves_length(prices):
    assert len(prices_to_moves(prices)) == len(prices) - 1


def test_price_series_validation():
    with pytest.raises(TooShort):
        PriceSeries.from_prices([100.0])
    with pytest.raises(TooShort):
        prices_to_moves([])
    with pytest.raises(ValueError):
        PriceSeries.from_prices([100.0, -1.0])


def test_digits_to_moves_examples():
    assert digits_to_moves("141592653589793") == [T, T, T, H, H, T, H, H, T, H, H, H, H, H, T]
    assert digits_to_moves("0000") == [T] * 4


@pytest.mark.parametrize("bad", ["", "12a4", "3.14", " 1"])
def test_digits_to_moves_rejects(bad):
    with pytest.raises(BadDigit):
        digits_to_moves(bad)


@given(st.text(alphabet="0123456789", min_size=1, max_size=300))
def test_digits_to_moves_position_preserving(digits):
    moves = digits_to_moves(digits)
    assert len(moves) == len(digits)
    assert all((m is H) == (d >= "5") for m, d in zip(moves, digits))


def test_load_moves_examples(tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("H\nT\nH")
    assert load_moves(f) == [H, T, H]
    f.write_text("1\n0\n")
    assert load_moves(f) == [H, T]
    f.write_text("")
    assert load_moves(f) == []


def test_load_moves_reports_line(tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("H\n\nT\nX\n")
    with pytest.raises(ParseError) as err:
        load_moves(f)
    assert "line 4" in str(err.value)


@given(st.lists(st.sampled_from([H, T]), max_size=300))
def test_save_load_round_trip(tmp_path_factory, moves):
    f = tmp_path_factory.mktemp("rt") / "path.txt"
    save_moves(f, moves)
    assert load_moves(f) == moves


def test_read_price_csv(tmp_path):
    f = tmp_path / "prices.csv"
    f.write_text("label,open\n2000-01-04,100\n2000-01-05,101.5\n\n2000-01-06,101.5\n2000-01-07,99\n")
    series = read_price_csv(f)
    assert series.labels[0] == "2000-01-04"
    assert prices_to_moves(series) == [H, T, T]
    assert load_path_file(f) == [H, T, T]


@pytest.mark.parametrize(
    "text,line",
    [("date,price\n1,2\n", 1), ("label,open\na,1\nb,x\n", 3), ("label,open\na,1\nb,2,3\n", 3)],
)
def test_read_price_csv_errors(tmp_path, text, line):
    f = tmp_path / "p.csv"
    f.write_text(text)
    with pytest.raises(ParseError) as err:
        read_price_csv(f)
    assert f"line {line}" in str(err.value)


def test_read_price_csv_too_short(tmp_path):
    f = tmp_path / "p.csv"
    f.write_text("label,open\na,1\n")
    with pytest.raises(TooShort):
        read_price_csv(f)


def test_read_digit_file(tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("\n31415\n\n")
    assert read_digit_file(f) == "31415"
    f.write_text("31\n41\n")
    with pytest.raises(ParseError):
        read_digit_file(f)


def test_load_path_file_detection(tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("5051\n")
    assert load_path_file(f) == [H, T, H, T]
    f.write_text("1\n0\n1\n")
    assert load_path_file(f) == [H, T, H]


def test_resolve_data_path(tmp_path):
    assert resolve_data_path("pi500.txt").name == "pi500.txt"
    with pytest.raises(MissingData):
        resolve_data_path(tmp_path / "missing.txt")
    with pytest.raises(MissingData):
        resolve_data_path("no-such-bundled-file.txt")


def test_spigot_prefix():
    assert spigot_pi_digits(15) == PI_PREFIX


def test_bundled_digits_match_spigot(pi_digits):
    assert len(pi_digits) == 500
    assert pi_digits.startswith(PI_PREFIX)
    assert pi_digits == spigot_pi_digits(500)


def test_bundled_digits_match_mpmath(pi_digits):
    with mpmath.workdps(520):
        text = mpmath.nstr(mpmath.pi, 510, strip_zeros=False)
    assert text.startswith("3.")
    assert pi_digits == text[2:502]


def test_pi_digit_counts(pi_digits):
    stats = path_stats(digits_to_moves(pi_digits), 0.5)
    assert (stats.h, stats.t) == (239, 261)
    assert bundled_pi_digits() == pi_digits
