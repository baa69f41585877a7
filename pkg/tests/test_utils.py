import os
import tempfile
from fractions import Fraction

import numpy as np
import pytest

from utils import (
    resolve_and_verify_save_path,
    parse_number,
    format_number,
    format_sig,
    format_exponent,
    max_relative_error,
    matrices_close,
    sanitize_filename,
    atomic_write_text,
    append_error_log,
    format_elapsed,
)


def test_resolve_and_verify_save_path_empty():
    path, warning = resolve_and_verify_save_path("", default_fallback="temp_default")
    assert path == "temp_default"
    assert warning is None


def test_resolve_and_verify_save_path_valid():
    with tempfile.TemporaryDirectory() as tmpdir:
        path, warning = resolve_and_verify_save_path(
            tmpdir, default_fallback="temp_default"
        )
        assert os.path.abspath(path) == os.path.abspath(tmpdir)
        assert warning is None


def test_resolve_and_verify_save_path_create_nonexistent():
    with tempfile.TemporaryDirectory() as tmpdir:
        target_path = os.path.join(tmpdir, "new_sub_dir")
        assert not os.path.exists(target_path)

        path, warning = resolve_and_verify_save_path(
            target_path, default_fallback="temp_default"
        )
        assert os.path.exists(target_path)
        assert os.path.abspath(path) == os.path.abspath(target_path)
        assert warning is not None
        assert "creata" in warning.lower() or "created" in warning.lower()


def test_parse_number_kinds():
    assert parse_number("3") == 3 and isinstance(parse_number("3"), int)
    assert parse_number("-1/2") == Fraction(-1, 2)
    # p/q intero torna int
    assert parse_number("4/2") == 2 and isinstance(parse_number("4/2"), int)
    assert parse_number("0.25") == 0.25
    for bad in ("", "abc", "inf", "nan"):
        with pytest.raises(ValueError):
            parse_number(bad)


def test_format_number_is_locale_independent():
    assert format_number(12) == "12"
    assert format_number(np.int64(7)) == "7"
    assert format_number(0.1) == "0.10000000000000001"
    assert float(format_number(1 / 3)) == 1 / 3
    assert format_sig(0.38196601125) == "0.381966"
    assert format_exponent(Fraction(1, 2)) == "1/2"
    assert format_exponent(2) == "2"


def test_max_relative_error():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    assert max_relative_error(a, a) == 0.0
    b = a.copy()
    b[1, 1] += 4e-10
    assert max_relative_error(a, b) == pytest.approx(1e-10)
    assert matrices_close(a, b, 1e-9)
    assert not matrices_close(a, b, 1e-11)
    assert max_relative_error(a, np.ones((3, 3))) == float("inf")


def test_sanitize_filename():
    assert sanitize_filename("bounds divlat:12") == "bounds_divlat12"
    assert sanitize_filename("///") == "Latmat_Report"


def test_atomic_write_text_replaces_content(tmp_path):
    target = tmp_path / "sub" / "file.txt"
    atomic_write_text(str(target), "primo\n")
    atomic_write_text(str(target), "secondo\n")
    assert target.read_text(encoding="utf-8") == "secondo\n"
    # nessun file temporaneo rimasto
    assert [p.name for p in target.parent.iterdir()] == ["file.txt"]


def test_append_error_log(tmp_path):
    log = tmp_path / "error.log"
    try:
        raise RuntimeError("boom")
    except RuntimeError as e:
        append_error_log(type(e), e, e.__traceback__, log_path=str(log))
    text = log.read_text(encoding="utf-8")
    assert "=== UNHANDLED EXCEPTION" in text
    assert "RuntimeError: boom" in text


def test_format_elapsed():
    assert format_elapsed(0) == "0s"
    assert format_elapsed(75) == "1m 15s"
    assert format_elapsed(3723) == "1h 02m 03s"
    assert format_elapsed(90061) == "1g 01h 01m 01s"
