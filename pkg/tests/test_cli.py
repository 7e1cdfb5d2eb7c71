import pytest

from ueaiso.cli import run


def _run(capsys, argv):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _data(out):
    return [ln for ln in out.splitlines() if not ln.startswith("wall-time:")]


def test_center_family1(capsys):
    code, out, _ = _run(capsys, ["center", "--catalog", "K6.3", "--field", "Q", "--truncate", "4"])
    assert code == 0
    assert "dim Z = 30" in out.splitlines()
    assert out.splitlines()[-1].startswith("wall-time: ")


def test_lcs(capsys):
    code, out, _ = _run(capsys, ["lcs", "--catalog", "L5.7", "--field", "Q"])
    assert code == 0 and "lcs dims: (5, 3, 2, 1)" in out


def test_validate_empty_file(capsys, tmp_path):
    f = tmp_path / "empty.lie"
    f.write_text("dim 0\nfield Q\n")
    code, _, err = _run(capsys, ["validate", str(f)])
    assert code == 1 and err.startswith("error:")


def test_validate_jacobi_failure(capsys, tmp_path):
    f = tmp_path / "bad.lie"
    f.write_text("field Q\ndim 3\n[1,2] = e.3\n[2,3] = e.1\n")
    code, out, _ = _run(capsys, ["validate", str(f)])
    assert code == 1 and "valid: no" in out


def test_validate_file_and_machine_mode(capsys, tmp_path):
    f = tmp_path / "h.lie"
    f.write_text("field GF(3)\ndim 3\n[1,2] = 1*e.3\n")
    code, out, _ = _run(capsys, ["validate", str(f), "--machine"])
    assert code == 0
    assert "valid=yes" in out and "dim=3" in out


def test_unknown_subcommand_and_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run(["lcs", "--catalog", "L5.7", "--nope"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_unknown_catalog_entry(capsys):
    code, _, err = _run(capsys, ["lcs", "--catalog", "K6.99"])
    assert code == 1 and "unknown catalog entry" in err


def test_parametric_entry(capsys):
    code, out, _ = _run(capsys, ["gr", "--catalog", "K6.24", "--param", "1/2", "--field", "GF(5)"])
    assert code == 0 and "component dims: (3, 1, 2)" in out
    code, _, err = _run(capsys, ["gr", "--catalog", "K6.24"])
    assert code == 1 and "--param" in err


def test_iso_certificate_exit_codes(capsys, tmp_path):
    m = tmp_path / "m.map"
    m.write_text("e.3 -> e.3 + e.1^2\n")
    code, out, _ = _run(capsys, ["iso", "L5.3", "L5.5", "--field", "GF(2)", "--truncate", "4", "--certificate", str(m)])
    assert code == 0 and "Isomorphic (certificate)" in out
    code, out, _ = _run(capsys, ["iso", "L5.3", "L5.5", "--field", "GF(5)", "--truncate", "4", "--certificate", str(m)])
    assert code == 0 and "CertificateInvalid" in out


def test_iso_search_verdicts(capsys):
    code, out, _ = _run(capsys, ["iso", "K6.6", "K6.7", "--field", "GF(5)", "--truncate", "5"])
    assert code == 0 and "NotIsomorphic (exhausted-search)" in out
    code, out, _ = _run(capsys, ["iso", "K6.6", "K6.11", "--field", "GF(5)", "--truncate", "5", "--budget", "2"])
    assert code == 2 and "Inconclusive (budget)" in out
    code, _, err = _run(capsys, ["iso", "L5.3", "L5.5", "--field", "Q"])
    assert code == 1 and "finite field" in err


def test_iso_reports_invariant_evidence(capsys):
    code, out, _ = _run(capsys, ["iso", "L5.3", "L5.6", "--field", "GF(3)", "--truncate", "4"])
    assert code == 0 and "(invariant:" in out


def test_quotient_writes_assoc_file(capsys, tmp_path):
    out_file = tmp_path / "q.assoc"
    code, out, _ = _run(capsys, ["quotient", "--catalog", "K6.13", "--field", "Q", "--truncate", "5",
                                 "--lcs-term", "4", "--out", str(out_file)])
    assert code == 0 and "dim A/I: 49" in out
    code, out2, _ = _run(capsys, ["fingerprint", str(out_file)])
    code, ref, _ = _run(capsys, ["fingerprint", "--catalog", "L5.5", "--field", "Q", "--truncate", "5"])
    fp = [ln for ln in _data(out2) if ln.startswith(("power", "center", "dim Z"))]
    fr = [ln for ln in _data(ref) if ln.startswith(("power", "center", "dim Z"))]
    assert fp and fp == fr


def test_screen_and_catalog(capsys):
    code, out, _ = _run(capsys, ["screen", "--dim", "5", "--field", "GF(5)"])
    assert code == 0 and "surviving pairs: {L5.3,L5.5}, {L5.6,L5.7}" in out
    code, out, _ = _run(capsys, ["catalog", "--dim", "6", "--field", "GF(2)"])
    assert code == 0 and "K6." not in out
    code, out, _ = _run(capsys, ["catalog", "list", "--dim", "5"])
    assert "L5.3    dim=5 class=3 lcs=(5, 2, 1)" in out


def test_catalog_show_roundtrip(capsys, tmp_path):
    code, out, _ = _run(capsys, ["catalog", "show", "K6.24", "--param", "2", "--field", "GF(5)"])
    assert code == 0
    text = "\n".join(_data(out)[1:]) + "\n"
    f = tmp_path / "k24.lie"
    f.write_text(text)
    code, out, _ = _run(capsys, ["gr", str(f)])
    assert code == 0 and "component dims: (3, 1, 2)" in out
    code, _, err = _run(capsys, ["catalog", "show"])
    assert code == 1


def test_table_dim5_char2(capsys):
    code, out, _ = _run(capsys, ["table", "--dim", "5", "--field", "GF(2)"])
    assert code == 0
    assert "isomorphic off-diagonal pairs: {L5.3,L5.5}, {L5.6,L5.7}" in out


GOLDEN = [
    ["validate", "--catalog", "L5.9", "--field", "GF(3)"],
    ["lcs", "--catalog", "K6.17"],
    ["gr", "--catalog", "K6.23", "--field", "GF(3)"],
    ["env", "--catalog", "L4.3", "--truncate", "3", "--table"],
    ["center", "--catalog", "K6.6", "--field", "GF(5)", "--truncate", "5"],
    ["fingerprint", "--catalog", "L5.6", "--truncate", "4", "--machine"],
    ["iso", "K6.17", "K6.18", "--field", "GF(3)", "--truncate", "6"],
    ["screen", "--dim", "6", "--field", "Q"],
]


@pytest.mark.parametrize("argv", GOLDEN, ids=[a[0] for a in GOLDEN])
def test_data_section_is_stable(capsys, argv):
    first = _run(capsys, argv)
    second = _run(capsys, argv)
    assert first[0] == second[0] == 0
    assert _data(first[1]) == _data(second[1])
