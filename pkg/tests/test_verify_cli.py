import csv
import json
import math
import subprocess
import sys
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from kruglov.dist import ccdf
from kruglov.operators import h_m_dist, t_n_dist
from kruglov.verify.claims import (
    cmd_corollary10,
    cmd_corollary12,
    cmd_corollary13,
    cmd_criterion,
    cmd_lemma5,
    cmd_lemma6,
    cmd_lemma7,
    cmd_remark,
    cmd_theorem8,
    limit_worst,
    orlicz_rho,
    subset_power_gaps,
)
from kruglov.verify.cli import claim_kwargs, main, read_config
from kruglov.verify.report import EvidenceRow, VerificationReport, exit_code


def strip_runtime(doc):
    doc = dict(doc)
    doc.pop("runtime_ms")
    return doc


# --- report ------------------------------------------------------------------


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(0, 2)), max_size=8))
def test_verdict_is_fail_iff_a_row_is_violated(rows):
    rep = VerificationReport("x", "anchor", {})
    for i, (l, r, s) in enumerate(rows):
        rep.add(i, F(l), F(r), F(s))
    rep.finalize()
    violated = any(l > r + s for l, r, s in rows)
    assert (rep.verdict == "fail") == violated


def test_row_operators():
    assert EvidenceRow("a", 1, 1, op="==").holds()
    assert not EvidenceRow("a", 1, 1, op="<").holds()
    assert EvidenceRow("a", 2, 1, slack=1, op="<=").holds()
    assert EvidenceRow("a", F(1, 3), F(1, 2), slack=F(1, 5), op="==").holds()
    assert EvidenceRow("a", 1, 2, slack=1, op=">=").holds()


def test_inconclusive_never_masks_failure():
    rep = VerificationReport("x", "anchor", {})
    rep.add("bad", 2, 1)
    assert rep.finalize(inconclusive=True).verdict == "fail"


def test_json_uses_rational_strings_and_sorted_rows():
    rep = VerificationReport("x", "anchor", {"q": F(2, 6)})
    rep.add("b", F(1, 3), F(1, 2))
    rep.add("a", 0.25, float("inf"), op="<")
    doc = json.loads(rep.finalize().dumps())
    assert doc["parameters"]["q"] == "1/3"
    assert [r["input"] for r in doc["evidence"]] == ["a", "b"]
    assert doc["evidence"][0]["rhs"] == "inf"
    assert doc["evidence"][1]["lhs"] == "1/3"


def test_exit_codes():
    def r(v):
        rep = VerificationReport("x", "", {})
        rep.verdict = v
        return rep

    assert exit_code([r("pass"), r("pass")]) == 0
    assert exit_code([r("pass"), r("inconclusive")]) == 2
    assert exit_code([r("inconclusive"), r("fail")]) == 1


# --- claim examples ------------------------------------------------------------


def test_lemma5_hand_example():
    H = h_m_dist([1], 2)
    T = t_n_dist([1, 1])
    assert H.as_dict() == {0: F(1, 4), 1: F(1, 2), 2: F(1, 4)}
    assert T.as_dict() == {0: F(1, 2), 2: F(1, 2)}
    assert ccdf(H, F(3, 2))[0] == F(1, 4) and 3 * ccdf(T, F(3, 2))[0] == F(3, 2)
    assert ccdf(H, F(1, 2))[0] == F(3, 4)


def test_lemma5_small_run_and_budget():
    rep = cmd_lemma5(n_max=2, m_max=3, trials=5, seed=3)
    assert rep.verdict == "pass" and rep.summary["violations"] == 0
    with pytest.raises(ValueError):
        cmd_lemma5(n_max=5, m_max=4)


def test_lemma6_examples():
    rep = cmd_lemma6(8)
    assert rep.verdict == "pass"
    assert F(2, 24) <= F(2 * 1, 16) and F(6, 24) <= F(2, 4)
    with pytest.raises(ValueError):
        cmd_lemma6(3)


def test_lemma7_zero_vector_and_witnesses():
    rep = cmd_lemma7(cases=[(0, 0)], m_max=4)
    assert rep.summary["witness_table"]["(0,0)"]["witness_m"] == 1
    rep = cmd_lemma7(cases=[(1, 1, 1)], m_max=1)
    assert rep.verdict == "inconclusive"
    _, l, r = limit_worst((1, 1, 1), 2)
    assert l <= r


def test_remark_values():
    rep = cmd_remark([2, 3])
    assert rep.verdict == "pass"
    assert rep.summary["ratio_n_factorial_over_n_pow_n"] == {2: F(1, 2), 3: F(2, 9)}


def test_criterion_reports():
    rep = cmd_criterion("power:1", grid=128)
    assert rep.verdict == "pass"
    assert rep.summary["empirical_A"] == pytest.approx(1.0)
    assert cmd_criterion("power:1/2", grid=128).verdict == "pass"


def test_theorem8_l1_ratio_is_one_for_single_entry():
    rep = cmd_theorem8(n_list=[1, 2, 3], battery=[(1,), (2, 0, 1)], norms=["L1"])
    assert rep.verdict == "pass"
    assert rep.summary["sup_r_T"]["L1"] == 1.0
    assert rep.summary["min_r_K"]["L1"] >= math.exp(-1)


def test_corollary12_trivial_size():
    assert orlicz_rho(2.0, 1) == pytest.approx(1.0)
    rep = cmd_corollary12(p_list=[1, 2], n_list=[8, 16, 32, 64])
    assert rep.verdict == "pass"


def test_corollary13_examples():
    gap, mask = subset_power_gaps([F(1), F(1)], 2)
    assert gap == 0 and bin(mask).count("1") == 1
    assert (F(1) + F(1)) ** 2 == 4 >= 2
    rep = cmd_corollary13(p_list=[2], n_max=6, trials=3, seed=2)
    assert rep.verdict == "pass" and rep.summary["subsets_checked"] == 3 * 63


def test_corollary10_is_diagnostic():
    rep = cmd_corollary10(n=3)
    assert rep.verdict == "inconclusive"
    assert rep.summary["ratios"]["zero"]["L1"] == 0.0
    assert rep.summary["ratios"]["all-ones"]["L1"] == pytest.approx(1.0)


def test_reports_are_deterministic():
    a = cmd_lemma5(n_max=2, m_max=2, trials=4, seed=11).to_json()
    b = cmd_lemma5(n_max=2, m_max=2, trials=4, seed=11).to_json()
    assert strip_runtime(a) == strip_runtime(b)
    assert a["parameters"]["seed"] == 11


# --- CLI -------------------------------------------------------------------------


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "budget.cfg"
    cfg.write_text("# defaults\nn = 6\ntrials=2\n")
    assert read_config(cfg) == {"n": "6", "trials": "2"}
    assert main(["lemma6", "--config", str(cfg)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["parameters"]["n_max"] == 6
    assert main(["lemma6", "--config", str(cfg), "--n", "9"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["parameters"]["n_max"] == 9


def test_claim_kwargs_mapping():
    assert claim_kwargs("theorem1", {"eps": "0.1,0.2", "n": "4"}) == {"eps_list": [0.1, 0.2], "n_max": 4}
    assert claim_kwargs("lemma7", {"a": "1,2"}) == {"cases": [(1, 2)]}
    assert claim_kwargs("criterion", {"gauge": "power:0.5"}) == {"gauge_spec": "power:0.5"}


def test_out_and_csv(tmp_path):
    out, ev = tmp_path / "r.json", tmp_path / "e.csv"
    code = main(["remark-counterexample", "--n", "2,3,4", "--out", str(out), "--csv", str(ev)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["verdict"] == "pass" and doc["claim_id"] == "remark-counterexample"
    rows = list(csv.DictReader(ev.open()))
    assert len(rows) == len(doc["evidence"])
    assert {"1/2", "1/6"} <= {r["lhs"] for r in rows}


def test_console_script_exit_code_for_inconclusive(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "kruglov.verify.cli", "corollary10", "--n", "2", "--out", str(tmp_path / "r.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert "corollary10: inconclusive" in proc.stderr


def test_unknown_claim_rejected():
    with pytest.raises(SystemExit):
        main(["lemma99"])
