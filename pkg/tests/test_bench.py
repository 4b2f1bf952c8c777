import pytest

from genlogic import bench, engine
from genlogic.errors import CapExceeded
from genlogic.formula import Atom, TimedFormula


def test_synthetic_dataset_is_seeded():
    a = bench.synthetic_dataset(50, 6, 3, seed=5)
    b = bench.synthetic_dataset(50, 6, 3, seed=5)
    assert a.dumps() == b.dumps()
    assert (a.K, a.T, len(a.vocabulary)) == (50, 3, 6)


def test_single_row_report():
    report = bench.run_scaling(ks=(1,), n_atoms=4, T=2, repetitions=1)
    assert len(report.rows) == 1 and report.ratios() == []
    assert "n/a (single row)" in report.table()


def test_report_ratios():
    rows = [bench.ScalingRow(10, 1.0, 1.0), bench.ScalingRow(20, 2.0, 2.2), bench.ScalingRow(40, 5.0, 5.5)]
    report = bench.ScalingReport(rows, 4, 2, "python")
    assert report.ratios() == pytest.approx([1.1, 1.25])
    assert not report.linear
    assert "FAIL" in report.table()


def test_model_checking_agrees_with_data_checking():
    rows = bench.run_model_checking(atom_counts=(2, 5), K=200, repetitions=1)
    assert [r.agree for r in rows] == [True, True]
    ds = bench.synthetic_dataset(30, 3, 2, seed=1)
    item = TimedFormula(Atom("a1"), 2)
    assert bench.model_checking_marginal(ds, item) == engine.marginal(ds, [item])


def test_model_checking_cap():
    ds = bench.synthetic_dataset(3, 13, 1)
    with pytest.raises(CapExceeded):
        bench.model_checking_marginal(ds, TimedFormula(Atom("a0"), 1))


def test_backend_comparison_script_runs():
    import subprocess
    import sys
    from pathlib import Path
    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_backends.py"
    proc = subprocess.run([sys.executable, str(script), "--k", "200", "--reps", "1"],
                          capture_output=True, text=True, check=True)
    assert "accumulate" in proc.stdout and "end-to-end" in proc.stdout
