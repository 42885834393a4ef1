import importlib.util
from pathlib import Path


def test_benchmark_backends_agree(capsys):
    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_counting.py"
    spec = importlib.util.spec_from_file_location("bench_counting", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    assert mod.main(["--case", "E7a4", "--primes", "2,3", "--repeat", "1"]) == 0
    assert "identical" in capsys.readouterr().out
