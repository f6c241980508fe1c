"""Tests for the mono-forge command line."""
import tempfile
from pathlib import Path
from typing import Any

from series.core import Series
from series.schema import series_to_dict
from utils.parser import dumps
from utils.parser import loads
from utils.tests import MonoForgeTestCase

from .runner import run

X = Series.variable(2, 1)
Y = Series.variable(2, 2)
NAMES = ["x", "y"]


class TestForge(MonoForgeTestCase):
    """Tests for the forge subcommands and their exit codes."""

    def setUp(self) -> None:
        """Every test gets a scratch directory."""
        self.scratch = tempfile.TemporaryDirectory()
        self.addCleanup(self.scratch.cleanup)
        self.root = Path(self.scratch.name)

    def payload(self, data: Any, name: str = "payload.json") -> str:  # noqa: ANN401
        """Write a JSON payload and return its path."""
        path = self.root / name
        path.write_bytes(dumps(data))
        return str(path)

    def forge(self, *argv: str, status: int = 0) -> str:
        """Run a subcommand writing to a file, check the exit code and return the output."""
        out = self.root / "out.txt"
        assert run([*argv, "--out", str(out)]) == status
        return out.read_text(encoding="utf-8") if out.exists() else ""

    def test_normalize(self) -> None:
        """Test the certificate of a monomial."""
        source = self.payload(series_to_dict(X * Y, NAMES))
        result = loads(self.forge("normalize", "--in", source))
        assert result["verdict"] == "normal"
        assert result["certificate"]["alpha"] == [1, 1]

    def test_exit_codes(self) -> None:
        """Test domain errors, malformed JSON, invalid payloads, missing files and unknown formats."""
        zero = self.payload({"vars": ["x"], "trunc": "exact", "terms": []})
        assert self.forge("normalize", "--in", zero, status=1) == ""
        broken = self.root / "broken.json"
        broken.write_text("{", encoding="utf-8")
        self.forge("normalize", "--in", str(broken), status=2)
        invalid = self.payload({"vars": ["x"], "trunc": "exact", "terms": [{"exp": [-1], "coef": "1"}]})
        self.forge("normalize", "--in", invalid, status=2)
        self.forge("normalize", "--in", str(self.root / "missing.json"), status=2)
        self.forge("normalize", "--in", zero, "--format", "dot", status=2)

    def test_monomialize(self) -> None:
        """Test the JSON summary and the DOT rendering of a tree."""
        source = self.payload({"targets": [series_to_dict(Y - X, NAMES)]})
        summary = loads(self.forge("monomialize", "--in", source))
        assert summary["leaves"] == 1
        dot = self.forge("monomialize", "--in", source, "--format", "dot")
        assert dot.startswith("digraph monomialization {")
        tree = loads(self.forge("tree-export", "--in", source, "--format", "json"))
        assert tree["vars"] == NAMES

    def test_seed_lambdas(self) -> None:
        """Test that a malformed λ seed on the command line is an input error."""
        source = self.payload({"targets": [series_to_dict(Y**2 - X**2, NAMES)]})
        self.forge("monomialize", "--in", source, "--seed-lambdas", "0,x", status=2)
        self.forge("monomialize", "--in", source, "--seed-lambdas", "0,1,-1,inf")

    def test_sign(self) -> None:
        """Test the sign of x²y on the (+, −) quadrant."""
        unit = series_to_dict(Series.constant(2, 3), NAMES)
        certificate = {"alpha": [2, 1], "unit_constant": "3", "unit": unit}
        source = self.payload({"certificate": certificate, "quadrant": ["+", "-"]})
        assert loads(self.forge("sign", "--in", source)) == {"quadrant": "(+, −)", "sign": "−"}

    def test_parametrize_csv(self) -> None:
        """Test the per chart hit counts of {x > 0}."""
        x1 = Series.variable(1, 1)
        source = self.payload({"set": {"polyradius": ["1"], "ineqs": [series_to_dict(x1, ["x"])]}})
        rows = self.forge("parametrize", "--in", source, "--format", "csv", "--grid", "16").splitlines()
        assert rows[0] == "chart,signs,path,hits"
        assert len(rows) == 2

    def test_fibercut_csv(self) -> None:
        """Test that every sampled critical point of the region above the diagonal is written."""
        source = self.payload(
            {
                "polyradius": ["1", "1"],
                "split_n": 1,
                "ineqs": [series_to_dict(Y - X, NAMES)],
                "halvings": 1,
                "sweep_grid": 32,
            },
        )
        rows = self.forge("fibercut", "--in", source, "--format", "csv", "--grid", "8").splitlines()
        assert rows[0] == "x,y"
        assert len(rows) > 1
        report = loads(self.forge("fibercut", "--in", source, "--grid", "8"))
        assert report["pretty"] == ["3y² − 2xy − 1"]
        assert report["critical_points"] == len(rows) - 1

    def test_appendix_demo(self) -> None:
        """Test the appendix verdict."""
        result = loads(self.forge("appendix-demo"))
        assert result["verdict"] == "A ∩ Δ_{(√2/4, √2/3)} = ∅: true"
        assert all(result["checks"].values())
