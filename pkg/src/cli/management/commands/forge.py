"""The forge management command: every computation of monoforge behind one subcommand each."""
import csv
import io
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import orjson
from django.core.management.base import BaseCommand
from django.core.management.base import CommandError
from django.core.management.base import CommandParser
from fibergeom.appendix import appendix_demo
from fibergeom.cutting import fiber_cut
from fibergeom.schema import FiberCutRequestSchema
from fibergeom.schema import critical_points_rows
from fibergeom.schema import fiber_cut_to_dict
from hsets.lifting import lift_graphs
from hsets.parametrize import parametrize
from hsets.schema import LiftRequestSchema
from hsets.schema import ParametrizeRequestSchema
from hsets.schema import SignRequestSchema
from hsets.schema import chart_at_point_to_dict
from hsets.schema import lifted_to_dict
from hsets.schema import parametrize_result_to_dict
from hsets.signs import sign_on_quadrant
from monomialize.algorithm import monomialize
from monomialize.charts import chart_at_point
from monomialize.export import tree_summary
from monomialize.export import tree_to_dict
from monomialize.export import tree_to_dot
from monomialize.schema import ChartAtRequestSchema
from monomialize.schema import MonomializeRequestSchema
from monomialize.schema import TreeConfigSchema
from ninja import Schema
from pydantic import ValidationError
from series.normality import is_normal
from series.schema import SeriesSchema
from series.schema import normality_to_dict
from utils.errors import MonoForgeError
from utils.parser import dumps
from utils.parser import loads
from utils.schema import parse_rational

from cli.runner import version_header

logger = logging.getLogger("monoforge")

# exit codes
DOMAIN_ERROR = 1
INPUT_ERROR = 2

FORMATS = {
    "normalize": ("json",),
    "monomialize": ("json", "dot"),
    "tree-export": ("dot", "json"),
    "sign": ("json",),
    "parametrize": ("json", "csv"),
    "lift": ("json",),
    "chart-at": ("json",),
    "fibercut": ("json", "csv"),
    "appendix-demo": ("json",),
}


def _csv(rows: list[list[Any]]) -> str:
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(rows)
    return buffer.getvalue()


class Command(BaseCommand):
    """Run one monoforge computation on a JSON payload."""

    help = "Run one monoforge computation on a JSON payload and print the result."

    def add_arguments(self, parser: CommandParser) -> None:
        """One subparser per computation, all sharing the payload and override flags."""
        subparsers = parser.add_subparsers(dest="subcommand", required=True)
        for name, formats in FORMATS.items():
            sub = subparsers.add_parser(name)
            if name != "appendix-demo":
                sub.add_argument("--in", dest="infile", default="-", help="payload file, - for stdin")
            sub.add_argument("--out", dest="outfile", default=None, help="output file, stdout when absent")
            sub.add_argument("--format", dest="fmt", choices=formats, default=formats[0])
            sub.add_argument("--seed-lambdas", dest="seed_lambdas", default=None, help="comma separated λ seeds")
            sub.add_argument("--depth", type=int, default=None)
            sub.add_argument("--trunc", type=int, default=None)
            sub.add_argument("--grid", type=int, default=None)

    def handle(self, *args: Any, **options: Any) -> None:  # noqa: ANN401
        """Dispatch to the subcommand and write its output."""
        self.stderr.write(version_header())
        handlers: dict[str, Callable[[dict[str, Any]], str]] = {
            "normalize": self.normalize,
            "monomialize": self.monomialize,
            "tree-export": self.tree_export,
            "sign": self.sign,
            "parametrize": self.parametrize,
            "lift": self.lift,
            "chart-at": self.chart_at,
            "fibercut": self.fibercut,
            "appendix-demo": self.appendix_demo,
        }
        try:
            output = handlers[options["subcommand"]](options)
        except ValidationError as e:
            logger.warning(f"rejected payload: {e.error_count()} error(s)")
            raise CommandError(f"invalid payload: {e}", returncode=INPUT_ERROR) from e
        except MonoForgeError as e:
            raise CommandError(str(e), returncode=DOMAIN_ERROR) from e
        if options["outfile"]:
            Path(options["outfile"]).write_text(output, encoding="utf-8")
        else:
            self.stdout.write(output, ending="")

    def read_payload(self, options: dict[str, Any], schema: type[Schema]) -> Any:  # noqa: ANN401
        """Read the --in payload and validate it against a schema."""
        source = options["infile"]
        try:
            raw = sys.stdin.buffer.read() if source == "-" else Path(source).read_bytes()
        except OSError as e:
            raise CommandError(f"cannot read {source}: {e}", returncode=INPUT_ERROR) from e
        try:
            data = loads(raw)
        except orjson.JSONDecodeError as e:
            raise CommandError(f"malformed JSON in {source}: {e}", returncode=INPUT_ERROR) from e
        return schema.model_validate(data)

    def tree_overrides(self, options: dict[str, Any]) -> dict[str, Any]:
        """The config fields set by --depth, --trunc and --seed-lambdas."""
        overrides: dict[str, Any] = {}
        if options["depth"] is not None:
            overrides["max_depth"] = options["depth"]
        if options["trunc"] is not None:
            overrides["trunc"] = options["trunc"]
        if options["seed_lambdas"]:
            overrides["lambda_seed"] = [s.strip() for s in options["seed_lambdas"].split(",") if s.strip()]
        return overrides

    def merged_config(self, config: TreeConfigSchema, overrides: dict[str, Any]) -> TreeConfigSchema:
        """The payload config with the command line flags applied on top."""
        return type(config).model_validate({**config.model_dump(), **overrides})

    def normalize(self, options: dict[str, Any]) -> str:
        """Normality verdict and certificate of one series."""
        payload = self.read_payload(options, SeriesSchema)
        return dumps(normality_to_dict(is_normal(payload.to_series()), payload.vars)).decode()

    def _tree(self, options: dict[str, Any], schema: type[MonomializeRequestSchema]) -> Any:  # noqa: ANN401
        payload = self.read_payload(options, schema)
        payload.config = self.merged_config(payload.config, self.tree_overrides(options))
        return payload

    def monomialize(self, options: dict[str, Any]) -> str:
        """The tree and its checks as JSON, or the tree as DOT."""
        payload = self._tree(options, MonomializeRequestSchema)
        names = payload.targets[0].vars
        root = monomialize([t.to_series() for t in payload.targets], payload.config.to_config())
        if options["fmt"] == "dot":
            return tree_to_dot(root, names)
        return dumps(tree_summary(root, names)).decode()

    def tree_export(self, options: dict[str, Any]) -> str:
        """The expanded tree as DOT or JSON."""
        payload = self._tree(options, MonomializeRequestSchema)
        names = payload.targets[0].vars
        root = monomialize([t.to_series() for t in payload.targets], payload.config.to_config())
        if options["fmt"] == "json":
            return dumps(tree_to_dict(root, names)).decode()
        return tree_to_dot(root, names)

    def sign(self, options: dict[str, Any]) -> str:
        """The sign of a certified germ on a sub-quadrant."""
        payload = self.read_payload(options, SignRequestSchema)
        quadrant = payload.to_quadrant()
        result = sign_on_quadrant(payload.to_certificate(), quadrant)
        return dumps({"quadrant": quadrant.describe(), "sign": result.label}).decode()

    def parametrize(self, options: dict[str, Any]) -> str:
        """Charts and coverage of an H-basic set, or the per chart hit counts as CSV."""
        payload = self.read_payload(options, ParametrizeRequestSchema)
        overrides = self.tree_overrides(options)
        if options["grid"] is not None:
            overrides["grid"] = options["grid"]
        config = self.merged_config(payload.config, overrides)
        result = parametrize(payload.hset.to_set(), config.to_parametrize_config())  # type: ignore[attr-defined]
        if options["fmt"] == "csv":
            rows: list[list[Any]] = [["chart", "signs", "path", "hits"]]
            rows += [
                [index, chart.quadrant.describe(), chart.path.describe(), hits]
                for index, (chart, hits) in enumerate(zip(result.charts, result.coverage.hits, strict=True))
            ]
            return _csv(rows)
        return dumps(parametrize_result_to_dict(result)).decode()

    def lift(self, options: dict[str, Any]) -> str:
        """The lifted set with one graph variable per defining series."""
        payload = self.read_payload(options, LiftRequestSchema)
        grid = options["grid"] or payload.grid
        lifted = lift_graphs(payload.hset.to_set(), [parse_rational(s) for s in payload.bounds], grid)
        return dumps(lifted_to_dict(lifted)).decode()

    def chart_at(self, options: dict[str, Any]) -> str:
        """The branch whose chart contains a point."""
        payload = self._tree(options, ChartAtRequestSchema)
        names = payload.targets[0].vars
        result = chart_at_point(
            [t.to_series() for t in payload.targets],
            [parse_rational(v) for v in payload.point],
            payload.config.to_config(),
        )
        return dumps(chart_at_point_to_dict(result, names)).decode()

    def fibercut(self, options: dict[str, Any]) -> str:
        """The critical set report, or the sampled critical points as CSV."""
        payload = self.read_payload(options, FiberCutRequestSchema)
        report = fiber_cut(
            payload.to_manifold(),
            grid=options["grid"] or payload.grid,
            halvings=payload.halvings,
            sweep_grid=payload.sweep_grid,
        )
        if options["fmt"] == "csv":
            return _csv(critical_points_rows(report, payload.names))
        return dumps(fiber_cut_to_dict(report, payload.names)).decode()

    def appendix_demo(self, options: dict[str, Any]) -> str:
        """The exact empty germ computation for M = {y > x}."""
        return dumps(appendix_demo().as_dict()).decode()
