import argparse
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.config.constants import (
    ARGMIN_FILE,
    CONFIG_ECHO_FILE,
    COSTS_FILE,
    GRAPH_FILE,
    METRICS_FILE,
    MIN_MAX_ROUNDS,
    NMI_FILE,
    SPARSITY_FILE,
    SPEC_ECHO_FILE,
    TRACE_FILE,
    TREE_FILE,
    TRUTH_FILE,
)
from src.config.settings import LocalEntropyVariant, NmiAverage, Settings, StretchOrder, TreeMode, get_settings
from src.costs.entropy import cost_report
from src.graph.core import Graph, load_edge_list, write_edge_list
from src.hcse.stratify import Stratifier, hcse_auto, k_hcse
from src.hsbm.generator import HsbmSpec, SizeDistribution, dumps_spec, generate, load_spec
from src.metrics.evaluation import evaluate
from src.oracle.enumeration import COST_FUNCTIONS, brute_min, resolve_cost
from src.tree.serialization import read_tree, write_tree
from src.utils.errors import DomainError, HcseError
from src.utils.logger import setup_logger


class Command(str, Enum):
    CLUSTER = "cluster"
    GEN_HSBM = "gen-hsbm"
    EVAL = "eval"
    BRUTE_MIN = "brute-min"


class RunConfig(BaseModel):
    """Fully materialised run parameters; echoed next to every output"""

    model_config = ConfigDict(extra="forbid")

    command: Command
    output_dir: str

    # Inputs
    input: Optional[str] = None
    tree: Optional[str] = None
    truth: Optional[str] = None
    spec: Optional[str] = None

    # Clustering
    k: Optional[int] = Field(default=None, ge=1)
    max_rounds: int = Field(ge=MIN_MAX_ROUNDS)
    local_entropy_variant: LocalEntropyVariant
    stretch_order: StretchOrder
    allow_height_two: bool
    validation_mode: bool

    # Evaluation
    nmi_average: NmiAverage

    # HSBM
    n: Optional[int] = Field(default=None, ge=1)
    counts: Optional[List[int]] = None
    p: Optional[List[float]] = None
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    size_distribution: Optional[SizeDistribution] = None
    min_cluster_size: Optional[int] = Field(default=None, ge=1)

    # Oracle
    mode: TreeMode = TreeMode.BINARY
    cost: str = "se"

    @model_validator(mode="after")
    def check_command_inputs(self):
        if self.command in (Command.CLUSTER, Command.EVAL, Command.BRUTE_MIN) and not self.input:
            raise ValueError(f"'{self.command.value}' needs an input edge list")
        if self.command == Command.EVAL and not self.tree:
            raise ValueError("'eval' needs --tree")
        if self.command == Command.BRUTE_MIN and self.cost not in COST_FUNCTIONS:
            raise ValueError(f"unknown cost {self.cost!r}; choose from {sorted(COST_FUNCTIONS)}")
        if self.command == Command.GEN_HSBM and not self.spec:
            missing = [name for name in ("n", "counts", "p") if getattr(self, name) is None]
            if missing:
                raise ValueError(f"'gen-hsbm' needs --spec or all of --n, --counts, --p (missing {missing})")
        return self

    @classmethod
    def from_args(cls, args: argparse.Namespace, settings: Settings) -> "RunConfig":
        """Command-line flags win over settings; unset flags fall back to them"""
        values = {
            "output_dir": settings.output_dir,
            "max_rounds": settings.max_rounds,
            "local_entropy_variant": settings.local_entropy_variant,
            "stretch_order": settings.stretch_order,
            "allow_height_two": settings.allow_height_two,
            "validation_mode": settings.validation_mode,
            "nmi_average": settings.nmi_average,
        }
        values.update(
            (key, value) for key, value in vars(args).items()
            if value is not None and key in cls.model_fields
        )
        return cls(**values)

    def hsbm_spec(self) -> HsbmSpec:
        if self.spec:
            spec = load_spec(self.spec)
            return spec if self.seed is None else spec.model_copy(update={"seed": self.seed})
        fields: Dict[str, Any] = {
            "n": self.n,
            "level_cluster_counts": self.counts,
            "p": self.p,
            "seed": self.seed or 0,
        }
        if self.size_distribution is not None:
            fields["size_distribution"] = self.size_distribution
        if self.min_cluster_size is not None:
            fields["min_cluster_size"] = self.min_cluster_size
        return HsbmSpec(**fields)


def write_record(record: Mapping[str, Any], path: Path):
    lines = [f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}" for key, value in record.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _prepare_output(config: RunConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / CONFIG_ECHO_FILE).write_text(config.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return out


def _load_graph(path: str) -> Graph:
    graph = load_edge_list(path)
    if graph.n == 0:
        raise DomainError(f"{path} contains no vertices")
    logger.info(f"Loaded {path}: {graph}")
    return graph


def cmd_cluster(config: RunConfig) -> int:
    graph = _load_graph(config.input)
    if graph.total_volume <= 0:
        raise DomainError(f"{config.input} has no edges; structural entropy is undefined")

    stratifier = Stratifier(graph, config.local_entropy_variant, config.validation_mode, config.stretch_order)
    if config.k is not None:
        result = k_hcse(graph, config.k, stratifier)
    else:
        result = hcse_auto(graph, config.max_rounds, config.allow_height_two, stratifier)

    out = _prepare_output(config)
    write_tree(result.tree, out / TREE_FILE)
    report = cost_report(graph, result.tree)
    record = report.to_record()
    record["selection"] = result.reason
    record["inflection_found"] = result.inflection_found
    write_record(record, out / COSTS_FILE)
    result.trace.to_frame().to_csv(out / TRACE_FILE, index=False)
    result.trace.sparsity_frame().to_csv(out / SPARSITY_FILE, index=False)

    print(f"height={report.height}")
    print(f"structural_entropy={report.structural_entropy:.6f}")
    print(f"cost_se={report.cost_se:.6f}")
    print(f"cost_dasgupta={report.cost_dasgupta:.6f}")
    logger.info(f"Wrote tree, costs and trace to {out}")
    return 0


def cmd_gen_hsbm(config: RunConfig) -> int:
    spec = config.hsbm_spec()
    graph, truth = generate(spec)

    out = _prepare_output(config)
    write_edge_list(graph, out / GRAPH_FILE)
    write_tree(truth.tree, out / TRUTH_FILE)
    (out / SPEC_ECHO_FILE).write_text(dumps_spec(spec), encoding="utf-8")

    print(f"vertices={graph.n}")
    print(f"edges={graph.num_edges}")
    logger.info(f"Wrote graph, ground truth and spec to {out}")
    return 0


def cmd_eval(config: RunConfig) -> int:
    graph = _load_graph(config.input)
    tree = read_tree(config.tree, graph)
    truth = read_tree(config.truth, graph) if config.truth else None
    report = evaluate(tree, graph, truth, config.nmi_average)

    out = _prepare_output(config)
    record = report.to_record()
    write_record(record, out / METRICS_FILE)
    if truth is not None:
        report.nmi_frame().to_csv(out / NMI_FILE, index=False)

    print("=" * 48)
    print("EVALUATION")
    print("=" * 48)
    for key, value in record.items():
        print(f"{key:<22} {value:.6f}" if isinstance(value, float) else f"{key:<22} {value}")
    print("=" * 48)
    return 0


def cmd_brute_min(config: RunConfig) -> int:
    graph = _load_graph(config.input)
    result = brute_min(graph, resolve_cost(config.cost), config.mode)

    out = _prepare_output(config)
    (out / ARGMIN_FILE).write_text("".join(t.to_newick() + "\n" for t in result.argmin), encoding="utf-8")

    print(f"min_value={result.min_value!r}")
    print(f"argmin_trees={len(result.argmin)}")
    print(f"evaluated={result.evaluated}")
    return 0


COMMANDS: Dict[Command, Callable[[RunConfig], int]] = {
    Command.CLUSTER: cmd_cluster,
    Command.GEN_HSBM: cmd_gen_hsbm,
    Command.EVAL: cmd_eval,
    Command.BRUTE_MIN: cmd_brute_min,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output-dir", dest="output_dir", help="Directory for output files")
    common.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Console log level"
    )

    parser = argparse.ArgumentParser(prog="hcse", description="Hierarchical clustering by structural entropy")
    commands = parser.add_subparsers(dest="command", required=True)

    cluster = commands.add_parser(Command.CLUSTER.value, parents=[common], help="Build a cluster tree")
    cluster.add_argument("input", help="Edge list file")
    cluster.add_argument("--k", type=int, help="Fixed tree height; omit to choose it automatically")
    cluster.add_argument("--max-rounds", dest="max_rounds", type=int, help="Round limit for automatic height")
    cluster.add_argument(
        "--variant",
        dest="local_entropy_variant",
        choices=[v.value for v in LocalEntropyVariant],
        help="Cut used in each child's local entropy term"
    )
    cluster.add_argument(
        "--stretch-order",
        dest="stretch_order",
        choices=[o.value for o in StretchOrder],
        help="How stretch ranks sibling pairs"
    )
    cluster.add_argument(
        "--allow-height-two",
        dest="allow_height_two",
        action="store_true",
        default=None,
        help="Let automatic selection stop at height two"
    )
    cluster.add_argument(
        "--validate",
        dest="validation_mode",
        action="store_true",
        default=None,
        help="Recompute the full entropy after every round and compare"
    )

    hsbm = commands.add_parser(Command.GEN_HSBM.value, parents=[common], help="Generate an HSBM instance")
    hsbm.add_argument("--spec", help="JSON spec file")
    hsbm.add_argument("--n", type=int, help="Number of vertices")
    hsbm.add_argument("--counts", type=int, nargs="+", help="Cluster counts per level, shallow to deep")
    hsbm.add_argument("--p", type=float, nargs="+", help="Edge probability per LCA depth")
    hsbm.add_argument("--seed", type=int, help="RNG seed")
    hsbm.add_argument(
        "--size-distribution",
        dest="size_distribution",
        choices=[s.value for s in SizeDistribution]
    )
    hsbm.add_argument("--min-cluster-size", dest="min_cluster_size", type=int)

    evaluation = commands.add_parser(Command.EVAL.value, parents=[common], help="Score a cluster tree")
    evaluation.add_argument("input", help="Edge list file")
    evaluation.add_argument("--tree", required=True, help="Tree document to score")
    evaluation.add_argument("--truth", help="Ground-truth tree document")
    evaluation.add_argument(
        "--nmi-average",
        dest="nmi_average",
        choices=[a.value for a in NmiAverage],
        help="Entropy normalisation for NMI"
    )

    brute = commands.add_parser(Command.BRUTE_MIN.value, parents=[common], help="Exact optimum by enumeration")
    brute.add_argument("input", help="Edge list file")
    brute.add_argument("--cost", choices=sorted(COST_FUNCTIONS), default="se")
    brute.add_argument("--mode", choices=[m.value for m in TreeMode], default=TreeMode.BINARY.value)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        settings = get_settings()
        if args.log_level:
            settings = settings.model_copy(update={"log_level": args.log_level})
        config = RunConfig.from_args(args, settings)
    except ValidationError as e:
        print(f"error: invalid configuration: {e}", file=sys.stderr)
        return 2

    setup_logger(settings)
    try:
        return COMMANDS[config.command](config)
    except (HcseError, ValidationError, OSError) as e:
        logger.error(f"{config.command.value} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
