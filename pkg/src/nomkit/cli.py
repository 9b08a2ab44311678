"""Command-line interface.

Subcommands chain into the full pipeline: normalize (Kaggle Titanic
CSV to ARFF), convert (generic CSV to ARFF), filter remove (drop
attributes), tree (train/evaluate a decision tree), cluster (k-means)
and plot (SVG jitter scatter). Reports go to stdout unless --out is
given; timing lines go to stderr so identical runs produce identical
files. Exit codes: 0 success, 2 usage error, 3 data or format error.

Input paths are tried as given first; if not found and NOMKIT_DATA is
set, they are retried inside that directory.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__
from .cluster import ClusterParams, format_cluster_report, kmeans
from .errors import DataError, NomkitError, UsageError
from .evaluation import (
    cross_validate,
    evaluate_model,
    format_report,
    machine_summary,
)
from .plot import PlotSpec, jitter_scatter
from .tabular.arff import parse_arff, write_arff
from .tabular.csvio import parse_csv, rows_to_csv
from .tabular.model import AttributeSpec, Dataset, remove_attributes
from .titanic import DEFAULT_RELATION, normalize_titanic
from .tree import TreeParams, build_tree, print_tree


def main() -> None:
    sys.exit(run(sys.argv[1:]))


def run(argv: list[str]) -> int:
    """Parse arguments, dispatch, and map failures to exit codes."""
    try:
        args = _build_parser().parse_args(argv)
        args.func(args)
        return 0
    except SystemExit as e:  # argparse --help or usage failure
        code = e.code if e.code is not None else 0
        return code if isinstance(code, int) else 2
    except BrokenPipeError:
        return 0
    except NomkitError as e:
        print(f"nomkit: error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        # unreadable/unwritable files are input problems, not flag problems
        print(f"nomkit: error: {e}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nomkit",
        description="Mining small nominal datasets: decision trees, "
                    "k-means clustering, reports, ARFF/CSV, SVG plots.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize",
                       help="Kaggle Titanic train CSV -> normalized ARFF")
    p.add_argument("--input", required=True, help="Kaggle train.csv path")
    p.add_argument("--output", required=True, help="ARFF file to write")
    p.add_argument("--relation", default=None,
                   help=f"relation name (default: {DEFAULT_RELATION})")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("convert",
                       help="generic CSV -> ARFF, all attributes nominal")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--relation", default=None,
                   help="relation name (default: input file stem)")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("filter", help="dataset filters")
    fsub = p.add_subparsers(dest="filter_op", required=True)
    fr = fsub.add_parser("remove", help="drop attributes by 1-based ranges")
    fr.add_argument("--indices", required=True,
                    help="1-based ranges, e.g. 1,3,6-8")
    fr.add_argument("--input", required=True)
    fr.add_argument("--output", required=True)
    fr.set_defaults(func=_cmd_filter_remove)

    p = sub.add_parser("tree", help="train and evaluate a decision tree")
    p.add_argument("--train", required=True, help="training ARFF")
    p.add_argument("--target", default=None,
                   help="class attribute name (default: first attribute)")
    p.add_argument("--cf", type=float, default=0.25,
                   help="pruning confidence factor (default 0.25)")
    p.add_argument("--min-leaf", type=float, default=2.0,
                   help="minimum branch weight for a split (default 2)")
    p.add_argument("--no-prune", action="store_true",
                   help="keep the unpruned tree")
    p.add_argument("--subtree-raising", action="store_true",
                   help="also consider replacing nodes by their largest "
                        "branch while pruning")
    p.add_argument("--cv", type=int, default=10,
                   help="cross-validation folds; 0 evaluates on the "
                        "training set (default 10)")
    p.add_argument("--seed", type=int, default=1,
                   help="fold shuffling seed (default 1)")
    p.add_argument("--threads", type=int, default=1,
                   help="folds trained in parallel (default 1)")
    p.add_argument("--kv", action="store_true",
                   help="emit machine-readable key=value lines instead of "
                        "the text report")
    p.add_argument("--out", default=None, help="write report here instead "
                                               "of stdout")
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("cluster", help="k-means clustering report")
    p.add_argument("--input", required=True, help="ARFF dataset")
    p.add_argument("--k", type=int, default=2, help="clusters (default 2)")
    p.add_argument("--seed", type=int, default=10,
                   help="initialization seed (default 10)")
    p.add_argument("--max-iter", type=int, default=500,
                   help="assignment-pass limit (default 500)")
    p.add_argument("--assignments", default=None,
                   help="also write instance,cluster CSV here")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("plot", help="SVG jitter scatter of two attributes")
    p.add_argument("--input", required=True, help="ARFF dataset")
    p.add_argument("--x", required=True,
                   help="x attribute (name or 1-based index)")
    p.add_argument("--y", required=True,
                   help="y attribute (name or 1-based index)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--color", default=None,
                       help="color by this attribute (name or 1-based "
                            "index)")
    group.add_argument("--assignments", default=None,
                       help="color by a cluster-assignment CSV")
    p.add_argument("--jitter-seed", type=int, default=7)
    p.add_argument("--radius", type=float, default=3.0,
                   help="marker radius in px (default 3)")
    p.add_argument("--opacity", type=float, default=0.6,
                   help="marker opacity (default 0.6)")
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=480)
    p.add_argument("--out", required=True, help="SVG file to write")
    p.set_defaults(func=_cmd_plot)

    return parser


# -- shared plumbing -------------------------------------------------------


def _resolve_input(path: str) -> str:
    if os.path.exists(path):
        return path
    data_dir = os.environ.get("NOMKIT_DATA")
    if data_dir and not os.path.isabs(path):
        candidate = os.path.join(data_dir, path)
        if os.path.exists(candidate):
            return candidate
    return path  # let open() report the original name


def _read_text(path: str) -> str:
    path = _resolve_input(path)
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        _write_text(out, text)


def _with_context(path: str, exc: NomkitError) -> NomkitError:
    return type(exc)(f"{path}: {exc}")


def _load_arff(path: str) -> Dataset:
    try:
        return parse_arff(_read_text(path))
    except NomkitError as e:
        raise _with_context(path, e) from e


def _load_csv_rows(path: str):
    try:
        return parse_csv(_read_text(path))
    except NomkitError as e:
        raise _with_context(path, e) from e


# -- subcommands -----------------------------------------------------------


def _cmd_normalize(args) -> None:
    raw = _load_csv_rows(args.input)
    try:
        if args.relation is None:
            d = normalize_titanic(raw)
        else:
            d = normalize_titanic(raw, relation=args.relation)
    except NomkitError as e:
        raise _with_context(args.input, e) from e
    _write_text(args.output, write_arff(d))


def _cmd_convert(args) -> None:
    raw = _load_csv_rows(args.input)
    relation = args.relation
    if relation is None:
        relation = os.path.splitext(os.path.basename(args.input))[0]
    try:
        d = _all_nominal_dataset(raw, relation)
    except NomkitError as e:
        raise _with_context(args.input, e) from e
    _write_text(args.output, write_arff(d))


def _all_nominal_dataset(raw, relation: str) -> Dataset:
    """Infer an all-nominal schema from a raw CSV table: every column's
    values in first-appearance order; empty cells and bare ? are
    missing."""
    specs = []
    columns = []
    for j, name in enumerate(raw.header):
        seen: dict[str, int] = {}
        cells = []
        for row in raw.rows:
            v = row[j]
            if v in ("", "?"):
                cells.append(None)
                continue
            if v not in seen:
                seen[v] = len(seen)
            cells.append(seen[v])
        if not seen:
            raise DataError(f"column {name!r} has no usable values")
        specs.append(AttributeSpec(name, tuple(seen)))
        columns.append(cells)
    instances = tuple(
        tuple(columns[j][i] for j in range(len(specs)))
        for i in range(len(raw.rows))
    )
    return Dataset(relation=relation, attributes=tuple(specs),
                   instances=instances, target_index=None)


def _cmd_filter_remove(args) -> None:
    d = _load_arff(args.input)
    filtered = remove_attributes(d, args.indices)
    _write_text(args.output, write_arff(filtered))


def _target_dataset(d: Dataset, target: str | None) -> Dataset:
    if target is not None:
        return d.with_target(target)
    return d.with_target(d.attributes[0].name)


def _cmd_tree(args) -> None:
    d = _target_dataset(_load_arff(args.train), args.target)
    params = TreeParams(
        confidence_factor=args.cf,
        min_instances=args.min_leaf,
        pruning_enabled=not args.no_prune,
        subtree_raising=args.subtree_raising,
    )
    if args.cv < 0:
        raise UsageError(f"--cv must be 0 or a fold count, got {args.cv}")

    start = time.perf_counter()
    tree = build_tree(d, params)
    build_secs = time.perf_counter() - start

    if args.cv == 0:
        test_mode = "evaluate on training data"
        ev = evaluate_model(tree, d)
    else:
        test_mode = f"{args.cv}-fold cross-validation, seed {args.seed}"
        ev = cross_validate(d, params, k=args.cv, seed=args.seed,
                            threads=args.threads)
    if args.kv:
        text = machine_summary(ev)
    else:
        text = format_report(ev, d, params, print_tree(tree, d), test_mode)
    _emit(text, args.out)
    print(f"Time taken to build model: {build_secs:.2f} seconds",
          file=sys.stderr)


def _cmd_cluster(args) -> None:
    d = _load_arff(args.input)
    params = ClusterParams(k=args.k, seed=args.seed,
                           max_iterations=args.max_iter)
    start = time.perf_counter()
    model = kmeans(d, params)
    build_secs = time.perf_counter() - start
    _emit(format_cluster_report(model, d, params), args.out)
    if args.assignments is not None:
        rows = [[str(i), str(c)] for i, c in enumerate(model.assignment)]
        _write_text(args.assignments,
                    rows_to_csv(["instance", "cluster"], rows))
    print(f"Time taken to build model (full training data): "
          f"{build_secs:.2f} seconds", file=sys.stderr)


def _resolve_attr(d: Dataset, token: str, role: str) -> int:
    for i, a in enumerate(d.attributes):
        if a.name == token:
            return i
    if token.lstrip("-").isdigit():
        idx = int(token)
        if 1 <= idx <= d.num_attributes:
            return idx - 1
        raise UsageError(
            f"{role} index {idx} out of range 1..{d.num_attributes}"
        )
    raise UsageError(f"no attribute named {token!r} for {role}")


def _read_assignment_csv(path: str, n: int) -> tuple[int, ...]:
    table = _load_csv_rows(path)
    rows = list(table.rows)
    header = [h.strip().lower() for h in table.header]
    if header != ["instance", "cluster"]:
        # headerless file: the header row is data too
        rows.insert(0, tuple(table.header))
    out: list[int | None] = [None] * n
    for raw_row in rows:
        if len(raw_row) != 2:
            raise DataError(
                f"{path}: expected instance,cluster rows, got {raw_row!r}"
            )
        try:
            i, c = int(raw_row[0]), int(raw_row[1])
        except ValueError as e:
            raise DataError(f"{path}: non-integer assignment row "
                            f"{raw_row!r}") from e
        if not 0 <= i < n:
            raise DataError(f"{path}: instance index {i} out of range "
                            f"0..{n - 1}")
        if c < 0:
            raise DataError(f"{path}: negative cluster id {c}")
        if out[i] is not None:
            raise DataError(f"{path}: duplicate assignment for instance {i}")
        out[i] = c
    missing = sum(1 for v in out if v is None)
    if missing:
        raise DataError(f"{path}: {missing} instances have no assignment")
    return tuple(out)


def _cmd_plot(args) -> None:
    d = _load_arff(args.input)
    x = _resolve_attr(d, args.x, "--x")
    y = _resolve_attr(d, args.y, "--y")
    if args.color is not None:
        spec = PlotSpec(
            x_attr=x, y_attr=y,
            color_attr=_resolve_attr(d, args.color, "--color"),
            jitter_seed=args.jitter_seed, width=args.width,
            height=args.height, radius=args.radius, opacity=args.opacity,
        )
    else:
        assignment = _read_assignment_csv(args.assignments, d.num_instances)
        spec = PlotSpec(
            x_attr=x, y_attr=y, assignment=assignment,
            jitter_seed=args.jitter_seed, width=args.width,
            height=args.height, radius=args.radius, opacity=args.opacity,
        )
    _write_text(args.out, jitter_scatter(d, spec))


if __name__ == "__main__":
    main()
