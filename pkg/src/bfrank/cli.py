"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 internal error (including a failed
selftest).
"""

import argparse
import json
import os
import sys
import tempfile
import warnings

from . import __version__
from .errors import BFRankError, CountDataWarning
from .ingest import (
    bind,
    format_count_matrix,
    format_sample_sheet,
    merge_count_matrices,
    read_count_matrix,
    read_sample_sheet,
)
from .model import PriorHyperparams
from .pipeline import analyze_groups
from .replicates import DEFAULT_THRESHOLD, replicate_consistency
from .report import (
    DEFAULT_SWEEP_TOTAL,
    format_curve,
    format_real,
    format_results,
    parse_results,
    sweep_delta_n,
    sweep_delta_q,
)
from .simulate import SimulationConfig, evaluate_ranking, format_truth, parse_truth, simulate

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2

# Global flags are accepted before or after the verb. Their defaults are filled
# in after parsing: argparse shares parent actions between parsers, so a real
# default on a subparser would overwrite a value given before the verb.
GLOBAL_DEFAULTS = {"u1": 1.0, "u2": 1.0, "consistency_threshold": DEFAULT_THRESHOLD, "delimiter": None, "seed": 0}


def write_atomic(path, text):
    """Write via a temporary file and rename; '-' writes to stdout."""
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".bfrank-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _delimiter(args):
    return {"tab": "\t", "comma": ",", None: None}.get(args.delimiter, args.delimiter)


def _prior(args):
    return PriorHyperparams(args.u1, args.u2)


def _load(args):
    delim = _delimiter(args)
    matrices = [read_count_matrix(p, delim) for p in args.counts]
    matrix = merge_count_matrices(matrices) if len(matrices) > 1 else matrices[0]
    sheet = read_sample_sheet(args.samples, delim)
    return bind(matrix, sheet, strict=not args.lenient)


def _info(args, msg):
    stream = sys.stderr if getattr(args, "output", None) == "-" else sys.stdout
    print(msg, file=stream)


def cmd_analyze(args):
    g1, g2 = _load(args)
    analysis = analyze_groups(g1, g2, _prior(args), args.consistency_threshold, workers=args.workers)
    write_atomic(args.output, format_results(analysis.table))
    top = analysis.table.top()
    top_msg = f"top gene {top.gene_id} (log10 BF {format_real(top.log10_bf)})" if top else "no genes"
    _info(args, f"analyzed {len(analysis.table)} genes; {len(analysis.flagged)} flagged; {top_msg}")
    return EXIT_OK


def cmd_check_replicates(args):
    groups = _load(args)
    lines = ["gene_id\tcondition_id\tsample_a\tsample_b\tlog10_bf\tflagged"]
    flagged = set()
    for g in groups:
        for rep in replicate_consistency(g, _prior(args), args.consistency_threshold):
            if rep.flagged:
                flagged.add(rep.gene_id)
            for (a, b), v in rep.pairwise_log10_bfs:
                lines.append("\t".join((rep.gene_id, rep.condition_id, a, b, format_real(v),
                                        "true" if rep.flagged else "false")))
    write_atomic(args.output, "\n".join(lines) + "\n")
    _info(args, f"checked {len(groups[0].gene_ids)} genes; {len(flagged)} flagged")
    return EXIT_OK


def cmd_simulate(args):
    cfg = SimulationConfig(
        num_genes=args.num_genes,
        fraction_changed=args.fraction_changed,
        effect_log2_range=(args.effect_min, args.effect_max),
        depth_per_replicate=args.depth,
        replicates_per_condition=args.replicates,
        rng_seed=args.seed,
    )
    truth, matrix, sheet = simulate(cfg)
    delim = _delimiter(args) or "\t"
    os.makedirs(args.out_dir, exist_ok=True)
    write_atomic(os.path.join(args.out_dir, "counts.tsv"), format_count_matrix(matrix, delim))
    write_atomic(os.path.join(args.out_dir, "samples.tsv"), format_sample_sheet(sheet, delim))
    write_atomic(os.path.join(args.out_dir, "truth.tsv"), format_truth(truth, delim))
    changed = sum(t.changed for t in truth)
    print(f"simulated {cfg.num_genes} genes ({changed} changed), "
          f"{2 * cfg.replicates_per_condition} samples at depth {cfg.depth_per_replicate}")
    return EXIT_OK


def cmd_evaluate(args):
    with open(args.results, "rb") as fh:
        results = parse_results(fh.read())
    with open(args.truth, "rb") as fh:
        truth = parse_truth(fh.read())
    summary = evaluate_ranking(results, truth)
    print(json.dumps({
        "n_genes": summary.n_genes,
        "n_changed": summary.n_changed,
        "auroc": summary.auroc,
        "auroc_note": summary.auroc_note,
        "precision_at_k": {str(k): v for k, v in summary.precision_at_k.items()},
    }, sort_keys=True))
    return EXIT_OK


def _parse_pair(text):
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'p1,p2', got {text!r}") from None
    return a, b


def cmd_sweep(args):
    prior = _prior(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CountDataWarning)
        if args.mode == "delta-n":
            dns = range(args.dn_min, args.dn_max + 1, args.dn_step)
            points = [p for n1 in args.n1 for p in sweep_delta_n(n1, args.total, dns, prior)]
        else:
            points = sweep_delta_q(args.depths, args.pairs, prior)
    notes = [str(w.message) for w in caught if issubclass(w.category, CountDataWarning)]
    write_atomic(args.output, format_curve(points, notes))
    _info(args, f"wrote {len(points)} curve points ({len(notes)} skipped)")
    return EXIT_OK


def cmd_selftest(args):
    from .selftest import run_selftest

    summary = run_selftest(full=args.full, seed=args.seed)
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK if summary["passed"] else EXIT_INTERNAL


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    sup = argparse.SUPPRESS
    common.add_argument("--u1", type=float, default=sup, help="prior shape u1 (default 1)")
    common.add_argument("--u2", type=float, default=sup, help="prior shape u2 (default 1)")
    common.add_argument("--consistency-threshold", type=float, default=sup,
                        help=f"log10 BF above which replicates are flagged (default {DEFAULT_THRESHOLD})")
    common.add_argument("--delimiter", default=sup, help="'tab', 'comma' or a literal character; default: detect")
    common.add_argument("--seed", type=int, default=sup, help="random seed (default 0)")

    parser = argparse.ArgumentParser(prog="bfrank", parents=[common],
                                     description="Closed-form Bayes factors for two-condition count data.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def inputs(p):
        p.add_argument("counts", nargs="+", help="count matrix file(s) with identical gene lists")
        p.add_argument("-s", "--samples", required=True, help="sample sheet")
        p.add_argument("-o", "--output", required=True, help="output file, '-' for stdout")
        p.add_argument("--lenient", action="store_true", help="drop matrix samples missing from the sheet")

    p = sub.add_parser("analyze", parents=[common], help="rank genes by log10 Bayes factor")
    inputs(p)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("check-replicates", parents=[common], help="pairwise replicate consistency")
    inputs(p)
    p.set_defaults(func=cmd_check_replicates)

    p = sub.add_parser("simulate", parents=[common], help="write a synthetic dataset with truth table")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--num-genes", type=int, default=1000)
    p.add_argument("--fraction-changed", type=float, default=0.1)
    p.add_argument("--effect-min", type=float, default=0.3, help="minimum |log2 fold change|")
    p.add_argument("--effect-max", type=float, default=2.0, help="maximum |log2 fold change|")
    p.add_argument("--depth", type=int, default=8_000_000, help="reads per replicate")
    p.add_argument("--replicates", type=int, default=12, help="replicates per condition")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", parents=[common], help="AUROC of an analyze table against a truth table")
    p.add_argument("results")
    p.add_argument("truth")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", parents=[common], help="curve data for log10 BF and iFC")
    p.add_argument("mode", choices=("delta-n", "delta-q"))
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--total", type=int, default=DEFAULT_SWEEP_TOTAL, help="reads per sample (delta-n)")
    p.add_argument("--n1", type=int, nargs="+", default=[1000], help="reference count(s) (delta-n)")
    p.add_argument("--dn-min", type=int, default=-1000)
    p.add_argument("--dn-max", type=int, default=1000)
    p.add_argument("--dn-step", type=int, default=10)
    p.add_argument("--depths", type=int, nargs="+", default=[10**4, 10**5, 10**6, 10**7])
    p.add_argument("--pairs", type=_parse_pair, nargs="+", default=[(0.001, 0.0012), (0.01, 0.011)],
                   help="proportion pairs 'p1,p2' (delta-q)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", parents=[common], help="closed form vs exact and quadrature oracles")
    p.add_argument("--full", action="store_true", help="run the full-size suite")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are input errors here
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.func(args)
    except (BFRankError, OSError, UnicodeDecodeError, ValueError) as exc:
        print(f"bfrank: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover
        print(f"bfrank: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
