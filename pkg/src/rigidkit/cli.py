"""Command-line front end.

Verbs map one-to-one onto library modules; every analysis report embeds the
tool version plus the norm, seed, trial count, and tolerance that produced
it, and identical invocations produce byte-identical output.  Exit codes:
0 analysis completed (whatever the verdict), 1 input or usage problem,
2 internal cross-check failure.
"""

import argparse
import json
import sys

from . import __version__, jsonio
from .bodybar import tay_decide, validate_multibody
from .catalog import available_families, generate
from .errors import AlgorithmError, InconsistencyError, InputError, RigidkitError
from .frameworks import (
    RANK_EPS,
    NormSpec,
    flex_report,
    is_rigid_generic,
)
from .moves import count_for_mode, find_chain, verify_chain
from .sparsity import SparsityCount, is_sparse
from .svg import render_svg
from .towers import (
    laman_tower_decide,
    sequential_rigidity_2d,
    tower_rigidity,
)

__all__ = ["main", "run"]


class UsageError(InputError):
    """Bad flags or verb syntax; maps to exit 1 like other input problems."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _norm_flag(text: str) -> NormSpec:
    return NormSpec.parse(text)


def _build_parser() -> _Parser:
    parser = _Parser(prog="rigidkit", description="Rigidity analysis toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, norm=True):
        if norm:
            p.add_argument("--norm", type=_norm_flag, default=None, metavar="d=D,q=Q")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=RANK_EPS)
        p.add_argument("-o", "--output", default=None, metavar="PATH")

    p = sub.add_parser("analyze", help="flex report for a framework")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--generic", action="store_true")
    p.add_argument("--trials", type=int, default=5)
    common(p)

    p = sub.add_parser("sparsity", help="(k,l)-sparsity check")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--count", required=True, metavar="K,L")
    common(p, norm=False)

    p = sub.add_parser("chain", help="construction chain between tight graphs")
    p.add_argument("--mode", required=True, choices=["euclidean", "qnorm"])
    p.add_argument("--from", dest="source", required=True, metavar="PATH")
    p.add_argument("--to", dest="target", required=True, metavar="PATH")
    common(p, norm=False)

    p = sub.add_parser("tower", help="certify a staged graph presentation")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument(
        "--mode", default="relative", choices=["relative", "sequential", "laman"]
    )
    common(p)

    p = sub.add_parser("bodybar", help="multi-body rigidity decision")
    p.add_argument("input", nargs="?", default="-")
    common(p)

    p = sub.add_parser("catalog", help="emit a named graph family")
    p.add_argument("family")
    p.add_argument("--params", nargs="*", default=[], metavar="K=V")
    p.add_argument("--placement", default="canonical", choices=["canonical", "none"])
    p.add_argument("-o", "--output", default=None, metavar="PATH")

    p = sub.add_parser("render", help="SVG drawing of a plane framework")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--flex", type=int, default=None, metavar="K")
    p.add_argument("--no-labels", action="store_true")
    common(p)
    return parser


def _load(path: str):
    text = sys.stdin.read() if path == "-" else _read_file(path)
    return json.loads(text)


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _emit_json(obj: dict, path: str | None) -> None:
    text = json.dumps(jsonio.jsonable(obj), indent=2, sort_keys=True) + "\n"
    _emit_text(text, path)


def _emit_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _report(args, norm: NormSpec | None, payload: dict, trials=None) -> dict:
    out = {
        "version": __version__,
        "norm": jsonio.norm_to_json(norm) if norm is not None else None,
        "seed": getattr(args, "seed", None),
        "trials": trials,
        "tolerance": getattr(args, "tol", None),
    }
    out.update(payload)
    return out


def _resolve_norm(args, from_file: NormSpec | None) -> NormSpec:
    norm = args.norm or from_file
    if norm is None:
        raise InputError("no norm given: add a 'norm' field or pass --norm")
    return norm


def _cmd_analyze(args) -> None:
    g, p, file_norm = jsonio.loose_input_from_json(_load(args.input))
    norm = _resolve_norm(args, file_norm)
    if args.generic:
        verdict = is_rigid_generic(g, norm, trials=args.trials, seed=args.seed)
        rep = verdict.report
        extras = {"generic": True}
        if verdict.combinatorial is not None:
            extras["combinatorialCrossCheck"] = verdict.combinatorial
        trials = args.trials
    else:
        if p is None:
            raise InputError("input has no placement; pass --generic to sample one")
        rep = flex_report(g, p, norm, args.tol)
        extras = {"generic": False}
        trials = None
    payload = {
        "rank": rep.rank,
        "nullity": rep.nullity,
        "trivialDim": rep.trivial_dim,
        "flexDim": rep.flex_dim,
        "rigid": rep.rigid,
        "classification": rep.classification,
        **extras,
    }
    _emit_json(_report(args, norm, payload, trials), args.output)


def _cmd_sparsity(args) -> None:
    g, _, _ = jsonio.loose_input_from_json(_load(args.input))
    count = SparsityCount.parse(args.count)
    rep = is_sparse(g, count)
    payload = {
        "count": {"k": count.k, "l": count.l},
        "sparse": rep.sparse,
        "tight": rep.tight,
        "witness": (
            jsonio.graph_to_json(rep.witness) if rep.witness is not None else None
        ),
    }
    _emit_json(_report(args, None, payload), args.output)


def _cmd_chain(args) -> None:
    g_from, _, _ = jsonio.loose_input_from_json(_load(args.source))
    g_to, _, _ = jsonio.loose_input_from_json(_load(args.target))
    count = count_for_mode(args.mode)
    chain = find_chain(g_from, g_to, args.mode)
    verdict = verify_chain(chain, args.mode)
    if not verdict.ok:
        raise AlgorithmError(
            f"found chain fails verification at stage {verdict.failure_stage}: "
            f"{verdict.reason}"
        )
    payload = {
        "mode": args.mode,
        "count": {"k": count.k, "l": count.l},
        "stageCount": len(chain.stages),
        "verified": True,
        **jsonio.chain_to_json(chain),
    }
    _emit_json(_report(args, None, payload), args.output)


def _cmd_tower(args) -> None:
    t = jsonio.tower_from_json(_load(args.input))
    norm = _resolve_norm(args, None)
    if args.mode == "relative":
        v = tower_rigidity(t, norm, seed=args.seed)
        payload = {
            "mode": args.mode,
            "status": v.status,
            "relativelyRigidPrefix": v.relatively_rigid_prefix,
            "stageCount": v.stage_count,
            "vertexComplete": v.vertex_complete,
            "sequentialWitness": (
                [jsonio.graph_to_json(h) for h in v.sequential_witness]
                if v.sequential_witness is not None
                else None
            ),
        }
    elif args.mode == "sequential":
        if norm.d != 2:
            raise InputError("sequential certificates are planar; use --norm d=2")
        witness = sequential_rigidity_2d(t, norm.q, seed=args.seed)
        payload = {
            "mode": args.mode,
            "status": "SequentiallyRigid" if witness else "NotCertified",
            "witness": (
                [jsonio.graph_to_json(h) for h in witness] if witness else None
            ),
        }
    else:
        if norm.d != 2:
            raise InputError("the tight-subgraph decision is planar; use --norm d=2")
        v = laman_tower_decide(t, norm.q)
        payload = {
            "mode": args.mode,
            "status": v.status,
            "witness": (
                [jsonio.graph_to_json(h) for h in v.witness]
                if v.witness is not None
                else None
            ),
        }
    _emit_json(_report(args, norm, payload), args.output)


def _cmd_bodybar(args) -> None:
    raw = jsonio.multibody_from_json(_load(args.input))
    norm = _resolve_norm(args, None)
    m = validate_multibody(raw.underlying, raw.bodies, norm)
    v = tay_decide(m, norm, seed=args.seed)
    payload = {
        "rigid": v.rigid,
        "count": {"k": v.count.k, "l": v.count.l},
        "crossChecked": v.cross_checked,
        "bodies": len(m.bodies),
        "bars": len(m.inter_body_edges),
        "witness": (
            jsonio.graph_to_json(v.witness) if v.witness is not None else None
        ),
    }
    _emit_json(_report(args, norm, payload), args.output)


def _parse_param(item: str):
    key, sep, value = item.partition("=")
    if not sep or not key:
        raise UsageError(f"catalog params must look like name=value, got {item!r}")
    try:
        parsed = json.loads(value)
    except json.JSONDecodeError:
        parsed = value
    if isinstance(parsed, list):
        parsed = tuple(parsed)
    return key, parsed


def _cmd_catalog(args) -> None:
    if args.family == "list":
        if args.params:
            raise UsageError("catalog list takes no params")
        _emit_json({"families": list(available_families())}, args.output)
        return
    params = dict(_parse_param(item) for item in args.params)
    fam = generate(args.family, **params)
    out = jsonio.family_to_json(fam, include_placement=args.placement == "canonical")
    _emit_json(out, args.output)


def _cmd_render(args) -> None:
    g, p, file_norm = jsonio.loose_input_from_json(_load(args.input))
    if p is None:
        raise InputError("render needs a placement")
    flex = None
    if args.flex is not None:
        norm = _resolve_norm(args, file_norm)
        rep = flex_report(g, p, norm, args.tol)
        if args.flex < 0 or args.flex >= len(rep.nontrivial_flex_basis):
            raise InputError(
                f"flex index {args.flex} out of range: "
                f"framework has {rep.flex_dim} nontrivial flexes"
            )
        flex = rep.flex_field(args.flex)
    _emit_text(render_svg(g, p, flex, labels=not args.no_labels), args.output)


_HANDLERS = {
    "analyze": _cmd_analyze,
    "sparsity": _cmd_sparsity,
    "chain": _cmd_chain,
    "tower": _cmd_tower,
    "bodybar": _cmd_bodybar,
    "catalog": _cmd_catalog,
    "render": _cmd_render,
}


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _HANDLERS[args.verb](args)
        return 0
    except json.JSONDecodeError as exc:
        print(f"rigidkit: malformed JSON: {exc}", file=sys.stderr)
        return 1
    except (InconsistencyError, AlgorithmError) as exc:
        print(f"rigidkit: internal inconsistency: {exc}", file=sys.stderr)
        return 2
    except RigidkitError as exc:
        print(f"rigidkit: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))
