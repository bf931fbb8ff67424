"""Command-line front end: ``dualcox <subcommand> --system ... [options]``.

Every artifact starts with a header holding the full run configuration and
the tool version, so a run can be repeated exactly.  Exit codes: 0 success,
1 a verification verdict contradicting ``--expect``, 2 usage error, 3 the
window was inconclusive although a definitive answer was demanded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .artin import abelianization_invariants, dual_presentation, standard_presentation
from .complex import (
    build_interval_complex,
    build_salvetti_subcomplex,
    boundary_squared_is_zero,
    homology,
    spherical_subsets,
)
from .coxeter import CoxeterError, build_system
from .isometry import coxeter_axis, coxeter_element, decompose, axis_parameter
from .morse import MorseMatching, affine_a1_matching, greedy_matching, morse_reduce, verify_matching
from .ncp import Window, build_interval, check_lattice, is_below, verify_bowtie, window_reflections
from .shellability import (
    AxialOrder,
    LemmaPreconditionError,
    OrderError,
    axial_order,
    check_el_shellability,
    compute_axis,
    increasing_chains,
    lexicographic_order,
    sorting_word_order,
    verify_lemma_321,
)

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ------------------------------------------------------------ configuration


def _parse_word(text):
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError as exc:
        raise UsageError("--word must be comma-separated generator indices") from exc


def _parse_fracs(text, what):
    if text is None:
        return None
    try:
        return tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError("%s must be comma-separated rationals" % what) from exc


def run_config(args):
    """The RunConfig dictionary serialized into every output."""
    return {
        "subcommand": args.command,
        "system": args.system,
        "word": list(args.word) if args.word is not None else None,
        "window": {
            "depth": args.window_depth,
            "axis": [str(x) for x in args.window_axis] if args.window_axis else None,
        },
        "order": args.order,
        "tilt": [str(x) for x in args.tilt] if args.tilt else None,
        "seed": args.seed,
        "format": args.format,
        "expect": args.expect,
        "params": {k: getattr(args, k) for k in _SUB_PARAMS.get(args.command, ())},
        "workers": int(os.environ.get("NCP_WORKERS", "1") or 1),
    }


def header(args):
    return {"tool": "dualcox", "version": __version__, "schema": SCHEMA_VERSION, "config": run_config(args)}


class Context:
    """Lazily built objects shared by the subcommands."""

    def __init__(self, args):
        self.args = args
        self.system = build_system(args.system)
        self.system.require_geometry()
        word = args.word if args.word is not None else tuple(range(self.system.rank))
        if sorted(word) != list(range(self.system.rank)):
            raise UsageError("--word must list every generator 0..%d once" % (self.system.rank - 1))
        self.word = word
        self.w = coxeter_element(self.system, word)
        self.window = Window(args.window_depth, args.window_axis)
        self._poset = self._axis = self._complex = None

    @property
    def poset(self):
        if self._poset is None:
            self._poset = build_interval(self.system, self.w, self.window)
        return self._poset

    @property
    def axis(self):
        if self._axis is None:
            self._axis = compute_axis(
                self.system, self.w, self.window, reflections=self.poset.labels, tilt=self.args.tilt, seed=self.args.seed
            )
        return self._axis

    def order(self) -> AxialOrder:
        spec = self.args.order
        if spec == "axial" and not self.system.is_affine:
            # transpositions in lexicographic order for S_n, the sorting-word order otherwise
            spec = "lex" if self.system.symmetric_degree else "sorting"
        if spec == "lex":
            return lexicographic_order(self.poset)
        if spec == "sorting":
            return sorting_word_order(self.poset, self.word)
        if spec == "axial":
            return axial_order(self.axis, self.poset.labels)
        if spec.startswith("file:"):
            with open(spec[5:], encoding="utf-8") as fh:
                names = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
            by_name = {r.descriptor(): r for r in self.poset.labels}
            missing = [n for n in names if n not in by_name]
            if missing:
                raise UsageError("order file names unknown labels: %s" % ", ".join(missing))
            return AxialOrder([by_name[n] for n in names])
        raise UsageError("--order must be axial, lex, sorting or file:PATH")

    @property
    def complex(self):
        if self._complex is None:
            self._complex = build_interval_complex(self.poset, self.args.max_dim)
        return self._complex


# ------------------------------------------------------------ subcommands


def cmd_reflections(ctx):
    refl = window_reflections(ctx.system, ctx.w, ctx.window)
    axis = coxeter_axis(ctx.w) if ctx.system.is_affine else None
    lw = len(ctx.word)
    rows = []
    for r in refl:
        row = {"reflection": r.descriptor(), "depth": r.word_depth, "atom": is_below(r.isometry, ctx.w)}
        if axis is not None:
            t = axis_parameter(r, *axis)
            row["kind"] = "horizontal" if t is None else "vertical"
            row["crossing"] = None if t is None else str(t)
        rows.append(row)
    lines = []
    for r in rows:
        line = "%s depth=%d atom=%s" % (r["reflection"], r["depth"], r["atom"])
        if "kind" in r:
            line += " " + r["kind"]
            if r["crossing"] is not None:
                line += " t=" + r["crossing"]
        lines.append(line + "\n")
    text = "".join(lines)
    return {"length_of_w": lw, "reflections": rows}, text, EXIT_OK


def cmd_interval(ctx):
    P = ctx.poset
    out = P.to_json()
    out["rank_counts"] = P.rank_counts()
    out["complete"] = P.complete
    text = "elements: %d\nrank counts: %s\n" % (len(P), " ".join(map(str, P.rank_counts())))
    text += "".join(
        "%d %s rank=%d\n" % (i, P.element_descriptor(i), P.rank[i]) for i in range(len(P))
    )
    return out, text, EXIT_OK


def cmd_lattice(ctx):
    P = ctx.poset
    cert = check_lattice(P)
    out = cert.to_json(P)
    if cert.witness is not None:
        out["independent_recheck"] = verify_bowtie(P, cert.witness)
    verdict = {"lattice": "lattice", "bowtie-found": "bowtie", "window-inconclusive": "no-violation"}[cert.verdict]
    text = "verdict: %s (definitive=%s)\n" % (cert.verdict, cert.definitive)
    if cert.witness is not None:
        text += "witness: %s\n" % " ".join(P.element_descriptor(i) for i in cert.witness)
    code = EXIT_OK
    exp = ctx.args.expect
    if exp:
        if exp == "no-violation":
            code = EXIT_OK if verdict in ("lattice", "no-violation") else EXIT_FAIL
        elif exp == verdict:
            code = EXIT_OK if cert.definitive or verdict == "lattice" else EXIT_INCONCLUSIVE
        elif verdict == "no-violation" or (verdict == "bowtie" and not cert.definitive):
            code = EXIT_INCONCLUSIVE
        else:
            code = EXIT_FAIL
        if exp == "bowtie" and verdict == "bowtie" and not out.get("independent_recheck"):
            code = EXIT_FAIL
    return out, text, code


def cmd_axis(ctx):
    if not ctx.system.is_affine:
        raise UsageError("axis needs an affine system")
    ax = ctx.axis
    text = "x0 = %s\nd = %s\np0 = %s\n" % (
        ", ".join(map(str, ax.axis_point)),
        ", ".join(map(str, ax.direction)),
        ", ".join(map(str, ax.base_point)),
    )
    return ax.to_json(), text, EXIT_OK


def cmd_order(ctx):
    try:
        order = ctx.order()
    except OrderError as exc:
        return {"error": str(exc)}, "error: %s\n" % exc, EXIT_FAIL
    names = order.descriptors()
    out = {"order": names, "blocks": [order.blocks.get(n) for n in names]}
    return out, "\n".join(names) + "\n", EXIT_OK


def cmd_shell(ctx):
    try:
        order = ctx.order()
    except OrderError as exc:
        return {"error": str(exc)}, "error: %s\n" % exc, EXIT_FAIL
    P = ctx.poset
    cert = check_el_shellability(P, order)
    out = cert.to_json()
    out["order"] = order.descriptors()
    chains = increasing_chains(P, order)
    out["increasing_chains_of_w"] = [[r.descriptor() for r in c] for c in chains]
    text = "verdict: %s\nviolations: %d\nincreasing chain(s) of [1,w]: %s\n" % (
        cert.verdict,
        len(cert.violations),
        "; ".join(" ".join(r.descriptor() for r in c) for c in chains),
    )
    exp = ctx.args.expect
    code = EXIT_OK
    if exp and exp != cert.verdict:
        code = EXIT_FAIL
    elif not exp and cert.verdict != "shellable":
        code = EXIT_FAIL
    return out, text, code


def cmd_lemma321(ctx):
    if not ctx.system.is_affine:
        raise UsageError("lemma321 needs an affine system")
    P = ctx.poset
    ids = [ctx.args.element] if ctx.args.element is not None else range(len(P))
    reports, skipped = [], []
    for i in ids:
        u = P.elements[i]
        if decompose(u).kind != "hyperbolic":
            continue
        try:
            rep = verify_lemma_321(ctx.system, ctx.w, u, ctx.window, P, ctx.axis)
        except LemmaPreconditionError as exc:
            skipped.append({"element": i, "reason": str(exc)})
            continue
        reports.append((i, rep))
    relevant = [(i, r) for i, r in reports if r.irreducible]
    failed = [i for i, r in relevant if not r.passed]
    out = {
        "checked": len(reports),
        "irreducible": len(relevant),
        "failures": failed,
        "skipped": skipped,
        "reports": [dict(element=i, **r.to_json()) for i, r in reports],
    }
    text = "hyperbolic elements: %d, irreducible: %d, failures: %d\n" % (len(reports), len(relevant), len(failed))
    return out, text, EXIT_FAIL if failed else EXIT_OK


def cmd_present(ctx):
    a = ctx.args
    if a.standard:
        p = standard_presentation(ctx.system)
    else:
        p = dual_presentation(ctx.poset, naming=a.naming, reduced=a.reduced)
    ab = abelianization_invariants(p)
    out = p.to_json()
    out["abelianization"] = {"free_rank": ab.free_rank, "torsion": list(ab.torsion)}
    return out, p.to_text(), EXIT_OK


def _homology_json(hs):
    return [h.to_json() for h in hs]


def cmd_complex(ctx):
    K = ctx.complex
    out = K.to_json()
    out["euler_characteristic"] = K.euler_characteristic()
    out["boundary_squared_zero"] = boundary_squared_is_zero(K)
    text = "cell vector: %s\neuler characteristic: %d\n" % (
        " ".join(map(str, K.cell_vector())),
        K.euler_characteristic(),
    )
    return out, text, EXIT_OK if out["boundary_squared_zero"] else EXIT_FAIL


def cmd_salvetti(ctx):
    X = build_salvetti_subcomplex(ctx.system, ctx.w, ctx.complex, ctx.word)
    out = X.to_json()
    text = "census: %s\ncell vector: %s\n" % (
        " ".join("{%s}" % ",".join(map(str, s.subset)) for s in spherical_subsets(ctx.system, ctx.word)),
        " ".join(map(str, X.cell_vector())),
    )
    if X.info["embedding_problems"]:
        text += "".join("problem: %s\n" % p for p in X.info["embedding_problems"])
    return out, text, EXIT_FAIL if X.info["embedding_problems"] else EXIT_OK


def cmd_homology(ctx):
    which = ctx.args.of
    K = ctx.complex
    if which == "salvetti":
        K = build_salvetti_subcomplex(ctx.system, ctx.w, K, ctx.word)
    hs = homology(K)
    out = {"of": which, "cell_vector": list(K.cell_vector()), "homology": _homology_json(hs)}
    text = "".join("H_%d = %s\n" % (d, h) for d, h in enumerate(hs))
    return out, text, EXIT_OK


def cmd_morse(ctx):
    K = ctx.complex
    X = build_salvetti_subcomplex(ctx.system, ctx.w, K, ctx.word)
    kind = ctx.args.matching
    if kind == "affine-a1":
        m = affine_a1_matching(K)
    elif kind == "greedy":
        order = ctx.order() if ctx.system.is_affine else lexicographic_order(ctx.poset)
        m = greedy_matching(K, X, order)
    else:
        m = MorseMatching([])
    rep = verify_matching(K, m, X)
    out = rep.to_json(K, m)
    out["info"] = m.info
    R = morse_reduce(K, m) if rep.acyclic and rep.well_formed else None
    if R is not None:
        hk, hr = homology(K), homology(R)
        out["morse_cell_vector"] = list(R.cell_vector())
        out["homology_preserved"] = hk == hr
        out["homology"] = _homology_json(hr)
    text = "pairs: %d\ncritical: %s\nacyclic: %s\ncomplete on K minus X': %s\n" % (
        len(m.pairs),
        " ".join(K.cell_descriptor(*c) for c in rep.critical),
        rep.acyclic,
        rep.complete_on_complement,
    )
    ok = rep.acyclic and rep.well_formed and (R is None or out["homology_preserved"])
    if ctx.args.expect == "complete" and not rep.complete_on_complement:
        ok = False
    return out, text, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "reflections": cmd_reflections,
    "interval": cmd_interval,
    "lattice": cmd_lattice,
    "axis": cmd_axis,
    "order": cmd_order,
    "shell": cmd_shell,
    "lemma321": cmd_lemma321,
    "present": cmd_present,
    "complex": cmd_complex,
    "salvetti": cmd_salvetti,
    "homology": cmd_homology,
    "morse": cmd_morse,
}

_SUB_PARAMS = {
    "present": ("standard", "naming", "reduced"),
    "complex": ("max_dim",),
    "salvetti": ("max_dim",),
    "homology": ("of", "max_dim"),
    "morse": ("matching", "max_dim"),
    "lemma321": ("element",),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", required=True, help="type name (A3, affB3, S4, I2(5)) or JSON matrix")
    common.add_argument("--word", type=_parse_word, default=None, help="Coxeter word, e.g. 0,1,2")
    common.add_argument("--window-depth", "--window", dest="window_depth", type=int, default=3)
    common.add_argument("--window-axis", type=lambda s: _parse_fracs(s, "--window-axis"), default=None,
                        help="lo,hi range of axis parameters")
    common.add_argument("--order", default="axial", help="axial | lex | sorting | file:PATH")
    common.add_argument("--tilt", type=lambda s: _parse_fracs(s, "--tilt"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--expect", default=None)
    common.add_argument("--out", default=None, help="write the artifact here instead of stdout")
    common.add_argument("--max-dim", dest="max_dim", type=int, default=None)

    p = argparse.ArgumentParser(prog="dualcox", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "present":
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--dual", action="store_true", default=True)
            g.add_argument("--standard", action="store_true")
            sp.add_argument("--naming", choices=("letters", "descriptor"), default="letters")
            sp.add_argument("--full", dest="reduced", action="store_false",
                            help="all pairs of chains instead of each chain against the first")
            sp.set_defaults(reduced=True)
        if name == "homology":
            sp.add_argument("--of", choices=("interval", "salvetti"), default="interval")
        if name == "morse":
            sp.add_argument("--matching", choices=("greedy", "affine-a1", "none"), default="greedy")
        if name == "lemma321":
            sp.add_argument("--element", type=int, default=None, help="poset element id (default: all)")
    return p


def _render(args, ctx, result, text):
    head = header(args)
    if args.format == "json":
        return json.dumps({"header": head, "result": result}, indent=2, default=str) + "\n"
    if args.format == "dot":
        if args.command != "interval":
            raise UsageError("dot output is only available for interval")
        return "// " + json.dumps(head, default=str) + "\n" + ctx.poset.to_dot()
    return "# " + json.dumps(head, default=str) + "\n" + text


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        ctx = Context(args)
        args.word = ctx.word  # record the effective Coxeter word in the header
        result, text, code = COMMANDS[args.command](ctx)
        payload = _render(args, ctx, result, text)
    except (UsageError, CoxeterError) as exc:
        print("dualcox: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
