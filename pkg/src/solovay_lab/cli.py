"""Command-line front end.

Each subcommand maps to one construction and writes a CSV (header row
first) or JSON artifact.  Dyadic values are always written as
``numerator,exponent`` pairs.  Exit status is 0 on success, 2 when a
construction rejects its input (stderr carries the structured error) and
1 on usage, I/O or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from . import allocation, kc_coding, mltest, solovay, stochastic, triviality
from .core import (
    OrderFn,
    StagedFunction,
    is_inf,
    parse_value,
    stage_refine,
    strings_upto,
    dy_partial_weight,
)
from .errors import DomainError
from .machine import CODEC, DOVETAIL, PLAIN, k_approx, stabilization_bound

MACHINES = {"codec": CODEC, "plain": PLAIN, "dovetail": DOVETAIL}


class UsageError(Exception):
    pass


@dataclass
class RunPlan:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)
    out: Optional[str] = None
    format: str = "csv"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


# ---------------------------------------------------------------------------
# input formats


def load_table(text: str) -> list:
    """``n value`` lines; indices must cover ``0..N-1``."""
    entries = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'n value'")
        entries[int(parts[0])] = parse_value(parts[1])
    if sorted(entries) != list(range(len(entries))):
        raise ValueError("table indices must be 0..N-1 without gaps")
    return [entries[n] for n in range(len(entries))]


def load_rows(text: str) -> list[list[int]]:
    """One comma-separated row of integers per line."""
    return [[int(v) for v in line.split(",")] for line in text.splitlines() if line.strip()]


def _fmt(v) -> str:
    return "inf" if is_inf(v) else str(v)


def _dy(d) -> list[int]:
    return [d.numerator, d.exponent]


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _interval(text: str) -> tuple[int, int]:
    try:
        s, t = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected s:t, got {text!r}")
    if s > t:
        raise argparse.ArgumentTypeError(f"empty interval {text}")
    return s, t


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _bits(text: str) -> str:
    if text == "-":
        return ""
    if set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"not a bit string: {text!r}")
    return text


# name -> (file inputs, parameter adder)
_COMMANDS: dict[str, tuple[str, Callable[[argparse.ArgumentParser], None]]] = {}


def _command(name: str, help: str):
    def wrap(fn):
        _COMMANDS[name] = (help, fn)
        return fn

    return wrap


def _machine_arg(p):
    p.add_argument("--machine", choices=sorted(MACHINES), default="codec")


@_command("ktable", "prefix-free complexity approximations for all short strings")
def _(p):
    _machine_arg(p)
    p.add_argument("--maxlen", type=int, required=True)
    p.add_argument("--budget", type=int)


@_command("gs", "Solovay function value of a triple-coded string")
def _(p):
    _machine_arg(p)
    p.add_argument("--m", type=_bits, required=True)
    p.add_argument("--budget", type=int, required=True)


@_command("omega", "partial sum of 2^-f(n) over n < N")
def _(p):
    p.add_argument("--f", dest="f_file", required=True)
    p.add_argument("--N", type=int, required=True)


@_command("kc-encode", "assign prefix-free codewords to a request file")
def _(p):
    p.add_argument("--requests", dest="requests_file", required=True)


@_command("alloc", "capacity-bounded split of a cylinder")
def _(p):
    p.add_argument("--sigma", type=_bits, required=True)
    p.add_argument("--interval", type=_interval, required=True)
    p.add_argument("--caps", type=_int_list, required=True)


@_command("uc-test", "test component built from increments of a staged f")
def _(p):
    p.add_argument("--f", dest="f_file", required=True)
    p.add_argument("--ktable", dest="ktable_file", required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--no-refine", action="store_true", help="f already moves in unit steps")


@_command("cover", "length-controlled cover of a test level")
def _(p):
    p.add_argument("--cylinders", dest="cylinders_file", required=True)
    p.add_argument("--g", dest="g_file", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--horizon-N", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--preprocess", action="store_true")


@_command("order-rewrite", "rewrite a series of exponents into an order")
def _(p):
    p.add_argument("--k", dest="seq", type=_int_list, required=True)


@_command("partition", "block partition for domination, optionally the dominating function")
def _(p):
    p.add_argument("--g", dest="g_file", required=True)
    p.add_argument("--h", dest="h_file", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--dominate", type=int, metavar="C", help="also freeze h with constant C")


@_command("insert", "insert zeroes at computation-time positions")
def _(p):
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--A", type=_bits)
    p.add_argument("--h", dest="h_file")
    p.add_argument("--phi", dest="phi_file")
    p.add_argument("--seed", type=int, help="generate A, h and phi instead of reading them")


@_command("select", "run the selection rule over a bit string")
def _(p):
    p.add_argument("--B", type=_bits, required=True)
    p.add_argument("--phi", dest="phi_file", required=True)


@_command("trivial-const", "measured triviality constant of a prefix")
def _(p):
    _machine_arg(p)
    p.add_argument("--A", type=_bits, required=True, help="the prefix A|N")
    p.add_argument("--g", dest="g_file", required=True)
    p.add_argument("--budget", type=int, required=True)


@_command("trivial-tree", "prefix closure of the trivial strings at g-levels")
def _(p):
    _machine_arg(p)
    p.add_argument("--g", dest="g_file", required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)


@_command("order-below", "approximants of an order below a right-c.e. bound")
def _(p):
    p.add_argument("--h0", dest="h0_file", required=True, help="one comma-separated row per stage")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--I", type=int, required=True)


@_command("gap-point", "first stage the lower sum passes 0.sigma")
def _(p):
    p.add_argument("--g", dest="g_file", required=True, help="staged table 'n t value'")
    p.add_argument("--sigma", type=_bits, required=True)
    p.add_argument("--budget", type=int, required=True)


@_command("hitting", "hitting set members at a stage")
def _(p):
    _machine_arg(p)
    p.add_argument("--f", dest="f_file", required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--stage", type=int, required=True)
    p.add_argument("--N", type=int, required=True)


@_command("witness", "least hitting-set member with large f")
def _(p):
    _machine_arg(p)
    p.add_argument("--f", dest="f_file", required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--stage", type=int, required=True)
    p.add_argument("--N", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="solovay-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    for name, (help, add) in _COMMANDS.items():
        p = sub.add_parser(name, help=help)
        add(p)
        p.add_argument("--out", help="artifact path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def parse_args(argv: list[str]) -> RunPlan:
    parser = build_parser()
    if not argv or argv[0] not in _COMMANDS:
        if argv and argv[0] in ("-h", "--help"):
            parser.parse_args(argv)
        raise UsageError(f"unknown command {argv[0] if argv else '(none)'}; choose from {', '.join(_COMMANDS)}")
    ns = vars(parser.parse_args(argv))
    command = ns.pop("command")
    out = ns.pop("out")
    fmt = ns.pop("format")
    inputs = {k[: -len("_file")]: v for k, v in ns.items() if k.endswith("_file") and v is not None}
    params = {k: v for k, v in ns.items() if not k.endswith("_file")}
    if command == "insert" and params["seed"] is None and not (params["A"] is not None and "h" in inputs and "phi" in inputs):
        raise UsageError("insert needs --seed or all of --A, --h, --phi")
    return RunPlan(command, inputs, params, out, fmt)


# ---------------------------------------------------------------------------
# execution


class Artifact:
    """Rows with a header, or a JSON object."""

    def __init__(self, header: Optional[list[str]] = None, rows=None, obj=None):
        self.header = header
        self.rows = rows or []
        self.obj = obj

    def render(self, fmt: str) -> str:
        if fmt == "json":
            obj = self.obj if self.obj is not None else [dict(zip(self.header, r)) for r in self.rows]
            return json.dumps(obj, indent=2) + "\n"
        if self.header is None:
            raise UsageError("this command only produces JSON; pass --format json")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()


def _read(plan: RunPlan, name: str) -> str:
    return Path(plan.inputs[name]).read_text()


def _run(plan: RunPlan) -> Artifact:
    P = plan.params
    cmd = plan.command
    machine = MACHINES.get(P.get("machine", "codec"))

    if cmd == "ktable":
        budget = P["budget"] if P["budget"] is not None else stabilization_bound(P["maxlen"])
        rows = [[x, _fmt(k_approx(machine, x, budget))] for x in strings_upto(P["maxlen"])]
        return Artifact(["x", "K"], rows)

    if cmd == "gs":
        return Artifact(["m", "g"], [[P["m"], solovay.g_solovay(machine, P["m"], P["budget"])]])

    if cmd == "omega":
        d = dy_partial_weight(load_table(_read(plan, "f")), P["N"])
        return Artifact(["numerator", "exponent"], [_dy(d)])

    if cmd == "kc-encode":
        assigned = kc_coding.kc_encode_all(kc_coding.load_requests(_read(plan, "requests")))
        return Artifact(["label", "length", "codeword"], [list(a) for a in assigned])

    if cmd == "alloc":
        res = allocation.allocate(P["sigma"], P["interval"], P["caps"])
        return Artifact(["length", "string"], [[len(w), w] for w in res.S], obj=res.to_json())

    if cmd == "uc-test":
        f = StagedFunction.loads(_read(plan, "f"))
        if not P["no_refine"]:
            f = stage_refine(f)
        kt = StagedFunction.loads(_read(plan, "ktable"))
        comp = solovay.build_test_Uc(f, kt, P["c"], P["budget"])
        rows = [[comp.c, iv.stage, *_dy(iv.left), *_dy(iv.right)] for iv in comp.intervals]
        return Artifact(["c", "stage", "left_num", "left_exp", "right_num", "right_exp"], rows)

    if cmd == "cover":
        g = load_table(_read(plan, "g"))
        if P["preprocess"]:
            g = mltest.preprocess_g(g)
        run = mltest.cover_with_lengths(
            mltest.load_cylinders(_read(plan, "cylinders")), g, P["k"], P["horizon_N"], P["budget"]
        )
        obj = {
            "k": run.k,
            "status": run.status.value,
            "stuck": list(run.stuck) if run.stuck else None,
            "V": [{"sigma": iv.sigma, "left": _dy(iv.left), "right": _dy(iv.right)} for iv in run.V],
            "pieces": [
                {
                    "sigma": pc.sigma,
                    "s": pc.s,
                    "t": pc.t,
                    "J": pc.allocation.J,
                    "runs": [list(r) for r in pc.allocation.runs],
                }
                for pc in run.pieces
            ],
            "V_length": _dy(run.V_length),
            "S_measure": _dy(run.S_measure),
        }
        return Artifact(obj=obj)

    if cmd == "order-rewrite":
        return Artifact(["n", "value"], list(enumerate(solovay.rewrite_to_order(P["seq"]))))

    if cmd == "partition":
        g = load_table(_read(plan, "g"))
        h = StagedFunction.loads(_read(plan, "h"))
        part = solovay.partition_for(g, h, P["p"], P["horizon"])
        rows = [[n, s, t] for n, (s, t) in enumerate(part.intervals)]
        obj: dict[str, Any] = {"intervals": rows, "stuck": list(part.stuck) if part.stuck else None}
        if P["dominate"] is not None:
            obj["dominated"] = [_fmt(v) for v in solovay.dominate_solovay(g, h, part, P["dominate"])]
        return Artifact(["n", "s", "t"], rows, obj=obj)

    if cmd == "insert":
        if P["seed"] is not None:
            inst = stochastic.random_instance(P["seed"], P["N"])
            A, h, phi = inst.A, inst.h, inst.phi
        else:
            A = P["A"]
            h = OrderFn([int(v) for v in load_table(_read(plan, "h"))])
            phi = stochastic.ScriptedFunctional.loads(_read(plan, "phi"))
        rec = stochastic.insert_zeroes(A, h, phi, P["N"])
        return Artifact(["position"], [[n] for n in rec.inserted], obj={"B": rec.B, "inserted": rec.inserted})

    if cmd == "select":
        phi = stochastic.ScriptedFunctional.loads(_read(plan, "phi"))
        sel = stochastic.selection_rule_run(P["B"], phi)
        obj = {"positions": sel.positions, "bits": sel.bits}
        if sel.bits:
            bias = stochastic.selected_bias(sel.bits)
            obj["bias"] = [bias.numerator, bias.denominator]
        return Artifact(["position", "bit"], [[n, b] for n, b in zip(sel.positions, sel.bits)], obj=obj)

    if cmd == "trivial-const":
        A = P["A"]
        prefixes = [A[:n] for n in range(len(A) + 1)]
        c = triviality.trivial_constant(prefixes, load_table(_read(plan, "g")), machine, P["budget"])
        return Artifact(["c"], [[_fmt(c)]])

    if cmd == "trivial-tree":
        tree = triviality.build_trivial_tree(load_table(_read(plan, "g")), P["c"], machine, P["budget"], P["depth"])
        members = set(tree.S)
        rows = [[len(w), w, int(w in members)] for w in tree.nodes]
        return Artifact(["depth", "string", "inS"], rows)

    if cmd == "order-below":
        approx = triviality.rce_order_below(load_rows(_read(plan, "h0")), P["N"], P["I"])
        return Artifact(["i", "values"], [[i, " ".join(map(str, g))] for i, g in enumerate(approx)])

    if cmd == "gap-point":
        gp = triviality.gap_point(StagedFunction.loads(_read(plan, "g")), P["sigma"], P["budget"])
        return Artifact(["m", "stage", "lower_num", "lower_exp"], [[gp.m, gp.stage, *_dy(gp.lower)]])

    if cmd == "hitting":
        hs = triviality.hitting_set_stage(load_table(_read(plan, "f")), P["c"], machine, P["stage"], P["N"])
        return Artifact(["n"], [[n] for n in hs.members])

    if cmd == "witness":
        n = triviality.witness_high_complexity(
            load_table(_read(plan, "f")), P["c"], P["k"], machine, P["stage"], P["N"]
        )
        return Artifact(["n"], [[n]])

    raise UsageError(f"unknown command {cmd}")


def execute_plan(plan: RunPlan, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        text = _run(plan).render(plan.format)
        if plan.out:
            Path(plan.out).write_text(text)
        else:
            stdout.write(text)
    except DomainError as err:
        print(str(err), file=stderr)
        return 2
    except (OSError, ValueError, UsageError) as err:
        print(f"{type(err).__name__}: {err}", file=stderr)
        return 1
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        plan = parse_args(argv)
    except UsageError as err:
        print(f"UsageError: {err}", file=sys.stderr)
        return 1
    return execute_plan(plan)


if __name__ == "__main__":
    sys.exit(main())
