"""Command-line front end: batch scripts and an interactive loop.

Commands (one per line, ``#`` starts a comment)::

    let NAME = SETEXPR
    show SETEXPR
    fragment NAME rank N
    eval STRUCT "FORMULA" [--env x=NAME ...] [--json]
    check THEORY|AXIOM STRUCT [--seed-rank N] [--witness-rank N] [--json]
    gadget-lem STRUCT "FORMULA" [--json]
    choice NAME
    tc NAME
    iter NAME STEPS "PHI" [--in STRUCT]

Set expressions: ``empty``, ``{e1, ..., en}``, ``pair(a,b)``, ``kpair(a,b)``,
``union(a,b)``, ``bigunion(a)``, ``pow(a)``, ``sep(a, "formula")``,
``nat(n)``, ``omega(k)``, ``exp(a,b)``, ``tc(a)``, ``h(a, n)``, or a bound name.
Structures named ``V0`` .. ``V5`` exist implicitly.
"""
from __future__ import annotations

import argparse
import json
import re
import shlex
import sys
from dataclasses import dataclass, field

from . import axioms as ax
from . import formula as fm
from .kernel import ResourceLimitError, SetId, Store, StoreConfig
from .semantics import (
    Structure,
    UnboundVariableError,
    eval_formula,
    structure_from_seeds,
    v_fragment,
)

EXIT_OK, EXIT_USAGE, EXIT_EVAL, EXIT_RESOURCE, EXIT_CHECK = 0, 1, 2, 3, 4


class CliError(Exception):
    code = EXIT_EVAL


class UsageError(CliError):
    code = EXIT_USAGE


class EvalError(CliError):
    code = EXIT_EVAL


class CheckFailed(CliError):
    code = EXIT_CHECK


@dataclass
class Session:
    store: Store = field(default_factory=Store)
    bindings: dict[str, SetId] = field(default_factory=dict)
    structures: dict[str, Structure] = field(default_factory=dict)
    json: bool = False
    strict: bool = False

    def structure(self, name: str) -> Structure:
        if name in self.structures:
            return self.structures[name]
        m = re.fullmatch(r"V(\d+)", name)
        if m:
            s = v_fragment(self.store, int(m.group(1)))
            self.structures[name] = s
            return s
        raise EvalError(f"unknown structure {name!r}")

    def lookup(self, name: str) -> SetId:
        if name not in self.bindings:
            raise EvalError(f"unknown set name {name!r}")
        return self.bindings[name]


# -- set expressions -----------------------------------------------------

_SET_TOKEN = re.compile(r'\s*(?:(?P<num>\d+)|(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)|(?P<str>"[^"]*")|(?P<op>[{}(),]))')
_ARITY = {
    "pair": "ss", "kpair": "ss", "union": "ss", "bigunion": "s", "pow": "s",
    "sep": "sf", "nat": "n", "omega": "n", "exp": "ss", "tc": "s", "h": "sn",
}


def _set_tokens(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _SET_TOKEN.match(text, pos)
        if not m:
            raise UsageError(f"bad set expression at column {pos + 1}: {text[pos:]!r}")
        out.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup) + 1))
        pos = m.end()
    out.append(("eof", "", len(text) + 1))
    return out


def eval_setexpr(session: Session, text: str) -> SetId:
    toks = _set_tokens(text)
    i = 0
    store = session.store

    def peek():
        return toks[i]

    def take(kind=None, value=None):
        nonlocal i
        tok = toks[i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise UsageError(f"expected {want!r} at column {tok[2]}, found {got!r}")
        i += 1
        return tok

    def expr() -> SetId:
        kind, val, col = peek()
        if val == "{":
            take()
            kids = []
            if peek()[1] == "}":
                take()
                return store.empty()
            kids.append(expr())
            while peek()[1] == ",":
                take()
                kids.append(expr())
            take(value="}")
            return store.intern(kids)
        if kind == "ident":
            take()
            if val == "empty":
                return store.empty()
            if val in _ARITY and peek()[1] == "(":
                take()
                args = []
                for j, sort in enumerate(_ARITY[val]):
                    if j:
                        take(value=",")
                    if sort == "s":
                        args.append(expr())
                    elif sort == "n":
                        args.append(int(take("num")[1]))
                    else:
                        args.append(take("str")[1][1:-1])
                take(value=")")
                return apply(val, args)
            return session.lookup(val)
        raise UsageError(f"expected set expression at column {col}")

    def apply(fn: str, args):
        if fn == "pair":
            return store.pair(*args)
        if fn == "kpair":
            return store.kpair(*args)
        if fn == "union":
            return store.union2(*args)
        if fn == "bigunion":
            return store.bigunion(*args)
        if fn == "pow":
            return store.powerset(*args)
        if fn == "nat":
            return store.numeral(*args)
        if fn == "omega":
            return store.omega_upto(*args)
        if fn == "exp":
            return store.exp_set(*args)
        if fn == "tc":
            return store.transitive_closure(*args)
        if fn == "h":
            return store.h_bounded(*args)
        return _separate(session, *args)

    result = expr()
    if peek()[0] != "eof":
        raise UsageError(f"trailing input at column {peek()[2]}")
    return result


def _separate(session: Session, a: SetId, text: str) -> SetId:
    f = fm.parse(text)
    free = fm.free_vars(f)
    if len(free) == 1:
        var, params = free[0], {}
    else:
        unbound = [n for n in free if n not in session.bindings]
        if len(unbound) != 1:
            raise UsageError(f"sep needs exactly one free variable besides bound names: {text!r}")
        var = unbound[0]
        params = {n: session.bindings[n] for n in free if n != var}
    s = structure_from_seeds(session.store, [a, *params.values()], "sep")
    return session.store.separate(a, lambda x: eval_formula(s, f, params | {var: x}).value)


# -- commands ------------------------------------------------------------


def _options(args: list[str], spec: dict[str, str]) -> tuple[list[str], dict]:
    """Split ``--flag [value]`` options from positional arguments."""
    pos, opts = [], {}
    it = iter(args)
    for a in it:
        if a.startswith("--"):
            key = a[2:]
            if key not in spec:
                raise UsageError(f"unknown option {a}")
            kind = spec[key]
            if kind == "flag":
                opts[key] = True
                continue
            try:
                val = next(it)
            except StopIteration:
                raise UsageError(f"option {a} needs a value") from None
            if kind == "int":
                if not val.isdigit():
                    raise UsageError(f"option {a} needs a natural number")
                opts[key] = int(val)
            else:
                opts.setdefault(key, []).append(val)
        else:
            pos.append(a)
    return pos, opts


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=False, separators=(",", ":"))


def _parse_formula(text: str) -> fm.Formula:
    try:
        return fm.parse(text)
    except fm.FormulaSyntaxError as e:
        raise UsageError(f"formula syntax error: {e}") from None


def _margin_hint(s: Structure, f: fm.Formula) -> str | None:
    """For a false closed formula of forall..exists shape, the best stratification that holds."""
    univ, exist, _ = ax._open_prefix(fm.universal_closure(f))
    if not univ or not exist:
        return None
    for seed in range(s.rank_bound - 1, -1, -1):
        r = ax.check_formula(s, f, seed, s.rank_bound)
        if r.status != ax.FAILS:
            return f"holds-with-margin: seed-rank {seed}, witness-rank {s.rank_bound}"
    return None


def cmd_let(session: Session, rest: str) -> str:
    m = re.fullmatch(r"\s*([a-zA-Z][a-zA-Z0-9_]*)\s*=\s*(.+)", rest)
    if not m:
        raise UsageError("usage: let NAME = SETEXPR")
    name, expr = m.groups()
    sid = eval_setexpr(session, expr)
    session.bindings[name] = sid
    if session.json:
        return _dump({"let": name, "set": session.store.text(sid)})
    return f"{name} = {session.store.text(sid)}"


def cmd_show(session: Session, rest: str) -> str:
    if not rest.strip():
        raise UsageError("usage: show SETEXPR")
    sid = eval_setexpr(session, rest)
    text = session.store.text(sid)
    if session.json:
        return _dump({"set": text, "rank": session.store.rank(sid), "size": session.store.size(sid)})
    return text


def cmd_fragment(session: Session, args: list[str]) -> str:
    if len(args) != 3 or args[1] != "rank" or not args[2].isdigit():
        raise UsageError("usage: fragment NAME rank N")
    s = v_fragment(session.store, int(args[2]))
    s = Structure(s.store, s.carrier, args[0])
    session.structures[args[0]] = s
    if session.json:
        return _dump({"fragment": args[0], "rank": int(args[2]), "size": len(s)})
    return f"{args[0]}: all sets of rank < {args[2]} ({len(s)} sets)"


def cmd_eval(session: Session, args: list[str]) -> str:
    pos, opts = _options(args, {"env": "list", "json": "flag"})
    if len(pos) != 2:
        raise UsageError('usage: eval STRUCT "FORMULA" [--env x=NAME ...]')
    s = session.structure(pos[0])
    f = _parse_formula(pos[1])
    env = {}
    for item in opts.get("env", []):
        var, _, name = item.partition("=")
        if not var or not name:
            raise UsageError(f"bad --env binding {item!r}")
        env[var] = eval_setexpr(session, name)
    for var, val in env.items():
        if val not in s:
            raise EvalError(f"{var} is bound to a set outside {s.name}")
    rest = [n for n in fm.free_vars(f) if n not in env]
    for n in reversed(rest):
        f = fm.forall(n, f)
    ev = eval_formula(s, f, env)
    hint = None if ev.value else _margin_hint(s, f)
    if session.json or opts.get("json"):
        out = {"structure": s.name, "formula": fm.to_text(f), "evidence": ev.to_json(session.store)}
        if hint:
            out["note"] = hint
        return _dump(out)
    line = "true" if ev.value else "false"
    if ev.witness is not None:
        role = "witness" if ev.value else "counterexample"
        line += f" ({role} {ev.binder} = {session.store.text(ev.witness)})"
    if hint:
        line += f"; {hint}"
    return line


def cmd_check(session: Session, args: list[str]) -> str:
    pos, opts = _options(args, {"seed-rank": "int", "witness-rank": "int", "json": "flag"})
    if len(pos) != 2:
        raise UsageError("usage: check THEORY|AXIOM STRUCT [--seed-rank N] [--witness-rank N]")
    s = session.structure(pos[1])
    seed, wit = opts.get("seed-rank"), opts.get("witness-rank")
    try:
        try:
            ax.lookup_theory(pos[0])
            reports = ax.check_theory(s, pos[0], seed, wit)
        except ax.UnknownAxiomError:
            entry = ax.lookup_axiom(pos[0])
            sd, wt = ax.default_bounds(s, entry, seed, wit)
            if seed is not None:
                sd = seed
            reports = [ax.check_axiom(s, entry, sd, wt)]
    except ax.UnknownAxiomError as e:
        raise EvalError(str(e)) from None
    except ValueError as e:
        raise UsageError(str(e)) from None
    if session.json or opts.get("json"):
        out = _dump([r.to_json(session.store) for r in reports])
    else:
        out = "\n".join(
            f"{r.axiom}: {r.status} [seed {r.seed}, witness {r.witness_rank}] {r.notes}".rstrip()
            for r in reports
        )
    if session.strict and any(r.status == ax.FAILS for r in reports):
        raise CheckFailed(out)
    return out


def cmd_gadget(session: Session, args: list[str]) -> str:
    pos, opts = _options(args, {"json": "flag"})
    if len(pos) != 2:
        raise UsageError('usage: gadget-lem STRUCT "FORMULA"')
    s = session.structure(pos[0])
    try:
        rep = ax.lem_gadget(_parse_formula(pos[1]), s)
    except ValueError as e:
        raise EvalError(str(e)) from None
    store = session.store
    if session.json or opts.get("json"):
        out = _dump(rep.to_json(store))
    else:
        out = (
            f"S_p = {store.text(rep.s_p)}; minimal z = {store.text(rep.minimal)}; "
            f"decision: {'p' if rep.decision else 'not p'}; direct eval: "
            f"{'true' if rep.direct else 'false'}; {'agrees' if rep.agrees else 'DISAGREES'}"
        )
    if not rep.agrees:
        raise CheckFailed(out)
    return out


def cmd_choice(session: Session, args: list[str]) -> str:
    if not args:
        raise UsageError("usage: choice NAME")
    store = session.store
    x = eval_setexpr(session, " ".join(args))
    try:
        c = ax.choice_witness(store, x)
    except ax.NoChoiceFunction as e:
        msg = f"no choice function: member {store.text(e.member)} is empty"
        return _dump({"choice": None, "empty_member": store.text(e.member)}) if session.json else msg
    return _dump({"choice": store.text(c)}) if session.json else store.text(c)


def cmd_tc(session: Session, args: list[str]) -> str:
    if not args:
        raise UsageError("usage: tc NAME")
    t = session.store.transitive_closure(eval_setexpr(session, " ".join(args)))
    text = session.store.text(t)
    return _dump({"tc": text}) if session.json else text


def cmd_iter(session: Session, args: list[str]) -> str:
    pos, opts = _options(args, {"in": "list", "json": "flag"})
    if len(pos) != 3 or not pos[1].isdigit():
        raise UsageError('usage: iter NAME STEPS "PHI" [--in STRUCT]')
    c = eval_setexpr(session, pos[0])
    steps = int(pos[1])
    if steps < 1:
        raise UsageError("iter needs at least one step")
    s = session.structure(opts.get("in", ["V4"])[-1])
    phi = _parse_formula(pos[2])
    if c not in s:
        raise EvalError(f"start set is outside {s.name}")
    cache: dict[SetId, SetId] = {}

    def r(x: SetId) -> SetId:
        if x not in cache:
            try:
                cache[x] = ax.internalize_class_function(s, phi, domain=[x])[x]
            except ax.NotFunctional as e:
                q = "no" if not e.candidates else "more than one"
                raise EvalError(f"PHI gives {q} value in {s.name} at {session.store.text(x)}") from None
        return cache[x]

    chain, graph = session.store.iter_omega(r, c, steps)
    store = session.store
    if session.json or opts.get("json"):
        return _dump({"chain": store.text(chain), "graph": store.text(graph)})
    return f"chain = {store.text(chain)}\ngraph = {store.text(graph)}"


_SHLEX_COMMANDS = {
    "fragment": cmd_fragment,
    "eval": cmd_eval,
    "check": cmd_check,
    "gadget-lem": cmd_gadget,
    "choice": cmd_choice,
    "tc": cmd_tc,
    "iter": cmd_iter,
}


def run_command(session: Session, line: str) -> str:
    """Run one command line and return its output ('' for blanks and comments)."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return ""
    verb, _, rest = stripped.partition(" ")
    try:
        if verb == "let":
            return cmd_let(session, rest)
        if verb == "show":
            return cmd_show(session, rest)
        if verb == "help":
            return __doc__.strip()
        if verb not in _SHLEX_COMMANDS:
            raise UsageError(f"unknown command {verb!r}")
        try:
            args = shlex.split(rest, comments=True)
        except ValueError as e:
            raise UsageError(f"bad quoting: {e}") from None
        return _SHLEX_COMMANDS[verb](session, args)
    except CliError:
        raise
    except fm.FormulaSyntaxError as e:
        raise UsageError(f"formula syntax error: {e}") from None
    except ResourceLimitError as e:
        err = CliError(f"resource limit: {e}")
        err.code = EXIT_RESOURCE
        raise err from None
    except (UnboundVariableError, ValueError, KeyError) as e:
        raise EvalError(str(e)) from None


def batch(lines, session: Session | None = None, keep_going: bool = False):
    """Run a script.  Returns ``(exit_code, outputs, errors)``."""
    session = session or Session()
    outputs, errors = [], []
    code = EXIT_OK
    for n, line in enumerate(lines, 1):
        try:
            out = run_command(session, line)
        except CliError as e:
            errors.append(f"line {n}: {e}")
            if isinstance(e, CheckFailed):
                outputs.append(str(e))
            code = code or e.code
            if not keep_going:
                break
            continue
        if out:
            outputs.append(out)
    return code, outputs, errors


def repl(session: Session) -> None:
    print("hfsets: hereditarily finite sets. 'help' lists commands, Ctrl-D exits.")
    while True:
        try:
            line = input("hf> ")
        except EOFError:
            print()
            return
        try:
            out = run_command(session, line)
        except CliError as e:
            print(f"error: {e}", file=sys.stderr)
            continue
        if out:
            print(out)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="hfsets", description="Finite model checking of set-theoretic axioms.")
    p.add_argument("script", nargs="?", help="command script (omit for an interactive session)")
    p.add_argument("-c", "--command", action="append", help="run a single command (repeatable)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--json", action="store_true", help="same as --format json")
    p.add_argument("--strict", action="store_true", help="exit 4 when a check reports 'fails'")
    p.add_argument("--keep-going", action="store_true", help="continue after a failing command")
    p.add_argument("--max-nodes", type=int, default=StoreConfig.max_nodes)
    p.add_argument("--max-powerset-base", type=int, default=StoreConfig.max_powerset_base)
    args = p.parse_args(argv)
    config = StoreConfig(max_nodes=args.max_nodes, max_powerset_base=args.max_powerset_base)
    session = Session(Store(config), json=args.json or args.format == "json", strict=args.strict)
    if args.command:
        lines = args.command
    elif args.script:
        try:
            with open(args.script, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
    elif sys.stdin.isatty():
        repl(session)
        return EXIT_OK
    else:
        lines = sys.stdin.read().splitlines()
    code, outputs, errors = batch(lines, session, keep_going=args.keep_going)
    for out in outputs:
        print(out)
    for err in errors:
        print(f"error: {err}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
