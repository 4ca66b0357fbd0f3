"""Rewrite traces: the ordered axiom applications behind a normalisation, and
an independent replayer that re-applies them to the starting term."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from opg.expr import Expr, Mu, parse_expr, print_expr, substitute

ELIMINATION_RULES = frozenset(["E", "LOOP-SOLVE", "F2"])

RULES = frozenset(
    [f"A{i}" for i in range(1, 4)] + [f"B{i}" for i in range(1, 24)]
    + [f"C{i}" for i in range(1, 5)] + [f"D{i}" for i in range(1, 5)]
    + ["E", "F1", "F2", "SUBST", "LOOP-SOLVE"])


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    redex: Expr
    contractum: Expr
    path: tuple[int, ...] = ()
    # equation rewritten, for steps over an equation system
    target: str | None = None
    # variable substituted by a SUBST step
    var: str | None = None

    def to_json(self) -> dict:
        d = {
            "rule": self.rule,
            "redex": print_expr(self.redex),
            "contractum": print_expr(self.contractum),
            "path": ".".join(map(str, self.path)),
        }
        if self.target is not None:
            d["target"] = self.target
        if self.var is not None:
            d["var"] = self.var
        return d

    @classmethod
    def from_json(cls, d) -> "RewriteStep":
        path = tuple(int(i) for i in d["path"].split(".")) if d.get("path") else ()
        return cls(d["rule"], parse_expr(d["redex"]), parse_expr(d["contractum"]), path,
                   d.get("target"), d.get("var"))


@dataclass
class RewriteTrace:
    steps: list[RewriteStep] = field(default_factory=list)

    def append(self, step: RewriteStep):
        if step.rule not in RULES:
            raise ValueError(f"unknown rule label {step.rule!r}")
        self.steps.append(step)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def rules(self) -> list[str]:
        return [s.rule for s in self.steps]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(s.to_json(), sort_keys=True) + "\n" for s in self.steps)

    @classmethod
    def from_jsonl(cls, text: str) -> "RewriteTrace":
        tr = cls()
        for line in text.splitlines():
            if line.strip():
                d = json.loads(line)
                if "rule" in d:
                    tr.append(RewriteStep.from_json(d))
        return tr


@dataclass
class ReplayResult:
    ok: bool
    final: Expr | None
    message: str = ""


def replay(initial: Expr, trace: RewriteTrace, expected: Expr | None) -> ReplayResult:
    """Walk ``initial`` bottom-up, left to right.  Whenever the rebuilt node is
    the redex of the next pending step (at the recorded path) it is replaced by
    that step's contractum; a node equal to an earlier redex is replaced the
    same way.  Succeeds iff every step fires in order and the walk ends at
    ``expected`` (not checked when ``expected`` is None)."""
    steps = trace.steps
    state = {"i": 0, "error": None}
    applied: dict = {}
    memo: dict = {}

    def go(u: Expr, path: tuple):
        if u in memo:
            return memo[u]
        kids = u.children()
        if kids:
            new = u.with_children([go(c, path + (j,)) for j, c in enumerate(kids)])
        else:
            new = u
        if new in applied:
            out = applied[new]
        elif state["i"] < len(steps) and steps[state["i"]].redex == new:
            st = steps[state["i"]]
            if st.path != path and state["error"] is None:
                state["error"] = f"step {state['i']} ({st.rule}) fired at {path}, recorded {st.path}"
            if isinstance(new, Mu) and new.var in st.contractum.free_vars:
                state["error"] = state["error"] or f"step {state['i']} leaves {new.var} free"
            applied[new] = st.contractum
            out = st.contractum
            state["i"] += 1
        else:
            out = new
        memo[u] = out
        return out

    final = go(initial, ())
    if state["error"]:
        return ReplayResult(False, final, state["error"])
    if state["i"] != len(steps):
        st = steps[state["i"]]
        return ReplayResult(False, final,
                            f"step {state['i']} ({st.rule}) never matched: {print_expr(st.redex)}")
    if expected is not None and final != expected:
        return ReplayResult(False, final, "replay ended at a different term")
    return ReplayResult(True, final)


def replay_system(initial: dict[str, Expr], trace: RewriteTrace,
                  expected: dict[str, Expr]) -> ReplayResult:
    """Replay a trace over an equation system ``{y: term}``.

    Runs of local steps for one equation are replayed on that equation's
    current term as in :func:`replay`; an elimination step must have the
    redex ``mu y . <current term of y>``; a ``SUBST`` step must have the
    redex obtained by substituting the current term of ``var`` into the
    current term of ``target``.  Every equation named in ``expected`` must
    end at the given term.
    """
    state = dict(initial)
    steps = trace.steps
    i = 0
    while i < len(steps):
        st = steps[i]
        y = st.target
        if y not in state:
            return ReplayResult(False, None, f"step {i} names unknown equation {y!r}")
        if st.rule in ELIMINATION_RULES and isinstance(st.redex, Mu) and st.redex.var == y \
                and st.path == ():
            if st.redex.body != state[y]:
                return ReplayResult(False, None, f"step {i}: {y} is not in the recorded state")
            if y in st.contractum.free_vars:
                return ReplayResult(False, None, f"step {i} leaves {y} free")
            state[y] = st.contractum
            i += 1
        elif st.rule == "SUBST":
            if st.var not in state:
                return ReplayResult(False, None, f"step {i} substitutes unknown {st.var!r}")
            if substitute(state[y], st.var, state[st.var]) != st.redex:
                return ReplayResult(False, None, f"step {i}: substitution redex does not match")
            state[y] = st.contractum
            i += 1
        else:
            j = i
            while (j < len(steps) and steps[j].target == y and steps[j].rule != "SUBST"
                   and not (steps[j].rule in ELIMINATION_RULES and steps[j].path == ()
                            and isinstance(steps[j].redex, Mu) and steps[j].redex.var == y)):
                j += 1
            sub = RewriteTrace(steps[i:j])
            res = replay(state[y], sub, None)
            if not res.ok:
                return ReplayResult(False, None, f"equation {y}: {res.message}")
            state[y] = res.final
            i = j
    for y, term in expected.items():
        if state.get(y) != term:
            return ReplayResult(False, state.get(y), f"equation {y} ended at a different term")
    return ReplayResult(True, None)
