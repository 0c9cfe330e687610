"""Exhaustive and sampled experiments over S_n.

Every row runs both exact solvers on the source, builds pi-dagger and asks
whether it has an exact swap schedule. Rows where that answer disagrees with
"bs(p) == rev(p)" are kept as counterexample bundles that replay on their
own; nothing is filtered out.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from stripsort.moves import (
    Schedule,
    StripSwap,
    apply_strip_swap,
    enumerate_block_moves,
    enumerate_strip_swaps,
    move_deltas,
)
from stripsort.perm import (
    Permutation,
    descent_count,
    lower_bound_rev,
    lower_bound_strips,
    parse_permutation,
    strip_count,
    strips,
)
from stripsort.reduction import (
    FIGURE,
    GadgetInstance,
    ProjectionError,
    block_schedule_cage_order,
    build_dagger,
    forward_schedule,
    project_schedule,
    verify_instance,
)
from stripsort.solvers import (
    BudgetExhausted,
    bs_exact,
    has_exact_swap_schedule,
    ssd_bfs_oracle,
    ssd_exact,
)

CSV_HEADER = (
    "perm", "rev", "strips", "bs", "ssd", "lb_rev", "lb_strips",
    "perfect_bs", "exact_ssd_dagger", "verdict", "nodes", "ms",
)
EXHAUSTIVE_MAX_N = 6
SAMPLED_MAX_N = 8
DEFAULT_ROW_TIMEOUT = 10.0

AGREE = "agree"
COUNTEREXAMPLE = "counterexample"
BUDGET = "budget"


@dataclass
class SweepRow:
    perm: str
    rev: int
    strips: int
    bs: Optional[int]
    ssd: Optional[int]
    lb_rev: int
    lb_strips: int
    perfect_bs: Optional[bool]
    exact_ssd_dagger: Optional[bool]
    verdict: str
    nodes: int
    ms: int
    forward_ok: Optional[bool] = None
    projection_ok: Optional[bool] = None
    bundle: Optional[dict] = field(default=None, repr=False)

    def csv_cells(self) -> list[str]:
        return [_cell(getattr(self, name)) for name in CSV_HEADER]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


@dataclass
class SweepReport:
    n: int
    mode: str
    seed: Optional[int]
    layout: str
    rows: list[SweepRow]
    deterministic: bool = True
    elapsed_ms: int = 0

    @property
    def counterexamples(self) -> list[SweepRow]:
        return [r for r in self.rows if r.verdict == COUNTEREXAMPLE]

    def summary(self) -> dict:
        rows = self.rows
        tally = {AGREE: 0, COUNTEREXAMPLE: 0, BUDGET: 0}
        for r in rows:
            tally[r.verdict] += 1
        decided = tally[AGREE] + tally[COUNTEREXAMPLE]
        out = {
            "n": self.n,
            "mode": self.mode,
            "seed": self.seed,
            "layout": self.layout,
            "rows": len(rows),
            "verdicts": tally,
            "agreement": (tally[AGREE] / decided) if decided else 1.0,
            "perfect_bs": sum(1 for r in rows if r.perfect_bs),
            "exact_ssd_dagger": sum(1 for r in rows if r.exact_ssd_dagger),
            "forward_lemma": {
                "checked": sum(1 for r in rows if r.forward_ok is not None),
                "failed": sum(1 for r in rows if r.forward_ok is False),
            },
            "projection_lemma": {
                "checked": sum(1 for r in rows if r.projection_ok is not None),
                "failed": sum(1 for r in rows if r.projection_ok is False),
            },
            "counterexamples": [r.perm for r in self.counterexamples],
        }
        if not self.deterministic:
            out["elapsed_ms"] = self.elapsed_ms
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow(r.csv_cells())
        return buf.getvalue()

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"

    def write(self, out_dir: str | Path) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = [out / "sweep.csv", out / "summary.json"]
        written[0].write_text(self.to_csv())
        written[1].write_text(self.summary_json())
        for r in self.rows:
            if r.bundle is not None:
                path = out / f"counterexample_{r.perm.replace(' ', '-')}.json"
                path.write_text(json.dumps(r.bundle, indent=2, sort_keys=True) + "\n")
                written.append(path)
        return written


# -- rows ------------------------------------------------------------------------

def _make_bundle(p: Permutation, inst: GadgetInstance, block_witness, dagger_witness,
                 perfect: bool, exact: bool, projection_error: str | None) -> dict:
    return {
        "source": list(p.elements),
        "R": inst.R,
        "perfect_bs": perfect,
        "exact_ssd_dagger": exact,
        "instance": inst.to_json(),
        "block_witness": block_witness.to_json() if block_witness is not None else None,
        "dagger_witness": dagger_witness.to_json() if dagger_witness is not None else None,
        "projection_error": projection_error,
    }


def evaluate(p: Permutation, *, timeout: float | None = DEFAULT_ROW_TIMEOUT,
             layout: str = FIGURE, deterministic: bool = True) -> SweepRow:
    t0 = time.perf_counter()
    r = descent_count(p.elements)
    nodes = 0
    bs = ssd = None
    block_witness = None
    exact = None
    dagger_witness = None
    budget_hit = False
    try:
        res = bs_exact(p, timeout=timeout)
        bs, block_witness, nodes = res.distance, res.witness, nodes + res.nodes_expanded
        res = ssd_exact(p, timeout=timeout)
        ssd, nodes = res.distance, nodes + res.nodes_expanded
    except BudgetExhausted as exc:
        budget_hit = True
        nodes += exc.nodes

    inst = build_dagger(p, layout)
    if not budget_hit:
        try:
            v = has_exact_swap_schedule(inst.pi_dagger, timeout=timeout)
            exact, dagger_witness, nodes = v.holds, v.witness, nodes + v.nodes
        except BudgetExhausted as exc:
            budget_hit = True
            nodes += exc.nodes

    perfect = None if bs is None else bs == r
    forward_ok = projection_ok = None
    projection_error = None
    if perfect:
        sched = forward_schedule(inst, block_schedule_cage_order(inst, block_witness))
        forward_ok = len(sched) == r and sched.replay().is_identity()
    if exact:
        try:
            proj = project_schedule(inst, dagger_witness)
            projection_ok = len(proj) == r and proj.replay().is_identity()
        except ProjectionError as exc:
            projection_ok = False
            projection_error = str(exc)

    if budget_hit:
        verdict = BUDGET
    elif perfect == exact:
        verdict = AGREE
    else:
        verdict = COUNTEREXAMPLE
    bundle = None
    if verdict == COUNTEREXAMPLE:
        bundle = _make_bundle(p, inst, block_witness if perfect else None, dagger_witness,
                              perfect, exact, projection_error)
    ms = 0 if deterministic else int(round((time.perf_counter() - t0) * 1000))
    return SweepRow(
        perm=p.to_text(), rev=r, strips=strip_count(p.elements), bs=bs, ssd=ssd,
        lb_rev=lower_bound_rev(p), lb_strips=lower_bound_strips(p),
        perfect_bs=perfect, exact_ssd_dagger=exact, verdict=verdict, nodes=nodes, ms=ms,
        forward_ok=forward_ok, projection_ok=projection_ok, bundle=bundle,
    )


def _evaluate_args(args) -> SweepRow:
    perm, timeout, layout, deterministic = args
    return evaluate(Permutation(perm), timeout=timeout, layout=layout, deterministic=deterministic)


def enumerate_perms(n: int, sample: int | None = None, seed: int | None = None) -> list[tuple]:
    """All of S_n in lexicographic order, or ``sample`` distinct seeded draws."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if sample is None:
        if n > EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive sweeps stop at n={EXHAUSTIVE_MAX_N}; pass a sample size")
        return list(itertools.permutations(range(1, n + 1)))
    if n > SAMPLED_MAX_N:
        raise ValueError(f"sampled sweeps stop at n={SAMPLED_MAX_N}")
    if not 0 <= sample <= math.factorial(n):
        raise ValueError(f"sample size must be within 0..{math.factorial(n)}")
    rng = random.Random(seed)
    base = list(range(1, n + 1))
    seen: set[tuple] = set()
    out = []
    while len(out) < sample:
        rng.shuffle(base)
        t = tuple(base)
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def sweep_equivalence(
    n: int,
    sample: int | None = None,
    seed: int | None = None,
    *,
    timeout: float | None = DEFAULT_ROW_TIMEOUT,
    layout: str = FIGURE,
    deterministic: bool = True,
    workers: int = 1,
) -> SweepReport:
    if sample is not None and seed is None:
        seed = 0
    perms = enumerate_perms(n, sample, seed)
    t0 = time.perf_counter()
    args = [(s, timeout, layout, deterministic) for s in perms]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_args, args, chunksize=16))
    else:
        rows = [_evaluate_args(a) for a in args]
    return SweepReport(
        n=n,
        mode="exhaustive" if sample is None else "sampled",
        seed=seed,
        layout=layout,
        rows=rows,
        deterministic=deterministic,
        elapsed_ms=int(round((time.perf_counter() - t0) * 1000)),
    )


# -- counterexample bundles ---------------------------------------------------------

def replay_bundle(bundle: dict | str | Path, *, timeout: float | None = None) -> dict:
    """Re-run both predicates on a saved counterexample and compare with the record."""
    if isinstance(bundle, (str, Path)):
        bundle = json.loads(Path(bundle).read_text())
    p = Permutation.of(bundle["source"])
    inst = GadgetInstance.from_json(bundle["instance"])
    rebuilt = build_dagger(p, inst.layout)
    res = bs_exact(p, timeout=timeout)
    perfect = res.distance == descent_count(p.elements)
    exact = has_exact_swap_schedule(inst.pi_dagger, timeout=timeout).holds
    witness_ok = None
    if bundle.get("dagger_witness"):
        w = Schedule.from_json(bundle["dagger_witness"])
        witness_ok = w.start == inst.pi_dagger and w.replay().is_identity() and len(w) == inst.R
    return {
        "source": list(p.elements),
        "instance_matches_rebuild": rebuilt.pi_dagger == inst.pi_dagger,
        "perfect_bs": perfect,
        "exact_ssd_dagger": exact,
        "reproduced": perfect == bundle["perfect_bs"] and exact == bundle["exact_ssd_dagger"]
        and perfect != exact,
        "dagger_witness_replays": witness_ok,
    }


# -- bound checks ---------------------------------------------------------------------

def check_bounds_exhaustive(n: int) -> dict:
    """Lower bounds and per-move change bounds over all of S_n."""
    if not 1 <= n <= EXHAUSTIVE_MAX_N:
        raise ValueError(f"n must be within 1..{EXHAUSTIVE_MAX_N}")
    violations = []
    moves_checked = 0
    rows = 0
    for s in itertools.permutations(range(1, n + 1)):
        rows += 1
        p = Permutation(s)
        r = descent_count(s)
        ssd = ssd_exact(p).distance
        bs = bs_exact(p).distance
        if ssd < lower_bound_rev(p):
            violations.append({"perm": p.to_text(), "check": "ssd >= ceil(rev/2)"})
        if ssd < lower_bound_strips(p):
            violations.append({"perm": p.to_text(), "check": "ssd >= ceil((strips-1)/4)"})
        if bs < r:
            violations.append({"perm": p.to_text(), "check": "bs >= rev"})
        for m in enumerate_strip_swaps(p):
            moves_checked += 1
            d_rev, d_strips = move_deltas(p, m)
            if d_rev < -2:
                violations.append({"perm": p.to_text(), "check": "swap drev >= -2", "move": m.to_json()})
            if d_strips < -4:
                violations.append({"perm": p.to_text(), "check": "swap dstrips >= -4", "move": m.to_json()})
        for m in enumerate_block_moves(p):
            moves_checked += 1
            d_rev, _ = move_deltas(p, m)
            if d_rev < -1:
                violations.append({"perm": p.to_text(), "check": "block drev >= -1", "move": m.to_json()})
    return {"n": n, "rows": rows, "moves_checked": moves_checked, "violations": violations}


# -- worked examples -------------------------------------------------------------------

SWAP_EXAMPLE = "2 5 6 3 7 8 9 4 1"
# the three swaps as (first value of left strip, first value of right strip)
SWAP_EXAMPLE_MOVES = ((5, 3), (5, 4), (2, 1))
YES_INSTANCE = "4 1 3 2"
NO_INSTANCE = "7 2 6 5 8 3 1 4"


def swap_example_schedule() -> Schedule:
    p = parse_permutation(SWAP_EXAMPLE)
    moves = []
    cur = p
    for a, b in SWAP_EXAMPLE_MOVES:
        firsts = [s.first for s in strips(cur)]
        i, j = sorted((firsts.index(a), firsts.index(b)))
        m = StripSwap(i, j, (firsts[i], firsts[j]))
        moves.append(m)
        cur = apply_strip_swap(cur, m)
    return Schedule(p, "swap", tuple(moves))


def reproduce_worked_examples(*, timeout: float | None = 300.0, layout: str = FIGURE) -> dict:
    report: dict = {}

    sched = swap_example_schedule()
    states = sched.trace()
    oracle = ssd_bfs_oracle(sched.start)
    ida = ssd_exact(sched.start)
    report["swap_example"] = {
        "start": sched.start.to_text(),
        "schedule": sched.to_json(),
        "strip_counts": [strip_count(s.elements) for s in states],
        "reaches_identity": states[-1].is_identity(),
        "moves": len(sched),
        "ssd_bfs": oracle.distance,
        "ssd_ida": ida.distance,
        "fewer_than_three_possible": oracle.distance < 3,
        "pass": states[-1].is_identity() and oracle.distance == ida.distance,
    }

    p = parse_permutation(YES_INSTANCE)
    inst = build_dagger(p, layout)
    v = has_exact_swap_schedule(inst.pi_dagger, timeout=timeout)
    yes: dict = {
        "source": p.to_text(),
        "R": inst.R,
        "pi_dagger": inst.pi_dagger.to_text(),
        "instance_ok": verify_instance(inst).ok,
        "exact_swap_schedule": v.holds,
    }
    ok = bool(v.holds) and yes["instance_ok"] and inst.R == 2
    if v.holds:
        yes["dagger_witness"] = v.witness.to_json()
        trace = v.witness.trace()
        yes["swap_deltas"] = [
            descent_count(b.elements) - descent_count(a.elements) for a, b in zip(trace, trace[1:])
        ]
        try:
            proj = project_schedule(inst, v.witness)
            ptrace = proj.trace()
            yes["projected"] = proj.to_json()
            yes["projected_deltas"] = [
                descent_count(b.elements) - descent_count(a.elements) for a, b in zip(ptrace, ptrace[1:])
            ]
            ok = ok and len(proj) == 2 and ptrace[-1].is_identity() and all(
                d == -1 for d in yes["projected_deltas"]
            )
        except ProjectionError as exc:
            yes["projection_error"] = str(exc)
            ok = False
    yes["pass"] = ok
    report["yes_instance"] = yes

    p = parse_permutation(NO_INSTANCE)
    inst = build_dagger(p, layout)
    no: dict = {
        "source": p.to_text(),
        "R": inst.R,
        "pi_dagger": inst.pi_dagger.to_text(),
        "instance_ok": verify_instance(inst).ok,
        "budget": inst.R,
    }
    try:
        v = has_exact_swap_schedule(inst.pi_dagger, timeout=timeout)
        no["exact_swap_schedule"] = v.holds
        no["nodes"] = v.nodes
        no["claim_needs_at_least_5"] = not v.holds
        no["verdict"] = "confirms >=5" if not v.holds else "counterexample found"
        if v.holds:
            no["counterexample"] = {
                "dagger_witness": v.witness.to_json(),
                "instance": inst.to_json(),
            }
    except BudgetExhausted as exc:
        no["verdict"] = "undecided"
        no["error"] = str(exc)
    bs = bs_exact(p, timeout=timeout)
    no["bs_source"] = bs.distance
    no["source_has_perfect_block_schedule"] = bs.distance == inst.R
    no["block_witness"] = bs.witness.to_json()
    no["pass"] = no["verdict"] != "undecided"
    report["no_instance"] = no
    return report
