"""Reconcile predicted structure against brute force, per instance and in sweeps.

``verify_instance`` builds the full graph for one (q, a, c, b), decomposes
it, and checks everything the closed forms claim: signature and census for
a = +/-1, preimage-count tables per stratum, fixed points, and the partial
GF(q)-side facts for general a.  Every failed check carries a concrete
witness plus a command line that reproduces it.  ``sweep`` runs instances
over all primes up to a bound, optionally across worker processes, and
aggregates deterministically.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dynamics import MapParams, fixed_points, preimage_count_predicted
from .ffield import primes_up_to
from .graph import (
    ComponentShape,
    Decomposition,
    FunctionalGraph,
    build_graph,
    decompose,
)
from .theory import (
    PartialFacts,
    predict_a_minus1,
    predict_a_plus1,
    predict_partial_general,
)

REPORT_VERSION = 1


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: str | None = None

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


@dataclass
class VerificationReport:
    """Machine-readable reconciliation of one instance."""

    q: int
    a: int
    c: int
    b: int
    mode: str  # "exact" for a = +/-1, "partial" otherwise
    backend: str
    observed_signature: str
    predicted_signature: str | None
    signature_match: bool | str  # True/False, or "partial" for general a
    observed_census: dict[int, int]
    predicted_census: dict[int, int] | None
    component_count: int
    preimage_checks: dict[str, tuple[int, int]]  # stratum -> (passed, failed)
    fixed_point_check: bool
    invariants: list[CheckResult]
    erratum_notes: tuple[str, ...]
    timings: dict[str, float] = field(default_factory=dict)
    version: int = REPORT_VERSION

    @property
    def passed(self) -> bool:
        if self.signature_match is False:
            return False
        if not self.fixed_point_check:
            return False
        if any(fails for _, fails in self.preimage_checks.values()):
            return False
        return all(check.passed for check in self.invariants)

    def failed_checks(self) -> list[str]:
        # preimage failures already appear in invariants; no double counting
        names = []
        if not self.fixed_point_check:
            names.append("fixed_points")
        names.extend(check.name for check in self.invariants if not check.passed)
        return names

    def first_witness(self) -> str | None:
        for check in self.invariants:
            if not check.passed and check.witness:
                return check.witness
        return None

    def to_dict(self, include_timings: bool = False) -> dict:
        data = {
            "version": self.version,
            "q": self.q,
            "a": self.a,
            "c": self.c,
            "b": self.b,
            "mode": self.mode,
            "backend": self.backend,
            "passed": self.passed,
            "signature_match": self.signature_match,
            "observed_signature": self.observed_signature,
            "predicted_signature": self.predicted_signature,
            "observed_census": {str(k): v for k, v in self.observed_census.items()},
            "predicted_census": (
                None
                if self.predicted_census is None
                else {str(k): v for k, v in self.predicted_census.items()}
            ),
            "component_count": self.component_count,
            "preimage_checks": {
                k: {"passed": p, "failed": f}
                for k, (p, f) in self.preimage_checks.items()
            },
            "fixed_point_check": self.fixed_point_check,
            "invariants": [check.to_dict() for check in self.invariants],
            "erratum_notes": list(self.erratum_notes),
        }
        if include_timings:
            data["timings"] = self.timings
        return data

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2)

    def to_jsonl_lines(self, include_timings: bool = False) -> list[str]:
        """Line-delimited form: one meta record, then one record per check."""
        meta = {
            "record": "meta",
            "version": self.version,
            "q": self.q,
            "a": self.a,
            "c": self.c,
            "b": self.b,
            "mode": self.mode,
            "backend": self.backend,
            "passed": self.passed,
        }
        if include_timings:
            meta["timings"] = self.timings
        lines = [json.dumps(meta)]
        lines.append(
            json.dumps(
                {
                    "record": "signature",
                    "match": self.signature_match,
                    "observed": self.observed_signature,
                    "predicted": self.predicted_signature,
                }
            )
        )
        for stratum, (p, f) in self.preimage_checks.items():
            lines.append(
                json.dumps(
                    {
                        "record": "preimage_stratum",
                        "stratum": stratum,
                        "passed": p,
                        "failed": f,
                    }
                )
            )
        lines.append(
            json.dumps(
                {
                    "record": "check",
                    "name": "fixed_points",
                    "passed": self.fixed_point_check,
                    "witness": None,
                }
            )
        )
        for check in self.invariants:
            lines.append(json.dumps({"record": "check", **check.to_dict()}))
        for note in self.erratum_notes:
            lines.append(json.dumps({"record": "note", "text": note}))
        return lines


def _repro(q: int, a: int, c: int, b: int, sub: str = "verify", extra: str = "") -> str:
    cmd = f"quadgraph {sub} --q {q} --a {a} --c {c} --b {b}"
    return cmd + (f" {extra}" if extra else "")


def chi_table(q: int) -> np.ndarray:
    """chi2 of every residue as an int array (0 at 0, +/-1 elsewhere)."""
    table = np.full(q, -1, dtype=np.int64)
    squares = np.unique(np.arange(q, dtype=np.int64) ** 2 % q)
    table[squares] = 1
    table[0] = 0  # 0 is in the squares list, so reset it last
    return table


def predicted_preimage_table(params: MapParams) -> np.ndarray | None:
    """Predicted preimage count for every state, a = +/-1 only (else None)."""
    q, b, c = params.q, params.b, params.c_int
    chi = chi_table(q)
    u = np.arange(q, dtype=np.int64)
    table = np.empty((q, q), dtype=np.int64)
    if params.is_a_minus_one:
        on_base = np.where(chi[(-2 * c * u) % q] == -1, 2, 0)
        on_base[0] = q
        off_base = np.where(chi[(-2 * b * c * u) % q] == 1, 2, 0)
        table[:] = off_base[:, None]
        table[:, 0] = on_base
        return table.ravel()
    if params.is_a_plus_one:
        anywhere = np.where(chi[(2 * c * u) % q] == 1, 2, 0)
        table[:] = anywhere[:, None]
        table[0, :] = 0
        table[0, 0] = q
        return table.ravel()
    return None


def _check_preimages_exact(
    params: MapParams, graph: FunctionalGraph
) -> tuple[dict[str, tuple[int, int]], list[CheckResult]]:
    q = params.q
    observed = graph.in_degrees()
    predicted = predicted_preimage_table(params)
    mismatch = observed != predicted
    states = np.arange(q * q)
    strata = {
        "base_field": states % q == 0,
        "beta_line": (states // q == 0) & (states % q != 0),
        "generic": (states // q != 0) & (states % q != 0),
    }
    counts: dict[str, tuple[int, int]] = {}
    checks: list[CheckResult] = []
    for name, mask in strata.items():
        bad = int(np.count_nonzero(mismatch & mask))
        counts[name] = (int(np.count_nonzero(mask)) - bad, bad)
        if bad:
            state = int(states[mismatch & mask][0])
            x, y = divmod(state, q)
            checks.append(
                CheckResult(
                    f"preimage[{name}]",
                    False,
                    f"alpha=({x},{y}) predicted={int(predicted[state])} "
                    f"observed={int(observed[state])}; "
                    + _repro(q, params.a_int, params.c_int, params.b,
                             "preimage", f"--alpha {x},{y}"),
                )
            )
    return counts, checks


def _check_preimages_partial(
    params: MapParams, graph: FunctionalGraph
) -> tuple[dict[str, tuple[int, int]], list[CheckResult]]:
    q = params.q
    observed = graph.in_degrees()
    counts: dict[str, tuple[int, int]] = {}
    checks: list[CheckResult] = []
    strata = {
        "base_field": [(u, 0) for u in range(q)],
        "beta_line": [(0, v) for v in range(1, q)],
    }
    for name, alphas in strata.items():
        ok = bad = 0
        witness = None
        for x, y in alphas:
            pred = preimage_count_predicted(params.ext.element(x, y), params)
            obs = int(observed[x * q + y])
            if pred == obs:
                ok += 1
            else:
                bad += 1
                if witness is None:
                    witness = (
                        f"alpha=({x},{y}) predicted={pred} observed={obs}; "
                        + _repro(q, params.a_int, params.c_int, params.b,
                                 "preimage", f"--alpha {x},{y}")
                    )
        counts[name] = (ok, bad)
        if bad:
            checks.append(CheckResult(f"preimage[{name}]", False, witness))
    return counts, checks


def _check_common(
    params: MapParams, graph: FunctionalGraph, dec: Decomposition
) -> list[CheckResult]:
    q = params.q
    checks = []
    sizes_ok = (
        dec.signature.total_nodes() == q * q
        and int(dec.component_of.min()) >= 0
        and int(dec.component_sizes().sum()) == q * q
    )
    checks.append(
        CheckResult(
            "state_partition",
            sizes_ok,
            None if sizes_ok else f"component sizes do not cover {q * q} states",
        )
    )
    perm_ok = bool(
        np.array_equal(np.sort(graph.successor[dec.periodic]), dec.periodic)
    )
    checks.append(
        CheckResult(
            "periodic_permutation",
            perm_ok,
            None if perm_ok else "successor is not a bijection on periodic states",
        )
    )
    return checks


def _check_fixed_points(params: MapParams, graph: FunctionalGraph) -> bool:
    q = params.q
    observed = np.nonzero(graph.successor == np.arange(q * q))[0]
    expected = sorted(x * q + y for x, y in
                      (p.coords() for p in fixed_points(params)))
    return list(observed) == expected


def _check_general_structure(
    params: MapParams,
    graph: FunctionalGraph,
    dec: Decomposition,
    facts: PartialFacts,
) -> list[CheckResult]:
    q = params.q
    succ = graph.successor
    indeg = graph.in_degrees()
    checks = []

    zero_ok = int(dec.component_sizes()[dec.component_of_state(0)]) == 1
    checks.append(
        CheckResult(
            "zero_isolated",
            zero_ok,
            None if zero_ok else "state (0,0) has a non-trivial component; "
            + _repro(q, params.a_int, params.c_int, params.b),
        )
    )

    x = np.arange(q, dtype=np.int64)
    expected_fq = (params.c_int * (params.a_int + 1) % q) * (x * x % q) % q * q
    fq_ok = bool(np.array_equal(succ[x * q], expected_fq))
    checks.append(
        CheckResult(
            "base_field_restriction",
            fq_ok,
            None if fq_ok else "restriction to GF(q) is not x -> c(a+1)x^2",
        )
    )

    if facts.applicable:
        augmented = set(facts.augmented_alphas)
        aug_ok = True
        witness = None
        for alpha in range(1, q):
            sources = np.nonzero(succ == alpha * q)[0]
            beta_sources = sources[sources % q != 0]
            expected = 2 if alpha in augmented else 0
            if len(beta_sources) != expected or np.any(indeg[beta_sources] != 0):
                aug_ok = False
                witness = (
                    f"alpha=({alpha},0): {len(beta_sources)} outside preimages, "
                    f"expected {expected} childless; "
                    + _repro(q, params.a_int, params.c_int, params.b,
                             "preimage", f"--alpha {alpha},0")
                )
                break
        checks.append(CheckResult("beta_augmentation", aug_ok, witness))

        xstar_state = facts.center_state[0] * q
        center = dec.shape_of_state(xstar_state)
        expected_shape = ComponentShape(1, (facts.center_shape,))
        center_ok = center == expected_shape
        checks.append(
            CheckResult(
                "center_component",
                center_ok,
                None
                if center_ok
                else f"component of ({facts.center_state[0]},0) is {center.trees[0]}"
                f" not {facts.center_shape}; "
                + _repro(q, params.a_int, params.c_int, params.b),
            )
        )
    return checks


def verify_instance(
    q: int,
    a: int,
    c: int,
    b: int | None = None,
    *,
    max_q: int | None = None,
    backend: str | None = None,
) -> VerificationReport:
    """Build, decompose and reconcile one instance; complete even on failure."""
    params = MapParams.from_ints(q, a, c, b)
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    graph = build_graph(params, backend=backend, max_q=max_q)
    timings["build"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    dec = decompose(graph, backend=backend)
    timings["decompose"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    checks = _check_common(params, graph, dec)
    fixed_ok = _check_fixed_points(params, graph)
    observed_census = dec.signature.cycle_census()
    erratum_notes: tuple[str, ...] = ()

    if params.is_a_minus_one or params.is_a_plus_one:
        mode = "exact"
        predicted = (
            predict_a_minus1(q, params.c_int)
            if params.is_a_minus_one
            else predict_a_plus1(q, params.c_int)
        )
        erratum_notes = predicted.notes
        predicted_sig = predicted.signature()
        match: bool | str = predicted_sig == dec.signature
        predicted_census = predicted.cycle_census()
        checks.append(
            CheckResult(
                "signature_match",
                bool(match),
                None
                if match
                else "observed "
                + dec.signature.describe(q)
                + " != predicted "
                + predicted.describe()
                + "; "
                + _repro(q, params.a_int, params.c_int, params.b, "analyze"),
            )
        )
        census_ok = predicted_census == observed_census
        checks.append(
            CheckResult(
                "census_match",
                census_ok,
                None if census_ok else f"{observed_census} != {predicted_census}",
            )
        )
        node_ok = predicted.node_count() == q * q
        checks.append(CheckResult("node_count_identity", node_ok))
        if params.is_a_minus_one:
            odd = [n for n in observed_census if n > 1 and n % 2 == 1]
            checks.append(
                CheckResult(
                    "even_cycles",
                    not odd,
                    None if not odd else f"odd cycle lengths {odd}",
                )
            )
        preimage_counts, preimage_checks = _check_preimages_exact(params, graph)
        predicted_text = predicted.describe()
    else:
        mode = "partial"
        facts = predict_partial_general(q, params.a_int, params.c_int)
        match = "partial"
        predicted_census = None
        predicted_text = None
        checks.extend(_check_general_structure(params, graph, dec, facts))
        preimage_counts, preimage_checks = _check_preimages_partial(params, graph)

    checks.extend(preimage_checks)
    timings["checks"] = time.perf_counter() - t0

    return VerificationReport(
        q=q,
        a=params.a_int,
        c=params.c_int,
        b=params.b,
        mode=mode,
        backend=_kernels.get_backend(backend).BACKEND_NAME,
        observed_signature=dec.signature.describe(q),
        predicted_signature=predicted_text,
        signature_match=match,
        observed_census=observed_census,
        predicted_census=predicted_census,
        component_count=dec.signature.component_count(),
        preimage_checks=preimage_counts,
        fixed_point_check=fixed_ok,
        invariants=checks,
        erratum_notes=erratum_notes,
        timings=timings,
    )


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class SweepSummary:
    """Aggregate of verify_instance over a deterministic instance grid."""

    q_max: int
    a_mode: str
    c_mode: str
    total: int
    passed: int
    failed: int
    first_failure: dict | None
    rows: list[dict]
    version: int = REPORT_VERSION

    @property
    def all_passed(self) -> bool:
        return self.failed == 0

    def to_dict(self, include_rows: bool = True) -> dict:
        data = {
            "version": self.version,
            "q_max": self.q_max,
            "a_mode": self.a_mode,
            "c_mode": self.c_mode,
            "total": self.total,
            "passed": self.passed,
            "failed": self.failed,
            "first_failure": self.first_failure,
        }
        if include_rows:
            data["rows"] = self.rows
        return data

    def to_json(self, include_rows: bool = True) -> str:
        return json.dumps(self.to_dict(include_rows), indent=2)

    def to_jsonl_lines(self) -> list[str]:
        lines = [json.dumps({"record": "meta", **self.to_dict(include_rows=False)})]
        lines.extend(json.dumps({"record": "instance", **row}) for row in self.rows)
        return lines


def _instance_grid(
    q_max: int, a_selector: str | int, c_selector: str | int
) -> list[tuple[int, int, int]]:
    grid = []
    for q in primes_up_to(q_max):
        if q < 3:
            continue
        if isinstance(a_selector, int):
            a_values = [a_selector % q]
        elif a_selector == "both":
            a_values = [q - 1, 1]
        elif a_selector in ("-1", "minus"):
            a_values = [q - 1]
        elif a_selector in ("+1", "plus"):
            a_values = [1]
        elif a_selector == "general":
            a_values = [a for a in range(2, q - 1)]
        elif a_selector == "all":
            a_values = [a for a in range(1, q)]
        else:
            raise ValueError(f"unknown a selector {a_selector!r}")
        if isinstance(c_selector, int):
            c_values = [c_selector % q]
        elif c_selector == "all":
            c_values = list(range(1, q))
        elif c_selector == "one":
            c_values = [1]
        else:
            raise ValueError(f"unknown c selector {c_selector!r}")
        for a in a_values:
            if a % q == 0:
                continue
            for c in c_values:
                if c % q == 0:
                    continue
                grid.append((q, a, c))
    return grid


def _sweep_row(args: tuple[int, int, int, int | None, str | None]) -> dict:
    q, a, c, max_q, backend = args
    report = verify_instance(q, a, c, max_q=max_q, backend=backend)
    return {
        "q": q,
        "a": report.a,
        "c": report.c,
        "b": report.b,
        "passed": report.passed,
        "signature_match": report.signature_match,
        "failed_checks": report.failed_checks(),
        "witness": report.first_witness(),
    }


def sweep(
    q_max: int,
    a_selector: str | int = "both",
    c_selector: str | int = "all",
    *,
    workers: int = 0,
    max_q: int | None = None,
    backend: str | None = None,
) -> SweepSummary:
    """verify_instance over every prime q <= q_max and the selected (a, c).

    Instances run in a fixed order (q, then a, then c); with workers > 1 they
    are distributed across processes but aggregated in submission order, so
    the summary is identical either way.  Failures never abort the sweep.
    """
    grid = _instance_grid(q_max, a_selector, c_selector)
    args = [(q, a, c, max_q, backend) for q, a, c in grid]
    if workers > 1:
        chunk = max(1, len(args) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, args, chunksize=chunk))
    else:
        rows = [_sweep_row(arg) for arg in args]

    failed_rows = [row for row in rows if not row["passed"]]
    first_failure = None
    if failed_rows:
        row = failed_rows[0]
        first_failure = dict(row)
    return SweepSummary(
        q_max=q_max,
        a_mode=str(a_selector),
        c_mode=str(c_selector),
        total=len(rows),
        passed=len(rows) - len(failed_rows),
        failed=len(failed_rows),
        first_failure=first_failure,
        rows=rows,
    )
