"""Seeded experiment drivers: figure data, the bound sweep, and solver runs.

Everything here is deterministic given (master seed, trial index); the
command-line layer only parses flags and serializes what these functions
return.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import metadata
from typing import Any, Callable

import numpy as np

from .amplitudes import Amplitude, dft, make_amplitude, min_abs_dft
from .circulant import (
    EIGENVALUE_ZERO_RTOL,
    build_shift_columns,
    circulant_eigenvalues,
    gso,
    gso_last_norm_bound,
)
from .errors import BadParameter, EmptySolutionSet, InsufficientSamples, Timeout
from .seeding import child_seeds, stream
from .solvers import (
    SisInstance,
    StateOracle,
    arora_ge,
    clwe_simulate,
    edcp_sample_set,
    edcp_solve,
    friedl_constant_q,
    friedl_measurements,
    monomial_count,
    sis_solve_composite,
    sis_state_sample,
    slwe_solve_ag,
    slwe_solve_ge,
    verify_sis,
)
from .zq import Modulus, ZqMatrix, is_prime

try:
    PACKAGE_VERSION = metadata.version("latticefilter")
except metadata.PackageNotFoundError:  # running from a bare checkout
    PACKAGE_VERSION = "unknown"

FIGURE2_Q = 31
FIGURE2_WIDTH = 3
FIGURE2_HEADER = ("family", "i", "abs_f", "abs_fhat", "gso_norm")

BOUNDS_QS = (5, 7, 11, 13, 17, 19, 23, 29, 31)
BOUNDS_WIDTHS = (1, 2, 3)
BOUNDS_HEADER = (
    "q",
    "family",
    "width",
    "eigen_min",
    "bound_case",
    "bound_value",
    "actual_last_gso_norm",
    "bound_satisfied",
)
# Slack for comparing a computed GSO norm against its analytic lower bound;
# covers accumulated orthogonalization roundoff, nothing more.
BOUND_SLACK = 1e-9

CLWE_FIDELITY_TARGET = 0.99
CLWE_SIGMA_TARGET = 0.01
CLWE_INNER_TRIALS = 200

SOLVE_PROBLEMS = (
    "slwe-ge",
    "slwe-ag",
    "clwe",
    "sis-quantum",
    "sis-composite",
    "edcp",
    "friedl",
    "arora-ge",
)


def format_float(x: float) -> str:
    """17 significant digits, C locale; round-trips IEEE doubles exactly."""
    return "%.17g" % float(x)


def _json_default(obj: Any):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _format_cell(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format_float(x)
    return str(x)


def render_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_format_cell(x) for x in row) for row in rows)
    return "\n".join(lines) + "\n"


def figure2_families(q: int = FIGURE2_Q, width: int = FIGURE2_WIDTH) -> list[Amplitude]:
    """The four panel columns, in display order."""
    uniform = make_amplitude("bounded_uniform", q, B=width)
    return [
        make_amplitude("gaussian", q, s=width),
        make_amplitude("laplace", q, s=width),
        uniform,
        make_amplitude("dft_of", q, base=uniform),
    ]


def figure2_rows(q: int = FIGURE2_Q, width: int = FIGURE2_WIDTH):
    """Per-index magnitudes and Gram-Schmidt norms for the four families.

    Returns (header, rows) with one row per (family, i), i = 0..q-1. The
    GSO norms are those of the full shift-column set, so rank-deficient
    families show collapsed norms past their effective rank.
    """
    rows = []
    for f in figure2_families(q, width):
        fhat = dft(f)
        norms = gso(build_shift_columns(f, 0, q)).norms
        for i in range(q):
            rows.append(
                (f.family_tag, i, abs(f.table[i]), abs(fhat.table[i]), float(norms[i]))
            )
    return list(FIGURE2_HEADER), rows


def bound_sweep_entry(f: Amplitude) -> dict[str, Any]:
    """Classify one family by its spectrum and check the matching bound.

    Case 1 (all eigenvalues nonzero) bounds the last GSO norm of the full
    shift set; case 2 bounds the k-th norm of the first k shifts, k the
    number of nonzero eigenvalues. Classification uses the eigenvalue
    magnitudes, not the GSO output, so near-floor families stay in the
    full-rank case their spectrum dictates.
    """
    q = f.q
    lam = circulant_eigenvalues(f)
    mags = np.abs(lam)
    zero_tol = EIGENVALUE_ZERO_RTOL * float(mags.max())
    nonzero = mags > zero_tol
    k = int(nonzero.sum())
    if k == 0:
        raise BadParameter("all eigenvalues vanish; not a valid amplitude")
    ordered = np.concatenate([lam[nonzero], lam[~nonzero]])
    bound = gso_last_norm_bound(ordered, k, q)
    actual = float(gso(build_shift_columns(f, 0, k)).norms[k - 1])
    return {
        "family": f.family_tag,
        "eigen_min": float(mags[nonzero].min()),
        "bound_case": 1 if k == q else 2,
        "bound_value": bound,
        "actual_last_gso_norm": actual,
        "bound_satisfied": bool(actual >= bound * (1.0 - BOUND_SLACK)),
        "effective_rank": k,
    }


def bounds_rows(qs=BOUNDS_QS, widths=BOUNDS_WIDTHS, include_delta: bool = True):
    """Sweep (q, family, width) and verify the Gram-Schmidt lower bounds."""
    rows = []
    for q in qs:
        for width in widths:
            families = [
                make_amplitude("gaussian", q, s=width),
                make_amplitude("laplace", q, s=width),
            ]
            if 2 * width + 1 <= q:
                uniform = make_amplitude("bounded_uniform", q, B=width)
                families.append(uniform)
                families.append(make_amplitude("dft_of", q, base=uniform))
            for f in families:
                entry = bound_sweep_entry(f)
                rows.append(
                    (
                        q,
                        entry["family"],
                        width,
                        entry["eigen_min"],
                        entry["bound_case"],
                        entry["bound_value"],
                        entry["actual_last_gso_norm"],
                        entry["bound_satisfied"],
                    )
                )
        if include_delta:
            entry = bound_sweep_entry(make_amplitude("delta", q, v=0))
            rows.append(
                (
                    q,
                    entry["family"],
                    0,
                    entry["eigen_min"],
                    entry["bound_case"],
                    entry["bound_value"],
                    entry["actual_last_gso_norm"],
                    entry["bound_satisfied"],
                )
            )
    return list(BOUNDS_HEADER), rows


def prime_factors(q: int) -> list[int]:
    """Prime factorization with multiplicity, smallest first."""
    if q < 2:
        raise BadParameter(f"cannot factor {q}")
    out, rem, p = [], q, 2
    while p * p <= rem:
        while rem % p == 0:
            out.append(p)
            rem //= p
        p += 1 if p == 2 else 2
    if rem > 1:
        out.append(rem)
    return out


def ag_draw_cap(n: int, q: int, B: int, c: int | None = None) -> int:
    """Paper-shaped sample cap for the tail path: (2B+1)^3 * n^c * q * ln q."""
    k = 2 * B + 1
    if c is None:
        c = q - k
    return math.ceil(k**3 * max(n, 2) ** c * q * math.log(q))


def ge_draw_cap(n: int, q: int, f: Amplitude) -> int:
    """Equality-path cap: 40 n q / eta^2 draws, eta the smallest |f_hat|."""
    eta = min_abs_dft(f).value
    # exact DFT zeros arrive as ~1e-17 dust; judge them relative to the peak
    if eta <= EIGENVALUE_ZERO_RTOL * float(np.abs(dft(f).table).max()):
        raise BadParameter("amplitude has a vanishing DFT entry; equality path undefined")
    return math.ceil(40 * n * q / eta**2)


# ---------------------------------------------------------------------------
# Per-problem config validation


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise BadParameter(message)


def _require_prime(q: int, problem: str) -> None:
    _require(
        is_prime(q),
        f"{problem} needs a prime modulus, got q={q}; "
        "use sis-composite for composite q",
    )


def validate_solve_config(problem: str, **kw: Any) -> dict[str, Any]:
    """Normalize and check one solve configuration.

    Returns a dict with every parameter the matching driver reads,
    defaults filled in. Raises BadParameter with an actionable message
    on any inconsistency; the CLI maps that to exit code 2.
    """
    if problem not in SOLVE_PROBLEMS:
        raise BadParameter(
            f"unknown problem {problem!r}; choose one of {', '.join(SOLVE_PROBLEMS)}"
        )
    cfg: dict[str, Any] = {"problem": problem}
    n = kw.get("n")
    m = kw.get("m")
    q = kw.get("q")
    B = kw.get("B")
    c = kw.get("c")
    width = kw.get("width")

    if problem == "slwe-ge":
        cfg.update(n=n or 4, q=q or 11, B=2 if B is None else B)
        _require_prime(cfg["q"], problem)
        _require(cfg["B"] >= 0, f"B must be >= 0, got {cfg['B']}")
        k = 2 * cfg["B"] + 1
        g = math.gcd(k, cfg["q"])
        if g > 1:
            raise BadParameter(
                f"ge mode needs gcd(2B+1, q) = 1, got gcd({k}, {cfg['q']}) = {g}: "
                "the error amplitude's DFT then vanishes on a subgroup, the "
                "equality filter loses full rank, and the method does not extend"
            )
        f = make_amplitude("bounded_uniform", cfg["q"], B=cfg["B"])
        cfg["m"] = m or ge_draw_cap(cfg["n"], cfg["q"], f)
    elif problem == "slwe-ag":
        cfg.update(n=n or 2, q=q or 7, B=2 if B is None else B)
        _require_prime(cfg["q"], problem)
        k = 2 * cfg["B"] + 1
        _require(1 <= cfg["B"] and k <= cfg["q"], f"need 1 <= 2B+1 <= q, got B={cfg['B']}, q={cfg['q']}")
        cfg["c"] = c if c is not None else cfg["q"] - k
        cfg["m"] = m or ag_draw_cap(cfg["n"], cfg["q"], cfg["B"], cfg["c"])
    elif problem == "clwe":
        cfg.update(n=n or 2, q=q or 5, B=1 if B is None else B, m=m or 400)
        _require_prime(cfg["q"], problem)
        _require(2 * cfg["B"] + 1 < cfg["q"], "clwe ge mode needs 2B+1 < q")
        cfg["inner_trials"] = kw.get("inner_trials") or CLWE_INNER_TRIALS
    elif problem == "sis-quantum":
        cfg.update(n=n or 2, q=q or 5, B=2 if B is None else B, m=m or 8)
        _require_prime(cfg["q"], problem)
        _require(1 <= cfg["B"] < cfg["q"] / 2, f"need 1 <= B < q/2, got B={cfg['B']}, q={cfg['q']}")
        cfg["method"] = kw.get("method") or "enumeration"
    elif problem == "sis-composite":
        cfg.update(n=n or 3, q=q or 4)
        factors = prime_factors(cfg["q"])
        _require(
            len(factors) >= 2,
            f"sis-composite needs a composite modulus, got q={cfg['q']}; "
            "use sis-quantum for prime q",
        )
        cfg["factors"] = factors
        cfg["m"] = cfg["n"] ** len(factors)
    elif problem == "edcp":
        cfg.update(n=n or 3, q=q or 7, width=width or 5, m=m or 400)
        _require_prime(cfg["q"], problem)
        _require(
            1 <= cfg["width"] <= cfg["q"],
            f"distribution width must lie in [1, q], got {cfg['width']}",
        )
    elif problem == "friedl":
        cfg.update(n=n or 3, q=q or 3, width=width or 2, m=m or 2000)
        _require_prime(cfg["q"], problem)
        _require(
            1 < cfg["width"] < cfg["q"],
            f"friedl needs 1 < p < q, got p={cfg['width']}, q={cfg['q']}",
        )
    elif problem == "arora-ge":
        cfg.update(n=n or 2, q=q or 5, B=1 if B is None else B)
        _require_prime(cfg["q"], problem)
        _require(
            0 <= cfg["B"] and 2 * cfg["B"] + 1 < cfg["q"],
            f"need 2B+1 < q, got B={cfg['B']}, q={cfg['q']}",
        )
        cfg["m"] = m or 2 * monomial_count(cfg["n"], 2 * cfg["B"] + 1)
    for key in ("n", "m", "q"):
        if key in cfg:
            _require(cfg[key] >= 1, f"{key} must be positive, got {cfg[key]}")
    return cfg


# ---------------------------------------------------------------------------
# Drivers. Each returns (m_used, constraints_collected, success, verified,
# details); success is the solver's claim, verified re-checks it against the
# planted instance.


def _plant_secret(q: int, n: int, master_seed: int, trial: int) -> np.ndarray:
    return stream(master_seed, trial, "secret").integers(0, q, size=n, dtype=np.int64)


def _drive_slwe_ge(cfg, master_seed, trial):
    n, q, B = cfg["n"], cfg["q"], cfg["B"]
    f = make_amplitude("bounded_uniform", q, B=B)
    u = _plant_secret(q, n, master_seed, trial)
    oracle = StateOracle(f, u, stream(master_seed, trial, "oracle"))
    res = slwe_solve_ge(oracle, n, q, f, cfg["m"], rng=stream(master_seed, trial, "solver"))
    verified = bool(res.success and np.array_equal(res.secret.data, u))
    return res.m_used, res.constraints_collected, res.success, verified, {}


def _drive_slwe_ag(cfg, master_seed, trial):
    n, q, B = cfg["n"], cfg["q"], cfg["B"]
    # the tail-path instance carries the transformed amplitude, not f itself
    g = make_amplitude("dft_of", q, base=make_amplitude("bounded_uniform", q, B=B))
    u = _plant_secret(q, n, master_seed, trial)
    oracle = StateOracle(g, u, stream(master_seed, trial, "oracle"))
    res = slwe_solve_ag(oracle, n, q, B, cfg["m"], rng=stream(master_seed, trial, "solver"))
    verified = bool(res.success and np.array_equal(res.secret.data, u))
    return res.m_used, res.constraints_collected, res.success, verified, {}


def _drive_arora_ge(cfg, master_seed, trial):
    n, q, B, m = cfg["n"], cfg["q"], cfg["B"], cfg["m"]
    rng = stream(master_seed, trial, "instance")
    u = _plant_secret(q, n, master_seed, trial)
    A = rng.integers(0, q, size=(m, n), dtype=np.int64)
    errs = rng.integers(-B, B + 1, size=m)
    ys = (A @ u + errs) % q
    support = [v % q for v in range(-B, B + 1)]
    got = arora_ge(zip(A, ys.tolist()), support, n, q)
    success = got is not None
    verified = bool(success and np.array_equal(got.data, u))
    return m, m, success, verified, {}


def _drive_clwe(cfg, master_seed, trial):
    n, q, m = cfg["n"], cfg["q"], cfg["m"]
    f = make_amplitude("bounded_uniform", q, B=cfg["B"])
    A = ZqMatrix.random(n, m, q, stream(master_seed, trial, "instance"))
    seed = int(child_seeds(master_seed, trial, "clwe", 1)[0])
    report = clwe_simulate(A, f, "ge", seed, cfg["inner_trials"])
    success = report.sigma <= CLWE_SIGMA_TARGET and report.fidelity >= CLWE_FIDELITY_TARGET
    details = {"fidelity": report.fidelity, "sigma": report.sigma, "mode": report.mode}
    return m, 0, success, success, details


def _drive_sis_quantum(cfg, master_seed, trial):
    n, q, m, B = cfg["n"], cfg["q"], cfg["m"], cfg["B"]
    inst = SisInstance.random(n, m, q, B, stream(master_seed, trial, "instance"))
    A = ZqMatrix(inst.matrix, Modulus(q))
    try:
        z = sis_state_sample(A, B, stream(master_seed, trial, "sampler"), method=cfg["method"])
    except (EmptySolutionSet, Timeout) as exc:
        return m, 0, False, False, {"reason": type(exc).__name__}
    ok = verify_sis(inst.matrix, q, z.centered(), B)
    details = {"norm": int(np.abs(z.centered()).max()), "method": cfg["method"]}
    return m, 0, ok, ok, details


def _drive_sis_composite(cfg, master_seed, trial):
    n, q, factors = cfg["n"], cfg["q"], cfg["factors"]
    m = n ** len(factors)
    A = ZqMatrix.random(n - 1, m, q, stream(master_seed, trial, "instance"))
    x = sis_solve_composite(A, factors)
    bound = int(np.prod([p // 2 for p in factors]))
    ok = verify_sis(A.data, q, x, bound)
    details = {"norm": int(np.abs(x).max()), "norm_bound": bound, "factors": factors}
    return m, 0, ok, ok, details


def _drive_edcp(cfg, master_seed, trial):
    n, q, w, m = cfg["n"], cfg["q"], cfg["width"], cfg["m"]
    D = make_amplitude("one_sided_uniform", q, w=w)
    s = _plant_secret(q, n, master_seed, trial)
    samples = edcp_sample_set(n, m, q, D, s, stream(master_seed, trial, "samples"))
    res = edcp_solve(samples, "ag", rng=stream(master_seed, trial, "solver"))
    verified = bool(res.success and np.array_equal(res.secret.data, s))
    return res.m_used, res.constraints_collected, res.success, verified, res.details


def _canonical(v: np.ndarray, q: int) -> np.ndarray:
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        return v
    return (v * pow(int(v[nz[0]]), -1, q)) % q


def _drive_friedl(cfg, master_seed, trial):
    n, q, p, m = cfg["n"], cfg["q"], cfg["width"], cfg["m"]
    D = make_amplitude("one_sided_uniform", q, w=p)
    rng = stream(master_seed, trial, "secret")
    s = rng.integers(0, q, size=n, dtype=np.int64)
    while not s.any():
        s = rng.integers(0, q, size=n, dtype=np.int64)
    # recovery is defined up to scalar multiples; plant the line representative
    s = _canonical(s, q)
    samples = edcp_sample_set(n, m, q, D, s, stream(master_seed, trial, "samples"))
    pairs = friedl_measurements(samples, stream(master_seed, trial, "stats"))
    zs = np.array([z for z, _ in pairs])
    violations = sum(1 for z, y in pairs if z != 0 and int(y @ s) % q == 0)
    details = {
        "z0_rate": float(np.mean(zs == 0)),
        "violations": int(violations),
        "p": p,
    }
    try:
        got = friedl_constant_q(samples, rng=stream(master_seed, trial, "solver"))
    except InsufficientSamples as exc:
        details["reason"] = str(exc)
        return m, int((zs != 0).sum()), False, False, details
    verified = bool(np.array_equal(got.data, s))
    return m, int((zs != 0).sum()), True, verified, details


_DRIVERS: dict[str, Callable] = {
    "slwe-ge": _drive_slwe_ge,
    "slwe-ag": _drive_slwe_ag,
    "clwe": _drive_clwe,
    "sis-quantum": _drive_sis_quantum,
    "sis-composite": _drive_sis_composite,
    "edcp": _drive_edcp,
    "friedl": _drive_friedl,
    "arora-ge": _drive_arora_ge,
}


# ---------------------------------------------------------------------------
# Run records


@dataclass(frozen=True)
class RunRecord:
    """One solve run: config echo, per-trial records, aggregate, version."""

    problem: str
    config: dict[str, Any]
    trials: list[dict[str, Any]]
    aggregate: dict[str, Any]
    version: str = PACKAGE_VERSION
    timestamp: str | None = None

    def json_lines(self) -> list[str]:
        lines = [json.dumps(t, sort_keys=True, default=_json_default) for t in self.trials]
        summary = {
            "record": "run",
            "problem": self.problem,
            "config": self.config,
            "aggregate": self.aggregate,
            "version": self.version,
        }
        if self.timestamp is not None:
            summary["timestamp"] = self.timestamp
        lines.append(json.dumps(summary, sort_keys=True, default=_json_default))
        return lines

    def csv_table(self):
        keys = ["problem", "trial", "seed", "m_used", "constraints_collected", "success", "verified"]
        if self.trials and "wall_time" in self.trials[0]:
            keys.append("wall_time")
        detail_keys = sorted(
            {k for t in self.trials for k in t.get("details", {})}
        )
        header = keys + detail_keys
        rows = []
        for t in self.trials:
            row = [t.get(k, "") for k in keys]
            row.extend(t.get("details", {}).get(k, "") for k in detail_keys)
            rows.append(row)
        return header, rows


def solve_run(
    problem: str,
    *,
    seed: int = 0,
    trials: int = 1,
    with_timestamp: bool = True,
    **params: Any,
) -> RunRecord:
    """Run `trials` seeded instances of one problem and aggregate.

    Per-trial randomness derives from (seed, trial, role) streams, so the
    per-trial records are reproducible bit for bit; wall times (and the
    record timestamp) are suppressed when with_timestamp is False to keep
    reruns byte-identical.
    """
    cfg = validate_solve_config(problem, **params)
    driver = _DRIVERS[problem]
    trial_records: list[dict[str, Any]] = []
    for trial in range(trials):
        t0 = time.perf_counter()
        m_used, collected, success, verified, details = driver(cfg, seed, trial)
        wall = time.perf_counter() - t0
        record: dict[str, Any] = {
            "problem": problem,
            "params": {k: v for k, v in cfg.items() if k != "problem"},
            "trial": trial,
            "seed": seed,
            "m_used": int(m_used),
            "constraints_collected": int(collected),
            "success": bool(success),
            "verified": bool(verified),
            "details": details,
        }
        if with_timestamp:
            record["wall_time"] = wall
        trial_records.append(record)
    aggregate: dict[str, Any] = {
        "trials": trials,
        "successes": sum(t["success"] for t in trial_records),
        "verified": sum(t["verified"] for t in trial_records),
        "mean_m_used": float(np.mean([t["m_used"] for t in trial_records])),
    }
    aggregate["success_rate"] = aggregate["successes"] / max(trials, 1)
    numeric = [
        k
        for k in (trial_records[0]["details"] if trial_records else {})
        if all(
            isinstance(t["details"].get(k), (int, float)) and not isinstance(t["details"].get(k), bool)
            for t in trial_records
        )
    ]
    for k in numeric:
        aggregate[f"mean_{k}"] = float(np.mean([t["details"][k] for t in trial_records]))
    config_echo = dict(cfg)
    config_echo.update(seed=seed, trials=trials)
    return RunRecord(
        problem,
        config_echo,
        trial_records,
        aggregate,
        PACKAGE_VERSION,
        datetime.now(timezone.utc).isoformat() if with_timestamp else None,
    )
