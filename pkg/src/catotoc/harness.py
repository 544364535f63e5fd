"""Scenario engine: configuration, time series, figure suite, sweeps.

A scenario evolves a product of two coherent wavepackets under the
coupled quantized map and emits one row per time step with entanglement
entropies and two out-of-time-ordered commutator norms: ``otoc_xp``
uses A = X (x) X against B = P (x) P, ``otoc_xrho`` uses B = the initial
projector.  Both are state expectations in the initial state, computed
on vectors (forward-evolve, apply, back-evolve) so nothing larger than
n x n is ever materialized.  The emitted c2/c4 columns are the two- and
four-point pieces in the same convention with B the initial projector,
where the exact split is C = C2 - C4; the writer enforces that identity
plus the entropy cross-identities on every row before anything reaches
disk.  The normalized-trace convention with the -2/n^2 factor is
exercised separately in the verification and test suites.

Output files are deterministic: floats printed with 17 significant
digits, fixed column and key order, fixed scenario ordering in
summaries, so byte-identical reruns are a testable promise.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import classical, config, entropy, hilbert
from .catmap import CoupledPropagator, CoupledSpec
from .errors import CatotocError, ConfigError, NumericalHealthError
from .otoc import rescale_factor
from .states import coherent_state, product_state
from .verify import verify  # noqa: F401  (re-exported for the CLI)

__all__ = [
    "ScenarioConfig",
    "TimeSeriesRecord",
    "ScenarioResult",
    "run_scenario",
    "run_figure_suite",
    "sweep",
    "read_config_file",
    "CANONICAL_SCENARIOS",
    "CSV_COLUMNS",
    "format_float",
]

DYNAMICS_CHOICES = ("ee", "he", "hh")
OTOC_B_CHOICES = ("p2d", "rho0", "both")
OUTPUT_CHOICES = ("entropies", "otocs", "correlators", "wigner_dump", "schmidt_spectrum")

CSV_COLUMNS = (
    "t",
    "s_linear",
    "s_vn",
    "s_renyi2",
    "otoc_xp",
    "otoc_xrho",
    "c2",
    "c4_real",
    "c4_imag",
    "otoc_xp_rescaled",
    "otoc_xrho_rescaled",
)

QUARTER_PI = math.pi / 4.0


def format_float(x):
    return f"{x:.17g}"


def _parse_center(value):
    if isinstance(value, (tuple, list)):
        q, p = value
        return (float(q), float(p))
    parts = str(value).split(",")
    if len(parts) != 2:
        raise ConfigError(f"center must be 'q,p', got {value!r}")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ConfigError(f"center must be numeric 'q,p', got {value!r}") from exc


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved experiment description; defaults follow the standard runs."""

    dynamics: str = "hh"
    n: int = 64
    k: float = 0.25
    kc: float = 0.5
    center1: tuple = (0.5, 0.5)
    center2: tuple = (0.5, 0.5)
    t_max: int = 50
    otoc_b: str = "both"
    outputs: tuple = ("entropies", "otocs", "correlators")

    def validate(self):
        if self.dynamics not in DYNAMICS_CHOICES:
            raise ConfigError(f"dynamics must be one of {DYNAMICS_CHOICES}, got {self.dynamics!r}")
        if not isinstance(self.n, int) or self.n < 2:
            raise ConfigError(f"n must be an integer >= 2, got {self.n!r}")
        if not isinstance(self.t_max, int) or self.t_max < 0:
            raise ConfigError(f"t_max must be an integer >= 0, got {self.t_max!r}")
        if self.otoc_b not in OTOC_B_CHOICES:
            raise ConfigError(f"otoc_b must be one of {OTOC_B_CHOICES}, got {self.otoc_b!r}")
        for name in self.outputs:
            if name not in OUTPUT_CHOICES:
                raise ConfigError(f"unknown output {name!r}; choices: {OUTPUT_CHOICES}")
        if "wigner_dump" in self.outputs and self.n > config.WIGNER_2DOF_MAX_N:
            raise ConfigError(
                f"wigner_dump needs n <= {config.WIGNER_2DOF_MAX_N}, got n={self.n}"
            )
        return self

    @classmethod
    def from_mapping(cls, mapping):
        """Build from string-keyed values (config file or CLI), rejecting unknown keys."""
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        for key, raw in mapping.items():
            if raw is None:
                continue
            if key in ("center1", "center2"):
                kwargs[key] = _parse_center(raw)
            elif key in ("n", "t_max"):
                try:
                    kwargs[key] = int(raw)
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"{key} must be an integer, got {raw!r}") from exc
            elif key in ("k", "kc"):
                try:
                    kwargs[key] = float(raw)
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"{key} must be a number, got {raw!r}") from exc
            elif key == "outputs":
                if isinstance(raw, str):
                    raw = [s.strip() for s in raw.split(",") if s.strip()]
                kwargs[key] = tuple(raw)
            else:
                kwargs[key] = str(raw).lower()
        return cls(**kwargs).validate()

    def echo_lines(self):
        out = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in ("center1", "center2"):
                value = f"{format_float(value[0])},{format_float(value[1])}"
            elif f.name == "outputs":
                value = ",".join(value)
            elif isinstance(value, float):
                value = format_float(value)
            out.append(f"{f.name} = {value}")
        return out


def read_config_file(path):
    """Flat key = value file; '#' starts a comment; returns a string mapping."""
    mapping = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        mapping[key.strip()] = value.strip()
    return mapping


@dataclass(frozen=True)
class TimeSeriesRecord:
    t: int
    s_linear: float
    s_vn: float
    s_renyi2: float
    otoc_xp: float
    otoc_xrho: float
    c2: float
    c4_real: float
    c4_imag: float
    otoc_xp_rescaled: float
    otoc_xrho_rescaled: float

    def csv_row(self):
        cells = [str(self.t)]
        cells.extend(format_float(getattr(self, name)) for name in CSV_COLUMNS[1:])
        return ",".join(cells)


@dataclass(frozen=True)
class ScenarioResult:
    cfg: ScenarioConfig
    records: tuple
    metadata: dict
    schmidt_final: np.ndarray = None
    wigner_final: np.ndarray = None

    def series(self, name):
        return np.array([getattr(r, name) for r in self.records])

    def csv_text(self):
        lines = [",".join(CSV_COLUMNS)]
        lines.extend(r.csv_row() for r in self.records)
        return "\n".join(lines) + "\n"

    def write(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "series.csv").write_text(self.csv_text())
        meta_lines = [f"{k} = {v}" for k, v in sorted(self.metadata.items())]
        (out / "metadata.txt").write_text("\n".join(meta_lines) + "\n")
        (out / "config.txt").write_text("\n".join(self.cfg.echo_lines()) + "\n")
        if self.schmidt_final is not None:
            body = "\n".join(format_float(v) for v in self.schmidt_final)
            (out / "schmidt_spectrum.txt").write_text(body + "\n")
        if self.wigner_final is not None:
            _write_grid(out / "wigner_final.txt", self.wigner_final, self.cfg)
        return out


def _write_grid(path, grid, cfg):
    flat = grid.reshape(grid.shape[0] * grid.shape[1], -1)
    lines = [
        f"# joint phase-space grid, shape {grid.shape}, row-major (a1 b1) x (a2 b2)",
        f"# n = {cfg.n}, convention = doubled-grid-chord-dft-v1",
    ]
    lines.extend(",".join(format_float(v) for v in row) for row in flat)
    path.write_text("\n".join(lines) + "\n")


class _RowChecker:
    """Row-level identity enforcement; raises before bad data is written."""

    def __init__(self, n):
        self.sat = entropy.rmt_saturation(n)

    def check(self, rec, purity, marginal_residual):
        t = rec.t
        problems = []
        if not (-1e-12 <= rec.s_linear < 1.0):
            problems.append(f"s_linear out of range: {rec.s_linear!r}")
        if abs(math.exp(-rec.s_renyi2) - purity) > 1e-12:
            problems.append("exp(-s_renyi2) != purity")
        if rec.s_renyi2 > rec.s_vn + 1e-10:
            problems.append(f"renyi order violated: S2={rec.s_renyi2!r} > S_VN={rec.s_vn!r}")
        if marginal_residual > 1e-9:
            problems.append(f"marginal spectra differ by {marginal_residual:.3e}")
        if rec.otoc_xp < -1e-10 or rec.otoc_xrho < -1e-10:
            problems.append("negative commutator norm")
        if abs(rec.otoc_xrho - (rec.c2 - rec.c4_real)) > 1e-8:
            problems.append("split identity C = C2 - C4 violated for B = rho0")
        if abs(rec.c4_imag) > 1e-8:
            problems.append(f"c4 imaginary part {rec.c4_imag:.3e}")
        if t == 0:
            for name in ("s_linear", "s_vn", "s_renyi2"):
                if abs(getattr(rec, name)) > 1e-10:
                    problems.append(f"nonzero {name} at t=0")
        if problems:
            raise NumericalHealthError(f"row t={t}: " + "; ".join(problems))


def _apply_diag_pair(diag, psi_mat):
    return diag[:, None] * psi_mat * diag[None, :]


def _apply_op_pair(op, psi_mat):
    return op @ psi_mat @ op.T


def run_scenario(cfg, out_dir=None):
    """Evolve one scenario and return a ScenarioResult (optionally written)."""
    cfg.validate()
    n = cfg.n
    spec = CoupledSpec.for_dynamics(cfg.dynamics, n=n, k=cfg.k, kc=cfg.kc)
    prop = CoupledPropagator(spec)

    psi0 = product_state(coherent_state(n, cfg.center1), coherent_state(n, cfg.center2))
    x_diag = np.sin(2.0 * np.pi * np.arange(n) / n)
    p_1d = hilbert.momentum_operator(n)

    psi0_mat = psi0.reshape(n, n)
    phi = _apply_op_pair(p_1d, psi0_mat).reshape(-1)  # (P x P) |psi0>

    psi_t = psi0.copy()
    phi_t = phi.copy()
    checker = _RowChecker(n)

    raw_rows = []
    for t in range(cfg.t_max + 1):
        if t > 0:
            psi_t = prop.apply(psi_t)
            phi_t = prop.apply(phi_t)

        m = psi_t.reshape(n, n)
        lam = np.linalg.svd(m, compute_uv=False)
        probs = lam * lam
        purity = float(np.sum(probs * probs))
        s_linear = 1.0 - purity
        s_vn = entropy.entropy_of_probabilities(probs)
        s_renyi2 = -math.log(purity)
        rho2_eigs = np.linalg.eigvalsh(m.T @ m.conj())[::-1]
        marginal_residual = float(np.max(np.abs(rho2_eigs[: probs.size] - probs)))

        # A(t)|psi0> and A(t)(P x P)|psi0> via back-evolution, A = X x X
        w = _apply_diag_pair(x_diag, m).reshape(-1)
        v2 = _apply_diag_pair(x_diag, phi_t.reshape(n, n)).reshape(-1)
        for _ in range(t):
            w = prop.apply(w, inverse=True)
            v2 = prop.apply(v2, inverse=True)

        amp = np.vdot(psi0, w)
        c2 = float(np.linalg.norm(w) ** 2)
        c4 = complex(amp * amp)
        otoc_xrho = c2 - float(abs(amp) ** 2)
        pw = _apply_op_pair(p_1d, w.reshape(n, n)).reshape(-1)
        otoc_xp = float(np.linalg.norm(pw - v2) ** 2)

        raw_rows.append(
            {
                "t": t,
                "s_linear": s_linear,
                "s_vn": s_vn,
                "s_renyi2": s_renyi2,
                "otoc_xp": otoc_xp,
                "otoc_xrho": otoc_xrho,
                "c2": c2,
                "c4_real": c4.real,
                "c4_imag": c4.imag,
                "purity": purity,
                "marginal_residual": marginal_residual,
            }
        )

    s_l_series = np.array([r["s_linear"] for r in raw_rows])
    alpha_xp = rescale_factor([r["otoc_xp"] for r in raw_rows], s_l_series)
    alpha_xrho = rescale_factor([r["otoc_xrho"] for r in raw_rows], s_l_series)

    records = []
    for r in raw_rows:
        rec = TimeSeriesRecord(
            t=r["t"],
            s_linear=r["s_linear"],
            s_vn=r["s_vn"],
            s_renyi2=r["s_renyi2"],
            otoc_xp=r["otoc_xp"],
            otoc_xrho=r["otoc_xrho"],
            c2=r["c2"],
            c4_real=r["c4_real"],
            c4_imag=r["c4_imag"],
            otoc_xp_rescaled=alpha_xp * r["otoc_xp"],
            otoc_xrho_rescaled=alpha_xrho * r["otoc_xrho"],
        )
        checker.check(rec, r["purity"], r["marginal_residual"])
        records.append(rec)

    sat = entropy.rmt_saturation(n)
    metadata = {
        "version": config.VERSION,
        "dft_sign": "+1 (matrix exp(+2 pi i j k / n) / sqrt(n))",
        "hbar_effective": format_float(1.0 / (2.0 * math.pi * n)),
        "subsystem_ordering": "index = j1 * n + j2 (subsystem 1 outer)",
        "wigner_convention": "doubled-grid-chord-dft-v1",
        "otoc_average": "state expectation in the initial product state",
        "correlator_convention": (
            "c2/c4 use B = initial projector; exact split C = C2 - C4. "
            "The -2 (C4 - C2)/n^2 form holds in the normalized-trace convention "
            "(verified separately at n=8)."
        ),
        "rescale_rule": "alpha = max(0, sum(s r) / sum(s^2)) against s_linear",
        "rescale_alpha_otoc_xp": format_float(alpha_xp),
        "rescale_alpha_otoc_xrho": format_float(alpha_xrho),
        "rmt_purity_saturation": format_float(sat.purity),
        "rmt_s_linear_saturation": format_float(sat.s_linear),
        "rmt_s_vn_saturation": format_float(sat.s_vn),
        "rmt_provenance_purity": entropy.RMT_PROVENANCE["purity"],
        "rmt_provenance_s_vn": entropy.RMT_PROVENANCE["s_vn"],
        "classical_kernel_path": classical.kernel_path(),
        "float_format": "%.17g",
        "entropy_units": "nats",
    }

    schmidt_final = None
    if "schmidt_spectrum" in cfg.outputs:
        lam = np.linalg.svd(psi_t.reshape(n, n), compute_uv=False)
        schmidt_final = np.sort(np.outer(lam, lam).reshape(-1))[::-1]
    wigner_final = None
    if "wigner_dump" in cfg.outputs:
        from .wigner import wigner_tensor_2dof

        rho = np.outer(psi_t, psi_t.conj())
        wigner_final = wigner_tensor_2dof(rho, (n, n))

    result = ScenarioResult(
        cfg=cfg,
        records=tuple(records),
        metadata=metadata,
        schmidt_final=schmidt_final,
        wigner_final=wigner_final,
    )
    if out_dir is not None:
        result.write(out_dir)
    return result


CANONICAL_SCENARIOS = (
    ("ee_fixed", ScenarioConfig(dynamics="ee")),
    ("ee_offset", ScenarioConfig(dynamics="ee",
                                 center1=(QUARTER_PI, QUARTER_PI),
                                 center2=(QUARTER_PI, QUARTER_PI))),
    ("he", ScenarioConfig(dynamics="he")),
    ("hh", ScenarioConfig(dynamics="hh")),
)


def log_linear_fit(ts, values, window=(1, 5)):
    """Least-squares fit of ln(values) over integer times in [window]."""
    lo, hi = window
    idx = [i for i, t in enumerate(ts) if lo <= t <= hi]
    y = np.array([values[i] for i in idx], dtype=float)
    if len(idx) < 3 or np.any(y <= 0.0):
        return {"slope": float("nan"), "intercept": float("nan"), "r2": float("nan")}
    x = np.array([ts[i] for i in idx], dtype=float)
    ly = np.log(y)
    slope, intercept = np.polyfit(x, ly, 1)
    fittd = slope * x + intercept
    ss_res = float(np.sum((ly - fittd) ** 2))
    ss_tot = float(np.sum((ly - np.mean(ly)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else float("nan")
    return {"slope": float(slope), "intercept": float(intercept), "r2": r2}


def pearson(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.std(a) == 0.0 or np.std(b) == 0.0:
        return float("nan")
    return float(np.corrcoef(a, b)[0, 1])


def _suite_summary(results, fit_window):
    """Deterministic text + stats for the four canonical panels."""
    stats = {}
    lines = ["canonical scenario suite summary", f"fit_window = {fit_window}"]
    for name, _ in CANONICAL_SCENARIOS:
        res = results[name]
        ts = [r.t for r in res.records]
        s_l = res.series("s_linear")
        sat = entropy.rmt_saturation(res.cfg.n).s_linear
        fit_rho = log_linear_fit(ts, res.series("otoc_xrho"), fit_window)
        fit_xp = log_linear_fit(ts, res.series("otoc_xp"), fit_window)
        pr_rho = pearson(res.series("otoc_xrho_rescaled"), s_l)
        pr_xp = pearson(res.series("otoc_xp_rescaled"), s_l)
        if res.cfg.dynamics == "ee":
            svn_mode = "max-normalization"
            peak = float(np.max(res.series("s_vn")))
            svn_scale = float(np.max(s_l)) / peak if peak > 0 else float("nan")
        else:
            svn_mode = "rmt-saturation-ratio"
            svn_scale = sat / entropy.rmt_saturation(res.cfg.n).s_vn
        stats[name] = {
            "s_l_final": float(s_l[-1]),
            "s_l_max": float(np.max(s_l)),
            "s_l_saturation": sat,
            "fit_otoc_xrho": fit_rho,
            "fit_otoc_xp": fit_xp,
            "pearson_xrho": pr_rho,
            "pearson_xp": pr_xp,
            "svn_rescale_mode": svn_mode,
            "svn_rescale_constant": svn_scale,
        }
        lines.append(f"[{name}]")
        lines.append(f"  s_linear final = {format_float(s_l[-1])}")
        lines.append(f"  s_linear max = {format_float(np.max(s_l))}")
        lines.append(f"  s_linear saturation reference = {format_float(sat)}")
        lines.append(
            "  otoc_xrho fit: slope = {slope} intercept = {intercept} r2 = {r2}".format(
                **{k: format_float(vv) for k, vv in fit_rho.items()}
            )
        )
        lines.append(
            "  otoc_xp fit: slope = {slope} intercept = {intercept} r2 = {r2}".format(
                **{k: format_float(vv) for k, vv in fit_xp.items()}
            )
        )
        lines.append(f"  pearson(otoc_xrho_rescaled, s_linear) = {format_float(pr_rho)}")
        lines.append(f"  pearson(otoc_xp_rescaled, s_linear) = {format_float(pr_xp)}")
        lines.append(f"  s_vn rescale mode = {svn_mode}, constant = {format_float(svn_scale)}")

    base = results["ee_fixed"].series("s_linear")
    moved = results["ee_offset"].series("s_linear")
    ts = [r.t for r in results["ee_fixed"].records]
    late = [i for i, t in enumerate(ts) if t >= 10]
    margin = float(np.min(moved[late] - base[late])) if late else float("nan")
    stats["ee_offset_excess_min"] = margin
    lines.append(f"ee_offset - ee_fixed min margin for t >= 10 = {format_float(margin)}")

    he_fit = stats["he"]["fit_otoc_xrho"]["slope"]
    hh_fit = stats["hh"]["fit_otoc_xrho"]["slope"]
    stats["early_growth_he_vs_hh"] = (he_fit, hh_fit)
    lines.append(
        f"early otoc_xrho growth rates: he = {format_float(he_fit)}, hh = {format_float(hh_fit)}"
    )
    return stats, "\n".join(lines) + "\n"


def run_figure_suite(out_dir=None, threads=1, fit_window=(1, 5)):
    """Run the four canonical scenarios; returns (results, stats, summary_text)."""
    results = {}
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {
                name: pool.submit(run_scenario, cfg) for name, cfg in CANONICAL_SCENARIOS
            }
            for name, fut in futures.items():
                results[name] = fut.result()
    else:
        for name, cfg in CANONICAL_SCENARIOS:
            results[name] = run_scenario(cfg)
    stats, text = _suite_summary(results, fit_window)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, _ in CANONICAL_SCENARIOS:
            results[name].write(out / name)
        (out / "summary.txt").write_text(text)
    return results, stats, text


def _sweep_entries(document):
    if isinstance(document, list):
        base, grid = {}, document
    elif isinstance(document, dict):
        base = document.get("base", {})
        grid = document.get("grid", [])
        unknown = set(document) - {"base", "grid"}
        if unknown:
            raise ConfigError(f"unknown sweep document keys: {sorted(unknown)}")
    else:
        raise ConfigError("sweep document must be a JSON object or array")
    entries = []
    for i, override in enumerate(grid):
        if not isinstance(override, dict):
            raise ConfigError(f"sweep grid entry {i} must be an object")
        merged = dict(base)
        merged.update(override)
        entries.append((f"run{i:03d}", ScenarioConfig.from_mapping(merged)))
    return entries


def sweep(document, out_dir, threads=1):
    """Run a grid of configs; continues past per-run failures.

    `document` is a JSON-style structure: either a list of override
    mappings or {"base": {...}, "grid": [{...}, ...]}.  Returns a list
    of (name, ok, message) triples in grid order.
    """
    entries = _sweep_entries(document)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def one(name, cfg):
        target = out / name
        try:
            run_scenario(cfg, out_dir=target)
            return name, True, ""
        except CatotocError as exc:
            target.mkdir(parents=True, exist_ok=True)
            (target / "error.txt").write_text(f"{type(exc).__name__}: {exc}\n")
            return name, False, f"{type(exc).__name__}: {exc}"

    if threads > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(one, name, cfg) for name, cfg in entries]
            report = [f.result() for f in futures]
    else:
        report = [one(name, cfg) for name, cfg in entries]

    lines = [f"{name}: {'ok' if ok else 'FAILED ' + msg}" for name, ok, msg in report]
    (out / "sweep_report.txt").write_text("\n".join(lines) + "\n" if lines else "")
    return report


def load_sweep_document(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"sweep document {path} is not valid JSON: {exc}") from exc
