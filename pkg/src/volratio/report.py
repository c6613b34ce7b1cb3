"""Pipeline orchestration and machine-readable report bundles.

One fit report covers a ratio series and its reciprocal: every family is
fitted to both sides, ranked by one-sample KS, and emitted together with
histogram data and fitted-PDF curves. Correlation and cross-series KS
matrices mirror the same series constructions.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import distributions as dist
from .distributions import FAMILY_ORDER, BetaPrimeParams, DistributionSpec, make_spec
from .errors import DataQualityError, IngestError
from .fitting import FitConfig, FitResult, fit_all_families, fit_mle
from .gof import ks_two_sample, pearson
from .ingest import Manifest, align, load_index_csv, load_price_csv, restrict
from .volatility import (
    IndexSeries,
    PriceSeries,
    RatioSeries,
    apply_calendar_rescale,
    build_ratio_series,
    implied_variance,
    invert_series,
    realized_variance,
)

__all__ = [
    "FAMILY_LABELS",
    "ReportBundle",
    "run_table_report",
    "run_pcc",
    "run_ksmatrix",
    "make_synthetic",
    "write_bundle",
    "write_matrix",
    "render_table_txt",
    "render_matrix_txt",
]

#: Display label and parameter print order per family (scale first for
#: Weibull; everything else in natural parameter order).
FAMILY_LABELS = {
    "normal": ("Normal", "N", ("mu", "sigma")),
    "lognormal": ("LogNormal", "LN", ("mu", "sigma")),
    "invgamma": ("IGa", "IGa", ("alpha", "betascale")),
    "gamma": ("Gamma", "Gamma", ("k", "theta")),
    "weibull": ("Weibull", "Weibull", ("lam", "kshape")),
    "invgauss": ("IG", "IG", ("mu", "lam")),
    "betaprime": ("BP", "BP", ("p", "q", "beta")),
}

#: Series labels of the cross-series KS matrix, with {iv} substituted by the
#: index name. Cells listed in _KS_ABSENT are reported as absent.
_KS_LABELS = (
    "RV2/{iv}2",
    "nRV2/{iv}2",
    "RV2/nRV2",
    "rRV2/r{iv}2",
    "rRV2/rRV2",
    "nRV2/RV2",
)
_KS_ABSENT = frozenset({(0, 5), (5, 0), (1, 2), (2, 1), (2, 5), (5, 2)})

_PCC_LABELS = ("RV2", "nRV2", "{iv}2", "rRV2")


def _config_hash(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def _histogram(values: np.ndarray, max_bins: int = 200) -> tuple[np.ndarray, np.ndarray]:
    """Density histogram with Freedman-Diaconis bin width, capped at max_bins."""
    n = values.size
    q75, q25 = np.percentile(values, [75.0, 25.0])
    iqr = q75 - q25
    lo, hi = float(values.min()), float(values.max())
    if iqr <= 0.0 or hi <= lo:
        bins = 1
    else:
        width = 2.0 * iqr / n ** (1.0 / 3.0)
        bins = min(max_bins, max(1, math.ceil((hi - lo) / width)))
    densities, edges = np.histogram(values, bins=bins, range=(lo, hi), density=True)
    return edges, densities


def _fit_payload(result: FitResult) -> dict:
    label, prefix, display_order = FAMILY_LABELS[result.spec.family]
    params = {
        name: float(getattr(result.spec.params, name))
        for name in (f.name for f in result.spec.params.__dataclass_fields__.values())
    }
    return {
        "family": result.spec.family,
        "label": label,
        "params": params,
        "params_display": [params[name] for name in display_order],
        "loglik": result.loglik,
        "ks": result.ks,
        "converged": result.converged,
    }


@dataclass(frozen=True)
class ReportBundle:
    """Machine-readable analogue of one fit-table pair plus plot data."""

    table: list[dict]  # one row per family: primary and inverse fits
    histogram: dict  # bin_edges, densities
    fitted_curves: dict  # x grid plus one pdf vector per family
    metadata: dict

    def to_dict(self) -> dict:
        return {
            "table": self.table,
            "histogram": self.histogram,
            "fitted_curves": self.fitted_curves,
            "metadata": self.metadata,
        }


def _load_market(
    manifest: Manifest,
    index: str,
    date_from: Optional[dt.date],
    date_to: Optional[dt.date],
) -> tuple[PriceSeries, IndexSeries, dt.date, dt.date]:
    date_from = date_from or manifest.date_from
    date_to = date_to or manifest.date_to
    prices = restrict(load_price_csv(manifest.spx), date_from, date_to)
    idx = restrict(load_index_csv(manifest.index_path(index)), date_from, date_to)
    # Calendars are intersected before any window computation, so realized
    # windows span the trading dates both series actually share.
    prices, idx = align(prices, idx)
    return prices, idx, date_from, date_to


def _ratio_inputs(prices: PriceSeries, idx: IndexSeries, rescale: str, window: int = 21):
    rv_pred = realized_variance(prices, "predicted", window_trading_days=window)
    rv_prec = realized_variance(prices, "preceding", window_trading_days=window)
    if rescale == "calendar":
        rv_pred = apply_calendar_rescale(rv_pred)
        rv_prec = apply_calendar_rescale(rv_prec)
    elif rescale != "none":
        raise ValueError(f"rescale must be 'calendar' or 'none', got {rescale!r}")
    iv = implied_variance(idx)
    return rv_pred, rv_prec, iv


def build_mode_ratio(
    prices: PriceSeries,
    idx: IndexSeries,
    mode: str,
    rescale: str = "calendar",
    scale: Optional[bool] = None,
    seed: int = 0,
    window: int = 21,
) -> RatioSeries:
    """Construct the ratio series for one alignment mode.

    Unit-mean scaling defaults to on except for the adjacent-realized mode,
    whose location is part of the story the fits tell.
    """
    rv_pred, rv_prec, iv = _ratio_inputs(prices, idx, rescale, window)
    if scale is None:
        scale = mode != "adjacent"
    if mode == "predicted":
        return build_ratio_series(rv_pred, iv, "predicted", scale)
    if mode == "preceding":
        return build_ratio_series(rv_prec, iv, "preceding", scale)
    if mode == "adjacent":
        return build_ratio_series(rv_pred, rv_prec, "adjacent", scale)
    if mode == "random":
        return build_ratio_series(rv_prec, iv, "random", scale, seed=seed)
    raise ValueError(f"unknown mode {mode!r}")


def fit_table_pair(
    values: np.ndarray,
    scaled: bool,
    config: Optional[FitConfig] = None,
) -> tuple[list[FitResult], list[FitResult]]:
    """Fit all families to a sample and to its reciprocal.

    The reciprocal side is rescaled to unit mean when the primary side is a
    unit-mean series, and its Beta Prime fit is seeded with the exactly
    inverted primary parameters so the reciprocal-closure of the family is
    preserved by the optimizer.
    """
    primary_fits = fit_all_families(values, config=config)
    inv_raw = 1.0 / values
    divisor = float(inv_raw.mean()) if scaled else 1.0
    inv_values = inv_raw / divisor

    bp_primary = next(r for r in primary_fits if r.spec.family == "betaprime")
    bp = bp_primary.spec.params
    seed_params = BetaPrimeParams(bp.q, bp.p, (1.0 / bp.beta) / divisor)
    inverse_fits = []
    for family in FAMILY_ORDER:
        initial = (
            DistributionSpec("betaprime", seed_params) if family == "betaprime" else None
        )
        inverse_fits.append(fit_mle(inv_values, family, config=config, initial=initial))
    return primary_fits, inverse_fits


def run_table_report(
    manifest: Manifest,
    index: str = "vix",
    mode: str = "predicted",
    invert: bool = False,
    scale: Optional[bool] = None,
    rescale: str = "calendar",
    seed: int = 0,
    config: Optional[FitConfig] = None,
    date_from: Optional[dt.date] = None,
    date_to: Optional[dt.date] = None,
    curve_points: int = 401,
) -> ReportBundle:
    """Run ingest -> ratio construction -> seven-family MLE -> KS ranking."""
    if index not in ("vix", "vxo"):
        raise IngestError(f"index must be 'vix' or 'vxo', got {index!r}")
    prices, idx, date_from, date_to = _load_market(manifest, index, date_from, date_to)
    ratio = build_mode_ratio(prices, idx, mode, rescale=rescale, scale=scale, seed=seed)
    if invert:
        ratio = invert_series(ratio)
    return build_report_bundle(
        ratio.values,
        scaled=ratio.scaled_to_unit_mean,
        config=config,
        curve_points=curve_points,
        metadata={
            "index": index,
            "mode": mode,
            "invert": invert,
            "scaled_to_unit_mean": ratio.scaled_to_unit_mean,
            "rescale": rescale,
            "seed": seed,
            "date_from": str(date_from),
            "date_to": str(date_to),
        },
    )


def build_report_bundle(
    values: np.ndarray,
    scaled: bool,
    config: Optional[FitConfig] = None,
    curve_points: int = 401,
    metadata: Optional[dict] = None,
) -> ReportBundle:
    """Fit a sample and its reciprocal and assemble the full report bundle."""
    values = np.asarray(values, dtype=float)
    primary_fits, inverse_fits = fit_table_pair(values, scaled, config)
    table = [
        {
            "family": p.spec.family,
            "label": FAMILY_LABELS[p.spec.family][0],
            "primary": _fit_payload(p),
            "inverse": _fit_payload(q),
        }
        for p, q in zip(primary_fits, inverse_fits)
    ]
    edges, densities = _histogram(values)
    grid = np.linspace(edges[0], edges[-1], curve_points)
    curves = {"x": grid.tolist()}
    for result in primary_fits:
        curves[result.spec.family] = np.asarray(dist.pdf(result.spec, grid)).tolist()

    meta = dict(metadata or {})
    meta.update({"n": int(values.size), "version": __version__})
    meta["fit_config"] = asdict(config or FitConfig())
    meta["config_hash"] = _config_hash(meta)
    meta["generated_at"] = dt.datetime.now(dt.timezone.utc).isoformat()
    return ReportBundle(
        table=table,
        histogram={"bin_edges": edges.tolist(), "densities": densities.tolist()},
        fitted_curves=curves,
        metadata=meta,
    )


def _series_for_matrices(
    prices: PriceSeries,
    idx: IndexSeries,
    seed: int,
    rescale: str,
    window: int = 21,
) -> tuple[dict[str, np.ndarray], int]:
    """The raw series underlying the PCC and KS matrices, on common dates."""
    rv_pred, rv_prec, iv = _ratio_inputs(prices, idx, rescale, window)
    common = np.intersect1d(np.intersect1d(rv_prec.dates, rv_pred.dates), iv.dates)
    if common.size == 0:
        raise DataQualityError("realized and implied series share no dates")

    def on_common(dates: np.ndarray, values: np.ndarray) -> np.ndarray:
        return values[np.searchsorted(dates, common)]

    rv = on_common(rv_prec.dates, rv_prec.rv2)
    nrv = on_common(rv_pred.dates, rv_pred.rv2)
    iv2 = on_common(iv.dates, iv.values)
    if np.any(rv == 0.0) or np.any(nrv == 0.0):
        raise DataQualityError("zero-variance window in aligned realized variance")
    seeds = np.random.SeedSequence(seed).generate_state(2)
    rng = np.random.Generator(np.random.PCG64(int(seeds[0])))
    shuffled = rv[rng.permutation(rv.size)]
    series = {"RV2": rv, "nRV2": nrv, "IV2": iv2, "rRV2": shuffled}
    return series, int(seeds[1])


def run_pcc(
    manifest: Manifest,
    index: str = "vix",
    seed: int = 0,
    rescale: str = "calendar",
    date_from: Optional[dt.date] = None,
    date_to: Optional[dt.date] = None,
) -> dict:
    """Pearson correlation matrix over {RV2, nRV2, IV2, randomized RV2}."""
    prices, idx, date_from, date_to = _load_market(manifest, index, date_from, date_to)
    series, _ = _series_for_matrices(prices, idx, seed, rescale)
    vectors = [series["RV2"], series["nRV2"], series["IV2"], series["rRV2"]]
    labels = [lbl.format(iv=index.upper()) for lbl in _PCC_LABELS]
    matrix = [
        [pearson(vectors[i], vectors[j]) for j in range(len(vectors))]
        for i in range(len(vectors))
    ]
    return {
        "labels": labels,
        "matrix": matrix,
        "metadata": {
            "index": index,
            "seed": seed,
            "rescale": rescale,
            "n": int(vectors[0].size),
            "date_from": str(date_from),
            "date_to": str(date_to),
            "version": __version__,
        },
    }


def run_ksmatrix(
    manifest: Manifest,
    index: str = "vix",
    seed: int = 0,
    rescale: str = "calendar",
    date_from: Optional[dt.date] = None,
    date_to: Optional[dt.date] = None,
) -> dict:
    """Two-sample KS matrix across the six ratio series.

    Every series is unit-mean scaled so the matrix compares shapes. Cells
    the reference layout leaves blank are emitted as nulls.
    """
    prices, idx, date_from, date_to = _load_market(manifest, index, date_from, date_to)
    series, second_seed = _series_for_matrices(prices, idx, seed, rescale)
    rv, nrv, iv2, rrv = series["RV2"], series["nRV2"], series["IV2"], series["rRV2"]

    def unit(v: np.ndarray) -> np.ndarray:
        return v / v.mean()

    rng = np.random.Generator(np.random.PCG64(second_seed))
    rrv_denominator = rv[rng.permutation(rv.size)]
    ratios = [
        unit(rv / iv2),
        unit(nrv / iv2),
        unit(rv / nrv),
        unit(rrv / iv2),
        unit(rrv / rrv_denominator),
        unit(nrv / rv),
    ]
    labels = [lbl.format(iv=index.upper()) for lbl in _KS_LABELS]
    k = len(ratios)
    matrix: list[list[Optional[float]]] = []
    for i in range(k):
        row: list[Optional[float]] = []
        for j in range(k):
            if (i, j) in _KS_ABSENT:
                row.append(None)
            elif i == j:
                row.append(0.0)
            else:
                row.append(ks_two_sample(ratios[i], ratios[j]).d)
        matrix.append(row)
    return {
        "labels": labels,
        "matrix": matrix,
        "metadata": {
            "index": index,
            "seed": seed,
            "rescale": rescale,
            "n": int(rv.size),
            "date_from": str(date_from),
            "date_to": str(date_to),
            "version": __version__,
        },
    }


def make_synthetic(family: str, params: Sequence[float], n: int, seed: int) -> dict:
    """Seeded sample from one family plus the generating spec."""
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    spec = make_spec(family, *params)
    sample = dist.sample(spec, n, seed)
    return {
        "family": family,
        "params": list(map(float, params)),
        "n": int(n),
        "seed": int(seed),
        "sample": sample.tolist(),
    }


# --- rendering -------------------------------------------------------------------


def _format_params(prefix: str, values: Sequence[float]) -> str:
    inner = ", ".join(f"{v:15.4f}" for v in values)
    return f"{prefix}({inner})"


def render_table_txt(bundle: ReportBundle) -> str:
    """Fixed-width text rendering of the fit-table pair."""
    meta = bundle.metadata
    header = (
        f"mode={meta.get('mode', '-')} index={meta.get('index', '-')} "
        f"n={meta.get('n')} range={meta.get('date_from', '-')}..{meta.get('date_to', '-')}"
    )
    lines = [header]
    for side, title in (("primary", "ratio"), ("inverse", "inverse ratio")):
        lines.append("")
        lines.append(f"[{title}]")
        lines.append(f"{'family':<10s} {'parameters':<58s} {'KS test':>10s}")
        lines.append("-" * 80)
        for row in bundle.table:
            payload = row[side]
            _, prefix, _ = FAMILY_LABELS[row["family"]]
            params = _format_params(prefix, payload["params_display"])
            flag = "" if payload["converged"] else "  [not converged]"
            lines.append(f"{row['label']:<10s} {params:<58s} {payload['ks']:>10.4f}{flag}")
    lines.append("")
    return "\n".join(lines)


def render_matrix_txt(result: dict, diag_blank: bool = False) -> str:
    """Fixed-width text rendering of a labelled square matrix."""
    labels = result["labels"]
    width = max(12, max(len(lbl) for lbl in labels) + 2)
    lines = [" " * width + "".join(f"{lbl:>{width}s}" for lbl in labels)]
    for lbl, row in zip(labels, result["matrix"]):
        cells = []
        for value in row:
            cells.append(f"{'-':>{width}s}" if value is None else f"{value:>{width}.4f}")
        lines.append(f"{lbl:>{width}s}" + "".join(cells))
    lines.append("")
    return "\n".join(lines)


def _write_json(payload: dict, path: Path) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_bundle(bundle: ReportBundle, outdir: Path) -> list[Path]:
    """Write table.json, table.txt, hist.csv and curves.csv into outdir."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    path = outdir / "table.json"
    _write_json(bundle.to_dict(), path)
    written.append(path)

    path = outdir / "table.txt"
    path.write_text(render_table_txt(bundle))
    written.append(path)

    path = outdir / "hist.csv"
    edges = bundle.histogram["bin_edges"]
    densities = bundle.histogram["densities"]
    rows = ["bin_left,bin_right,density"]
    rows += [
        f"{edges[i]!r},{edges[i + 1]!r},{densities[i]!r}" for i in range(len(densities))
    ]
    path.write_text("\n".join(rows) + "\n")
    written.append(path)

    path = outdir / "curves.csv"
    families = [row["family"] for row in bundle.table]
    header = "x," + ",".join(families)
    xs = bundle.fitted_curves["x"]
    lines = [header]
    for i, x in enumerate(xs):
        vals = ",".join(repr(bundle.fitted_curves[f][i]) for f in families)
        lines.append(f"{x!r},{vals}")
    path.write_text("\n".join(lines) + "\n")
    written.append(path)
    return written


def write_matrix(result: dict, outdir: Path, stem: str) -> list[Path]:
    """Write a labelled matrix as <stem>.csv, <stem>.txt and <stem>.json."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    path = outdir / f"{stem}.csv"
    lines = ["," + ",".join(result["labels"])]
    for lbl, row in zip(result["labels"], result["matrix"]):
        cells = ",".join("" if v is None else repr(v) for v in row)
        lines.append(f"{lbl},{cells}")
    path.write_text("\n".join(lines) + "\n")
    written.append(path)

    path = outdir / f"{stem}.txt"
    path.write_text(render_matrix_txt(result))
    written.append(path)

    path = outdir / f"{stem}.json"
    _write_json(result, path)
    written.append(path)
    return written
