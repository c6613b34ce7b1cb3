"""Shared fixtures: a deterministic synthetic market with correlated
realized and implied volatility, written out as manifest + CSV files."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest


def synth_market(n_days: int = 900, seed: int = 0):
    """Stochastic-volatility prices plus a noisy forward-looking vol index.

    The index blends the upcoming 21-day realized variance with recent spot
    variance, so ratio series and correlation structure resemble real
    implied/realized pairs.
    """
    rng = np.random.default_rng(seed)
    start = np.datetime64("2005-01-03")
    dates = np.busday_offset(start, np.arange(n_days), roll="forward")
    lv = np.empty(n_days)
    lv[0] = np.log(0.010**2)
    kappa, theta, xi = 0.03, np.log(0.011**2), 0.12
    for t in range(1, n_days):
        lv[t] = lv[t - 1] + kappa * (theta - lv[t - 1]) + xi * rng.standard_normal()
    vol = np.exp(0.5 * lv)
    rets = vol * rng.standard_normal(n_days)
    prices = 100.0 * np.exp(np.cumsum(rets))
    r2 = rets**2
    fwd = np.full(n_days, np.nan)
    for t in range(n_days - 21):
        fwd[t] = r2[t + 1 : t + 22].sum() * (252.0 / 21.0)
    spot = np.convolve(r2, np.ones(10) / 10.0, mode="same") * 252.0
    blend = np.where(np.isnan(fwd), spot, 0.6 * fwd + 0.4 * spot)
    iv = np.sqrt(blend) * np.exp(0.12 * rng.standard_normal(n_days))
    levels = 100.0 * np.maximum(iv, 1e-4)
    return dates, prices, levels


def write_market(dirpath: Path, n_days: int = 900, seed: int = 0) -> Path:
    """Write spx/vix/vxo CSVs plus a manifest; returns the manifest path."""
    dirpath.mkdir(parents=True, exist_ok=True)
    dates, prices, levels = synth_market(n_days, seed)
    series = {
        "spx.csv": prices,
        "vix.csv": levels,
        "vxo.csv": levels * np.exp(0.02),
    }
    for name, values in series.items():
        lines = ["date,close"] + [f"{d},{float(v)!r}" for d, v in zip(dates, values)]
        (dirpath / name).write_text("\n".join(lines) + "\n")
    manifest = dirpath / "manifest.txt"
    manifest.write_text(
        "spx=spx.csv\nvix=vix.csv\nvxo=vxo.csv\nfrom=2005-01-03\nto=2008-12-31\n"
    )
    return manifest


@pytest.fixture(scope="session")
def market_manifest(tmp_path_factory) -> Path:
    return write_market(tmp_path_factory.mktemp("market"))
