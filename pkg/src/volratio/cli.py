"""Command-line frontend: a thin client of the HTTP service layer.

By default each subcommand invokes the service handlers in-process, so no
server is needed for batch runs; pass --server to send the same request to
a remote instance instead. Output files are always written locally.
"""

from __future__ import annotations

import datetime as dt
import json
from pathlib import Path
from typing import Optional

import click

from .errors import IngestError, VolratioError
from .ingest import load_manifest
from .report import ReportBundle, write_bundle, write_matrix
from .service import models as m


def _call(server: Optional[str], path: str, request) -> dict:
    """Dispatch one request model, in-process or over HTTP."""
    if server:
        import httpx

        url = server.rstrip("/") + path
        try:
            resp = httpx.post(url, json=request.model_dump(mode="json"), timeout=600.0)
        except httpx.HTTPError as exc:
            raise click.ClickException(f"cannot reach {url}: {exc}") from exc
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise click.ClickException(f"service error ({resp.status_code}): {detail}")
        return resp.json()

    from .service.app import fit_sample, ks_matrix, pcc_matrix, synthetic, table_report

    handlers = {
        "/fit": fit_sample,
        "/report/table": table_report,
        "/report/pcc": pcc_matrix,
        "/report/ksmatrix": ks_matrix,
        "/synthetic": synthetic,
    }
    try:
        return handlers[path](request).model_dump(mode="json")
    except (VolratioError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc


def _check_manifest(manifest_path: str) -> None:
    """Fail fast (usage error, exit 2) on unusable manifests."""
    try:
        load_manifest(manifest_path)
    except IngestError as exc:
        raise click.UsageError(str(exc)) from exc


def _date(value: Optional[dt.datetime]) -> Optional[dt.date]:
    return value.date() if value else None


_manifest_opt = click.option(
    "--manifest",
    "manifest_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="key=value manifest naming spx/vix/vxo CSV files and the date range",
)
_index_opt = click.option(
    "--index", type=click.Choice(["vix", "vxo"]), default="vix", show_default=True
)
_seed_opt = click.option("--seed", type=int, default=0, show_default=True)
_out_opt = click.option(
    "--out", "outdir", required=True, type=click.Path(file_okay=False), help="output directory"
)
_from_opt = click.option(
    "--from", "date_from", type=click.DateTime(formats=["%Y-%m-%d"]), default=None
)
_to_opt = click.option(
    "--to", "date_to", type=click.DateTime(formats=["%Y-%m-%d"]), default=None
)
_server_opt = click.option(
    "--server", default=None, help="remote service URL (default: run in-process)"
)
_rescale_opt = click.option(
    "--rescale", type=click.Choice(["calendar", "none"]), default="calendar", show_default=True
)


@click.group()
@click.version_option(package_name="volratio")
def main() -> None:
    """Variance-ratio construction, distribution fitting and KS ranking."""


@main.command("fit")
@_manifest_opt
@_index_opt
@click.option(
    "--mode",
    type=click.Choice(["predicted", "preceding", "adjacent", "random"]),
    default="predicted",
    show_default=True,
)
@click.option("--invert", is_flag=True, help="analyze the reciprocal ratio")
@click.option("--no-scale", "no_scale", is_flag=True, help="disable unit-mean scaling")
@_rescale_opt
@_seed_opt
@_out_opt
@_from_opt
@_to_opt
@_server_opt
def fit_cmd(
    manifest_path: str,
    index: str,
    mode: str,
    invert: bool,
    no_scale: bool,
    rescale: str,
    seed: int,
    outdir: str,
    date_from: Optional[dt.datetime],
    date_to: Optional[dt.datetime],
    server: Optional[str],
) -> None:
    """Fit all seven families to one ratio series and its reciprocal."""
    _check_manifest(manifest_path)
    request = m.TableReportRequest(
        manifest_path=str(Path(manifest_path).resolve()),
        index=index,
        mode=mode,
        invert=invert,
        scale=False if no_scale else None,
        rescale=rescale,
        seed=seed,
        date_from=_date(date_from),
        date_to=_date(date_to),
    )
    payload = _call(server, "/report/table", request)
    bundle = ReportBundle(
        table=payload["table"],
        histogram=payload["histogram"],
        fitted_curves=payload["fitted_curves"],
        metadata=payload["metadata"],
    )
    for path in write_bundle(bundle, Path(outdir)):
        click.echo(f"wrote {path}")


@main.command("corr")
@_manifest_opt
@_index_opt
@_rescale_opt
@_seed_opt
@_out_opt
@_from_opt
@_to_opt
@_server_opt
def corr_cmd(manifest_path, index, rescale, seed, outdir, date_from, date_to, server) -> None:
    """Pearson correlation matrix over the realized/implied variance set."""
    _check_manifest(manifest_path)
    request = m.MatrixRequest(
        manifest_path=str(Path(manifest_path).resolve()),
        index=index,
        seed=seed,
        rescale=rescale,
        date_from=_date(date_from),
        date_to=_date(date_to),
    )
    payload = _call(server, "/report/pcc", request)
    for path in write_matrix(payload, Path(outdir), "pcc"):
        click.echo(f"wrote {path}")


@main.command("ksmatrix")
@_manifest_opt
@_index_opt
@_rescale_opt
@_seed_opt
@_out_opt
@_from_opt
@_to_opt
@_server_opt
def ksmatrix_cmd(manifest_path, index, rescale, seed, outdir, date_from, date_to, server) -> None:
    """Two-sample KS matrix across the six ratio series."""
    _check_manifest(manifest_path)
    request = m.MatrixRequest(
        manifest_path=str(Path(manifest_path).resolve()),
        index=index,
        seed=seed,
        rescale=rescale,
        date_from=_date(date_from),
        date_to=_date(date_to),
    )
    payload = _call(server, "/report/ksmatrix", request)
    for path in write_matrix(payload, Path(outdir), "ksmatrix"):
        click.echo(f"wrote {path}")


@main.command("synthetic")
@click.option(
    "--family",
    required=True,
    type=click.Choice(
        ["normal", "lognormal", "invgamma", "gamma", "weibull", "invgauss", "betaprime"]
    ),
)
@click.option("--params", required=True, help="comma-separated parameter values, e.g. '2,3,1'")
@click.option("-n", "--size", "n", required=True, type=int)
@_seed_opt
@_out_opt
@_server_opt
def synthetic_cmd(family, params, n, seed, outdir, server) -> None:
    """Write a seeded synthetic sample plus its generating spec."""
    try:
        values = [float(v) for v in params.split(",") if v.strip()]
    except ValueError as exc:
        raise click.UsageError(f"bad --params {params!r}: {exc}") from exc
    if not values:
        raise click.UsageError("--params must name at least one value")
    if n < 1:
        raise click.UsageError(f"sample size must be >= 1, got {n}")
    request = m.SyntheticRequest(family=family, params=values, n=n, seed=seed)
    payload = _call(server, "/synthetic", request)
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    sample_path = out / "sample.csv"
    sample_path.write_text("value\n" + "\n".join(repr(v) for v in payload["sample"]) + "\n")
    spec_path = out / "spec.json"
    spec = {k: payload[k] for k in ("family", "params", "n", "seed")}
    spec_path.write_text(json.dumps(spec, indent=2, sort_keys=True) + "\n")
    click.echo(f"wrote {sample_path}")
    click.echo(f"wrote {spec_path}")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve_cmd(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("volratio.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
