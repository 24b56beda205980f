"""Command-line client for the simulation service.

By default every subcommand drives the FastAPI app in-process (no server
needed); ``--server URL`` points the same requests at a remote instance.
Human-readable output goes to stdout, diagnostics to stderr, CSV to files.
Exit codes: 0 success, 1 numerical/transport failure, 2 usage/config error.
"""

from __future__ import annotations

import dataclasses
import sys

import click
import httpx

from .experiments import (
    ConfigError,
    ExperimentConfig,
    base_config,
    distance_sweep_config,
    dof_sweep_config,
    load_config,
    parse_override,
    snr_sweep_config,
    validate_config,
)

EXIT_NUMERICAL = 1
EXIT_CONFIG = 2


def _fail(message, code):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


class _InProcessTransport(httpx.BaseTransport):
    """Sync httpx transport that serves requests from the bundled ASGI app."""

    def __init__(self, app):
        self._transport = httpx.ASGITransport(app=app)

    def handle_request(self, request):
        import asyncio

        async def call():
            rebuilt = httpx.Request(
                request.method,
                request.url,
                headers=request.headers,
                content=request.read(),
            )
            response = await self._transport.handle_async_request(rebuilt)
            content = await response.aread()
            await response.aclose()
            return response, content

        response, content = asyncio.run(call())
        return httpx.Response(response.status_code, headers=response.headers, content=content)


def _make_client(server):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    # In-process service; keeps the CLI a pure client while working offline.
    from .service.app import app

    return httpx.Client(transport=_InProcessTransport(app), base_url="http://nfbm.internal")


def _build_config(defaults, config_path, sets, samples, seed, output):
    config = defaults
    if config_path:
        config = load_config(config_path, base=config)
    overrides = {}
    for item in sets:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    if samples is not None:
        overrides["mc_samples"] = str(samples)
    if seed is not None:
        overrides["seed"] = str(seed)
    if output is not None:
        overrides["output_path"] = output
    for key, value in overrides.items():
        config = dataclasses.replace(config, **{key: parse_override(key, value)})
    return validate_config(config)


def _payload(config: ExperimentConfig) -> dict:
    data = dataclasses.asdict(config)
    data["reflection_coefficient"] = str(config.reflection_coefficient)
    for key in ("snr_points", "distance_points", "frequency_points"):
        data[key] = list(data[key])
    return data


def _post(client, path, config, verbose, **params):
    if verbose:
        click.echo(f"POST {path} with config: {config}", err=True)
    try:
        response = client.post(path, json=_payload(config), params=params)
    except httpx.HTTPError as exc:
        _fail(f"request failed: {exc}", EXIT_NUMERICAL)
    if response.status_code >= 500:
        _fail(f"server error: {response.text}", EXIT_NUMERICAL)
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        _fail(f"rejected request: {detail}", EXIT_CONFIG)
    return response


def _common_options(f):
    options = [
        click.option("--config", "config_path", type=click.Path(), default=None,
                     help="Experiment config file (key = value lines)."),
        click.option("--set", "sets", multiple=True, metavar="KEY=VALUE",
                     help="Override a config key (repeatable)."),
        click.option("--output", default=None, type=click.Path(),
                     help="Output CSV path (overrides output_path)."),
        click.option("--samples", default=None, type=int,
                     help="Monte-Carlo samples per point (overrides mc_samples)."),
        click.option("--seed", default=None, type=int, help="RNG seed (overrides seed)."),
        click.option("--server", default=None, metavar="URL",
                     help="Remote service URL (default: run the service in-process)."),
        click.option("--verbose", "-v", is_flag=True, help="Diagnostics on stderr."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


@click.group()
@click.version_option(package_name="nfbm")
def main():
    """Near-field XL-MIMO beamspace-modulation capacity simulator."""


def _prepare(defaults, config_path, sets, samples, seed, output):
    try:
        return _build_config(defaults, config_path, sets, samples, seed, output)
    except ConfigError as exc:
        _fail(str(exc), EXIT_CONFIG)


@main.command()
@_common_options
def capacity(config_path, sets, output, samples, seed, server, verbose):
    """Closed-form capacity report for a single (distance, SNR) point."""
    config = _prepare(base_config(), config_path, sets, samples, seed, output)
    with _make_client(server) as client:
        data = _post(client, "/analysis/capacity", config, verbose).json()
    click.echo(f"distance_m          : {data['distance_m']:g}")
    click.echo(f"snr_db              : {data['snr_db']:g}  ({data['snr_mode']})")
    click.echo(f"dof                 : {data['dof']}")
    click.echo(f"candidates K        : {data['k']}" + ("  (truncated)" if data["truncated"] else ""))
    click.echo(f"n_rf_eff            : {data['n_rf_eff']}")
    click.echo(f"C_BM_asymptotic     : {data['c_bm_asymptotic']:.6f} bits/s/Hz")
    click.echo(f"C_BBS               : {data['c_bbs']:.6f} bits/s/Hz")
    click.echo(f"gap                 : {data['gap']:.6f} bits/s/Hz")
    click.echo(f"SE upper bound at p*: {data['se_upper_bound_at_p']:.6f} bits/s/Hz")
    click.echo(f"fraunhofer_distance : {data['fraunhofer_distance_m']:.3f} m")
    click.echo("top activation probabilities:")
    for entry in data["top_probabilities"]:
        subset = ",".join(str(j) for j in entry["subset"])
        click.echo(
            f"  candidate {entry['candidate_index']:>4} subset {{{subset}}} "
            f"p={entry['probability']:.6f} log2det={entry['log2_det']:.4f}"
        )
    if output is not None:
        from .experiments import SweepRow, write_csv

        row = SweepRow(
            distance_m=data["distance_m"],
            snr_db=data["snr_db"],
            dof=data["dof"],
            k=data["k"],
            c_bm_asymptotic=data["c_bm_asymptotic"],
            c_bbs=data["c_bbs"],
            gap=data["gap"],
        )
        write_csv([row], output)
        click.echo(f"wrote 1 row to {output}")


@main.command()
@_common_options
def dof(config_path, sets, output, samples, seed, server, verbose):
    """Effective spatial DoF and near-field summary for one scene."""
    config = _prepare(base_config(), config_path, sets, samples, seed, output)
    with _make_client(server) as client:
        data = _post(client, "/analysis/dof", config, verbose).json()
    click.echo(f"carrier_frequency   : {data['carrier_frequency_hz']:g} Hz")
    click.echo(f"wavelength          : {data['wavelength_m']:.6g} m")
    click.echo(f"distance            : {data['distance_m']:g} m")
    click.echo(f"tx/rx aperture      : {data['tx_aperture_m']:.4f} / {data['rx_aperture_m']:.4f} m")
    click.echo(f"fraunhofer_distance : {data['fraunhofer_distance_m']:.3f} m")
    click.echo(f"within_near_field   : {data['within_near_field']}")
    click.echo(f"dof                 : {data['dof']}")
    click.echo(f"candidates K        : {data['k']}")
    amplitudes = " ".join(f"{v:.4f}" for v in data["leading_relative_amplitudes"])
    click.echo(f"sigma_j / sigma_1   : {amplitudes}")


def _sweep_command(name, kind, defaults_factory, doc):
    @main.command(name, help=doc)
    @_common_options
    def command(config_path, sets, output, samples, seed, server, verbose):
        config = _prepare(defaults_factory(), config_path, sets, samples, seed, output)
        with _make_client(server) as client:
            response = _post(client, f"/sweeps/{kind}", config, verbose, format="csv")
        text = response.text
        path = config.output_path
        try:
            with open(path, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        except OSError as exc:
            _fail(f"cannot write CSV to {path}: {exc}", EXIT_NUMERICAL)
        rows = text.count("\n") - 1
        click.echo(f"wrote {rows} rows to {path}")

    return command


_sweep_command(
    "sweep-snr", "snr", snr_sweep_config,
    "Spectral efficiency vs SNR for each configured distance.",
)
_sweep_command(
    "sweep-distance", "distance", distance_sweep_config,
    "Spectral efficiency vs distance at the highest configured SNR.",
)
_sweep_command(
    "sweep-dof", "dof", dof_sweep_config,
    "Effective DoF vs distance for each configured carrier frequency.",
)


if __name__ == "__main__":
    main()
