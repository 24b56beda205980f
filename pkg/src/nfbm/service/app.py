"""FastAPI service exposing single-point analyses and the three sweeps.

Sweep endpoints return JSON rows by default; ``?format=csv`` returns the
exact CSV text the experiments module writes, so clients saving the body get
byte-identical files to a local run.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__
from ..experiments import (
    ConfigError,
    point_analysis,
    rows_to_csv,
    run_distance_sweep,
    run_dof_sweep,
    run_snr_sweep,
)
from .models import (
    ActivationEntry,
    CapacityResponse,
    DofResponse,
    ExperimentRequest,
    HealthResponse,
    SweepResponse,
    SweepRowModel,
)

TOP_PROBABILITIES = 5

_SWEEPS = {
    "dof": run_dof_sweep,
    "snr": run_snr_sweep,
    "distance": run_distance_sweep,
}


def create_app() -> FastAPI:
    app = FastAPI(
        title="nfbm",
        version=__version__,
        description="Near-field XL-MIMO beamspace-modulation capacity simulator",
    )

    @app.exception_handler(ConfigError)
    @app.exception_handler(ValueError)
    async def bad_config(request: Request, exc: Exception):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/analysis/capacity", response_model=CapacityResponse)
    def capacity(request: ExperimentRequest):
        config = request.to_config()
        point = point_analysis(config)
        probs = point.distribution.probabilities
        order = np.argsort(probs)[::-1][:TOP_PROBABILITIES]
        top = [
            ActivationEntry(
                candidate_index=int(i),
                subset=list(point.candidates.subsets[i]),
                probability=float(probs[i]),
                log2_det=float(point.stats.log2_dets[i]),
            )
            for i in order
        ]
        return CapacityResponse(
            distance_m=point.scene.distance,
            snr_db=point.snr.snr_db,
            snr_mode=config.snr_mode,
            dof=point.decomposition.dof,
            k=len(point.candidates),
            n_rf_eff=point.candidates.n_rf_eff,
            truncated=point.candidates.truncation_flag,
            c_bm_asymptotic=point.c_bm_asymptotic,
            c_bbs=point.c_bbs,
            gap=point.gap,
            se_upper_bound_at_p=point.se_upper_bound_at_p,
            fraunhofer_distance_m=point.fraunhofer_distance,
            top_probabilities=top,
        )

    @app.post("/analysis/dof", response_model=DofResponse)
    def dof(request: ExperimentRequest):
        config = request.to_config()
        point = point_analysis(config)
        s = point.decomposition.singular_values
        leading = (s / s[0])[: min(16, point.decomposition.dof + 2)]
        return DofResponse(
            distance_m=point.scene.distance,
            carrier_frequency_hz=point.scene.carrier_frequency,
            wavelength_m=point.scene.wavelength,
            tx_aperture_m=point.scene.tx_array.aperture,
            rx_aperture_m=point.scene.rx_array.aperture,
            fraunhofer_distance_m=point.fraunhofer_distance,
            within_near_field=point.scene.distance < point.fraunhofer_distance,
            dof=point.decomposition.dof,
            k=len(point.candidates),
            leading_relative_amplitudes=[float(v) for v in leading],
        )

    def sweep_endpoint(kind):
        runner = _SWEEPS[kind]

        def endpoint(
            request: ExperimentRequest,
            format: str = Query("json", pattern="^(json|csv)$"),
        ):
            config = request.to_config()
            rows = runner(config)
            if format == "csv":
                return PlainTextResponse(rows_to_csv(rows), media_type="text/csv")
            return SweepResponse(
                kind=kind,
                row_count=len(rows),
                rows=[SweepRowModel(**dataclasses.asdict(row)) for row in rows],
            )

        endpoint.__name__ = f"sweep_{kind}"
        return endpoint

    for kind in _SWEEPS:
        app.post(f"/sweeps/{kind}", response_model=SweepResponse)(sweep_endpoint(kind))

    return app


app = create_app()
