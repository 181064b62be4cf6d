"""HTTP wrapper around the runner.

POST /run takes a config document plus seed/threads, executes the job
in-process, and reports the artifact paths it wrote under the service's
output directory. GET /health is a liveness probe.
"""
from __future__ import annotations

import os
from typing import Optional

from fastapi import FastAPI
from pydantic import BaseModel, ConfigDict

from .. import __version__
from .config import ConfigError, RunConfig
from .initial_data import BadSpec
from .runner import run

__all__ = ["create_app", "RunRequest", "RunResponse", "app"]


class RunRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: RunConfig
    seed: Optional[int] = None
    threads: int = 1


class RunResponse(BaseModel):
    status: str            # ok | blowup | error
    exit_code: int
    artifacts: dict
    summary: dict
    message: Optional[str] = None


def create_app(out_dir: str | None = None) -> FastAPI:
    base = out_dir or os.environ.get("CRESTWAVE_OUT", ".")
    app = FastAPI(title="crestwave", version=__version__)

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/run", response_model=RunResponse)
    def run_job(req: RunRequest) -> RunResponse:
        try:
            result = run(req.config, base, req.seed, req.threads)
        except (BadSpec, ConfigError) as exc:
            return RunResponse(status="error", exit_code=2, artifacts={},
                               summary={}, message=str(exc))
        status = "ok" if result.exit_code == 0 else "blowup"
        return RunResponse(status=status, exit_code=result.exit_code,
                           artifacts=result.artifacts, summary=result.summary)

    return app


app = create_app()
