"""FastAPI service wrapping the core package.

Endpoints are synchronous and stateless: every request carries its own
data and seed, so identical requests produce identical responses.
"""

from __future__ import annotations

import time

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..checks import fefferman_check, hp_duality_pair, hp_lpmo_check
from ..config import RunConfig
from ..corpus import gen_corpus
from ..dyadic import lp_norm
from ..errors import (
    InvalidInput,
    InvalidParameter,
    NotPositive,
    OpvalError,
    ParseError,
    ShapeError,
    TooLarge,
    Unsupported,
)
from ..norms import (
    bmo_col_norm,
    bmo_norm,
    bmo_row_norm,
    hardy_col_norm,
    hardy_norm,
    hardy_row_norm,
    lpmo_col_norm,
    mean_osc_bmo_norm,
)
from ..serialize import field_to_dict, step_from_dict, step_to_dict
from ..verify import run_verify
from ..wavelets import analyze, wavelet_basis
from .models import (
    AnalyzeRequest,
    CorpusRequest,
    CorpusResponse,
    HealthResponse,
    NamedFunction,
    NormsRequest,
    NormsResponse,
    PairRequest,
    PairResponse,
    VerifyRequest,
    VerifyResponse,
)

app = FastAPI(title="opval", description="Matrix-valued wavelet norms and checks")

_INPUT_ERRORS = (ParseError, InvalidInput, InvalidParameter, ShapeError, TooLarge, Unsupported, NotPositive)


@app.exception_handler(OpvalError)
def _opval_error_handler(request: Request, exc: OpvalError):
    status = 400 if isinstance(exc, _INPUT_ERRORS) else 500
    detail = {"error": type(exc).__name__, "detail": str(exc)}
    if isinstance(exc, ParseError) and exc.field is not None:
        detail["field"] = exc.field
    return JSONResponse(status_code=status, content=detail)


def _basis_from(model):
    return wavelet_basis(
        model.kind,
        delta_log2=model.delta_log2,
        radius=model.radius,
        decay_m=model.decay_m,
    )


@app.get("/health", response_model=HealthResponse)
def health():
    return HealthResponse(status="ok", version=__version__)


@app.post("/analyze", response_model=dict)
def analyze_endpoint(req: AnalyzeRequest):
    f = step_from_dict(req.function.model_dump())
    basis = _basis_from(req.basis)
    field = analyze(
        f,
        basis,
        level_min=req.level_min,
        level_max=req.level_max,
        with_scaling=req.with_scaling,
    )
    return field_to_dict(field)


@app.post("/norms", response_model=NormsResponse)
def norms_endpoint(req: NormsRequest):
    start = time.monotonic()
    f = step_from_dict(req.function.model_dump())
    basis = _basis_from(req.basis)
    report = {
        "basis": req.basis.kind,
        "dim": f.dim,
        "depth": f.depth,
        "support": {"lo": f.lo, "hi": f.hi},
        "lp": {},
        "H_c": {},
        "H_r": {},
        "H": {},
        "L_MO_c": {},
    }
    for p in req.p_list:
        key = f"{p:g}"
        report["lp"][key] = lp_norm(f, p)
        report["H_c"][key] = hardy_col_norm(f, p, basis)
        report["H_r"][key] = hardy_row_norm(f, p, basis)
        report["H"][key] = hardy_norm(
            f,
            p,
            basis,
            starts=req.descent_starts,
            iters=req.descent_iters,
            seed=req.seed,
        ).to_dict()
        if p > 2:
            report["L_MO_c"][key] = lpmo_col_norm(
                f, p, basis, ascent_iters=req.ascent_iters, seed=req.seed
            ).to_dict()
    report["BMO_c"] = bmo_col_norm(f, basis)
    report["BMO_r"] = bmo_row_norm(f, basis)
    report["BMO"] = bmo_norm(f, basis)
    report["BMO_mean_osc"] = mean_osc_bmo_norm(f)
    return NormsResponse(report=report, elapsed_seconds=time.monotonic() - start)


@app.post("/pair", response_model=PairResponse)
def pair_endpoint(req: PairRequest):
    phi = step_from_dict(req.phi.model_dump())
    f = step_from_dict(req.f.model_dump())
    basis = _basis_from(req.basis)
    reports = []
    reports.append(fefferman_check(phi, f, basis).to_dict())
    if 1.0 < req.p < 2.0:
        reports.append(hp_lpmo_check(phi, f, req.p, basis).to_dict())
    if 1.0 < req.p < float("inf"):
        reports.append(hp_duality_pair(phi, f, req.p, basis).to_dict())
    all_passed = all(r["pass"] for r in reports if r["asserted"])
    return PairResponse(reports=reports, all_passed=all_passed)


@app.post("/corpus", response_model=CorpusResponse)
def corpus_endpoint(req: CorpusRequest):
    config = RunConfig.from_mapping(req.config)
    functions = [
        NamedFunction(name=name, function=step_to_dict(f)) for name, f in gen_corpus(config)
    ]
    return CorpusResponse(functions=functions)


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest):
    config = RunConfig.from_mapping(req.config)
    reports, all_passed = run_verify(config)
    return VerifyResponse(
        reports=[r.to_dict() for r in reports],
        all_passed=all_passed,
        failed_checks=[r.name for r in reports if r.asserted and not r.passed],
    )
