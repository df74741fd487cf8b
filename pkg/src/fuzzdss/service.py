"""HTTP+JSON API over the inference engine, store, and reports.

Error codes (closed set): `bad_request`, `unknown_variable`,
`out_of_universe`, `bad_grid_request`, `invalid_record`, `store_locked`,
`store_not_configured`. A no_rule_fired evaluation is a 200 domain
outcome, never a transport error.
"""
from __future__ import annotations

import datetime as dt
import io
from typing import Optional, Sequence

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .core import (
    Model,
    ModelConsistencyError,
    OutOfUniverseError,
    Shape,
    infer,
)
from .dsl import serialize_model
from .reporting import (
    batch_infer,
    batch_results,
    frequency_report,
    frequency_report_json,
    inference_result_json,
    surface_grid,
    surface_grid_json,
)
from .store import ReferralRecord, ReferralStore, StoreLockedError, parse_referral_csv


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details=None):
        self.status = status
        self.code = code
        self.message = message
        self.details = details or {}


def _model_json(model: Model) -> dict:
    def var_json(var):
        return {
            "name": var.name,
            "display_name": var.display_name,
            "range": [var.universe_min, var.universe_max],
            "terms": [
                {
                    "label": t.label,
                    "shape": t.mf.shape.value,
                    "a": t.mf.a,
                    **({"b": t.mf.b} if t.mf.shape is Shape.TRIANGLE else {}),
                    "c": t.mf.c,
                }
                for t in var.terms
            ],
        }

    return {
        "name": model.name,
        "inputs": [var_json(v) for v in model.inputs],
        "output": var_json(model.output),
        "bands": [
            {"label": b.label, "lower": b.lower, "upper": b.upper}
            for b in model.bands
        ],
        "rules": [
            {"index": i, "text": model.rule_text(i)}
            for i in range(len(model.rules))
        ],
        "fzm": serialize_model(model),
    }


def create_app(
    model: Model,
    store_path: Optional[str] = None,
    cors_origins: Sequence[str] = (),
) -> FastAPI:
    app = FastAPI(title="fuzzdss", docs_url=None, redoc_url=None)
    store = ReferralStore(store_path) if store_path else None

    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={
                "code": exc.code,
                "message": exc.message,
                "details": exc.details,
            },
        )

    def require_store() -> ReferralStore:
        if store is None:
            raise ApiError(503, "store_not_configured", "no referral store configured")
        return store

    @app.post("/api/v1/evaluate")
    async def evaluate(request: Request):
        body = await _json_body(request)
        inputs = body.get("inputs")
        if not isinstance(inputs, dict):
            raise ApiError(400, "bad_request", "body must be {\"inputs\": {name: number}}")
        parsed = {}
        for name, value in inputs.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ApiError(
                    400, "bad_request", f"input '{name}' is not a number"
                )
            parsed[str(name)] = float(value)
        try:
            res = infer(model, parsed)
        except OutOfUniverseError as e:
            raise ApiError(
                422,
                "out_of_universe",
                str(e),
                {"variable": e.variable, "lo": e.lo, "hi": e.hi, "value": e.value},
            )
        except ModelConsistencyError as e:
            raise ApiError(422, "unknown_variable", str(e))
        return inference_result_json(model, res)

    @app.get("/api/v1/model")
    async def get_model():
        return _model_json(model)

    @app.get("/api/v1/surface")
    async def get_surface(request: Request):
        params = request.query_params
        x = params.get("x")
        y = params.get("y")
        if not x or not y:
            raise ApiError(422, "bad_grid_request", "x and y query parameters are required")
        try:
            resolution = int(params.get("resolution", "50"))
        except ValueError:
            raise ApiError(422, "bad_grid_request", "resolution must be an integer")
        fixed = {}
        for key, value in params.items():
            if key.startswith("fixed."):
                try:
                    fixed[key[len("fixed."):]] = float(value)
                except ValueError:
                    raise ApiError(
                        422, "bad_grid_request", f"fixed value '{value}' is not a number"
                    )
        try:
            grid = surface_grid(model, x, y, fixed, resolution)
        except (ValueError, ModelConsistencyError) as e:
            raise ApiError(422, "bad_grid_request", str(e))
        return surface_grid_json(grid)

    @app.post("/api/v1/referrals")
    async def post_referrals(request: Request):
        st = require_store()
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("text/csv"):
            text = (await request.body()).decode("utf-8")
            records, errors = parse_referral_csv(io.StringIO(text))
            if any(e.row == 1 for e in errors):
                raise ApiError(
                    422,
                    "invalid_record",
                    "malformed CSV",
                    {"rows": [{"row": e.row, "message": e.message} for e in errors]},
                )
            if errors:
                raise ApiError(
                    422,
                    "invalid_record",
                    "CSV contains invalid rows",
                    {"rows": [{"row": e.row, "message": e.message} for e in errors]},
                )
        else:
            body = await _json_body(request)
            items = body if isinstance(body, list) else [body]
            records = []
            for i, obj in enumerate(items):
                try:
                    records.append(
                        ReferralRecord.make(
                            student_id=str(obj["student_id"]),
                            date=dt.date.fromisoformat(str(obj["date"])),
                            counts={
                                str(k): float(v) for k, v in obj["counts"].items()
                            },
                        )
                    )
                except (KeyError, TypeError, ValueError, AttributeError) as e:
                    raise ApiError(
                        422, "invalid_record", f"record {i + 1}: {e}"
                    )
            missing_by_record = [
                sorted(set(model.input_names()) - set(r.count_map()))
                for r in records
            ]
            for i, missing in enumerate(missing_by_record):
                if missing:
                    raise ApiError(
                        422,
                        "invalid_record",
                        f"record {i + 1} is missing counts: " + ", ".join(missing),
                        {"missing": missing},
                    )
        try:
            total = st.append(records)
        except StoreLockedError as e:
            raise ApiError(409, "store_locked", str(e))
        return {"stored": len(records), "total_records": total}

    @app.get("/api/v1/reports/frequency")
    async def get_frequency(request: Request):
        st = require_store()
        params = request.query_params

        def parse_date(key):
            raw = params.get(key)
            if not raw:
                return None
            try:
                return dt.date.fromisoformat(raw)
            except ValueError:
                raise ApiError(422, "bad_request", f"bad {key} date '{raw}'")

        records, _ = st.load(
            date_from=parse_date("from"), date_to=parse_date("to")
        )
        items = batch_infer(model, records)
        report = frequency_report(
            batch_results(items), [b.label for b in model.bands]
        )
        return frequency_report_json(report)

    return app


async def _json_body(request: Request):
    try:
        return await request.json()
    except Exception:
        raise ApiError(400, "bad_request", "body is not valid JSON")
