"""Read-only HTTP query service over a matrix catalog.

Every endpoint is a pure function of the loaded matrices: restarting the
service (or hitting it concurrently) reproduces identical answers.  The
``text`` field of each result is the canonical tab-separated rendering,
byte-identical to what the CLI writes for the same query.
"""

from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import queries
from .features import assign_features, load_feature_config
from .vecspace import OOVError


class VectorsRequest(BaseModel):
    matrices: list[str] = Field(min_length=1)
    words: list[str] = Field(min_length=1)


class SimilarityRequest(BaseModel):
    matrices: list[str] = Field(min_length=1)
    words: list[str] = Field(min_length=1)
    targets: list[str] = Field(min_length=1)
    measure: str = "cosine"


class NeighborsRequest(BaseModel):
    matrices: list[str] = Field(min_length=1)
    words: list[str] = Field(min_length=1)
    k: int = Field(default=10, ge=1)
    measure: str = "cosine"


class FeaturesRequest(BaseModel):
    target: str
    configRef: str
    pk: float = 0.71
    ck: float = 3.9


def _select(catalog, names):
    try:
        return catalog.select(names)
    except KeyError as exc:
        raise HTTPException(status_code=404, detail={
            "error": "unknown-matrix", "message": str(exc)}) from None


def _payload(results, skipped):
    return {
        "results": [{"text": r.text, **r.data} for r in results],
        "skipped": [{"word": w, "matrix": m} for w, m in skipped],
    }


def create_app(catalog, ui_dir=None):
    """App over a catalog; ``ui_dir`` optionally mounts the explorer SPA."""
    app = FastAPI(title="domavec query service")

    @app.get("/api/matrices")
    def list_matrices():
        return {"matrices": catalog.describe()}

    @app.post("/api/vectors")
    def vectors(req: VectorsRequest):
        mats = _select(catalog, req.matrices)
        return _payload(*queries.query_vectors(mats, req.words))

    @app.post("/api/similarity")
    def similarity(req: SimilarityRequest):
        mats = _select(catalog, req.matrices)
        try:
            results, skipped = queries.query_similarity(
                mats, req.words, req.targets, req.measure)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail={
                "error": "bad-measure", "message": str(exc)}) from None
        return _payload(results, skipped)

    @app.post("/api/neighbors")
    def neighbors(req: NeighborsRequest):
        mats = _select(catalog, req.matrices)
        try:
            results, skipped = queries.query_neighbors(
                mats, req.words, req.k, req.measure)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail={
                "error": "bad-measure", "message": str(exc)}) from None
        return _payload(results, skipped)

    @app.post("/api/features")
    def features(req: FeaturesRequest):
        config_path = Path(req.configRef)
        if not config_path.is_absolute():
            config_path = catalog.base_dir / config_path
        if not config_path.is_file():
            raise HTTPException(status_code=404, detail={
                "error": "unknown-config", "message": str(config_path)})
        config = load_feature_config(config_path)
        needed = config.matrices + ["GENERIC"]
        missing = [n for n in needed if n not in catalog]
        if missing:
            raise HTTPException(status_code=404, detail={
                "error": "unknown-matrix",
                "message": f"catalog lacks {missing}"})
        matrices = {n: catalog.matrix(n) for n in config.matrices}
        try:
            scores = assign_features(req.target, config, matrices,
                                     catalog.matrix("GENERIC"),
                                     pk=req.pk, ck=req.ck)
        except OOVError as exc:
            raise HTTPException(status_code=404, detail={
                "error": "oov", "word": exc.word, "matrix": exc.matrix,
            }) from None
        return {
            "target": req.target,
            "pk": req.pk,
            "ck": req.ck,
            "text": queries.render_feature_report(scores),
            "features": [{
                "feature": s.feature, "sRel": s.s_rel, "sUnrel": s.s_unrel,
                "cT": s.c_t, "fT": s.f_t, "assigned": s.assigned,
            } for s in scores],
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        ui_dir = Path(ui_dir)
        if not (ui_dir / "index.html").is_file():
            raise ValueError(f"--ui directory {ui_dir} has no index.html "
                             "(run the frontend build first)")
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(catalog, bind="127.0.0.1:8571", ui_dir=None):
    """Blocking uvicorn server; in-flight requests complete on shutdown."""
    import uvicorn

    host, _, port = bind.partition(":")
    uvicorn.run(create_app(catalog, ui_dir=ui_dir), host=host or "127.0.0.1",
                port=int(port or 8571), log_level="info")
