"""Inference pipeline: catalog, preprocessing, job client, mock backend."""
from .avi import AviError, read_avi, write_avi
from .catalog import (
    CatalogError,
    InferenceParams,
    ModelSpec,
    load_catalog,
    mock_catalog,
    orientation_of,
    resolve_resolution,
)
from .client import GenerationResult, submit_and_poll
from .mock import MockBackendServer, mock_frames, mock_generate
from .preprocess import ALLOWED_MIME, PAD_GRAY, PayloadError, encode_image_payload, letterbox
from .runner import compute_run_id, load_manifest, run_suite

__all__ = [
    "ALLOWED_MIME",
    "PAD_GRAY",
    "AviError",
    "CatalogError",
    "GenerationResult",
    "InferenceParams",
    "MockBackendServer",
    "ModelSpec",
    "PayloadError",
    "compute_run_id",
    "encode_image_payload",
    "letterbox",
    "load_catalog",
    "load_manifest",
    "mock_catalog",
    "mock_frames",
    "mock_generate",
    "orientation_of",
    "read_avi",
    "resolve_resolution",
    "run_suite",
    "submit_and_poll",
    "write_avi",
]
