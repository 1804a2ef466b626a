"""Model catalog loading and per-model resolution resolution."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

ENCODINGS = ("base64-inline", "multipart", "local")


class CatalogError(ValueError):
    """Bad catalog file or model entry."""


@dataclass(frozen=True)
class InferenceParams:
    """Standardized generation settings applied to every model."""

    duration_s: float = 8.0
    temperature: float = 0.7  # applied where the model allows
    seed: int = -1

    def __post_init__(self):
        if self.duration_s <= 0:
            raise ValueError(f"duration must be positive, got {self.duration_s}")

    def as_dict(self) -> dict:
        return {"duration_s": self.duration_s, "temperature": self.temperature, "seed": self.seed}


@dataclass(frozen=True)
class ModelSpec:
    name: str
    family: str
    endpoint: str
    landscape_resolution: tuple[int, int]
    portrait_resolution: tuple[int, int]
    encoding: str = "base64-inline"
    auth_env: str | None = None
    poll_interval_s: float = 1.0
    max_wait_s: float = 120.0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        for res in (self.landscape_resolution, self.portrait_resolution):
            if res[0] <= 0 or res[1] <= 0:
                raise CatalogError(f"{self.name}: non-positive resolution {res}")
        if self.encoding not in ENCODINGS:
            raise CatalogError(f"{self.name}: unknown encoding {self.encoding!r}")
        if not self.poll_interval_s < self.max_wait_s:
            raise CatalogError(
                f"{self.name}: poll interval {self.poll_interval_s}s must be below max wait {self.max_wait_s}s"
            )

    def is_mock(self) -> bool:
        return self.endpoint.startswith("mock:")


def resolve_resolution(model: ModelSpec, orientation: str) -> tuple[int, int]:
    if orientation == "landscape":
        return model.landscape_resolution
    if orientation == "portrait":
        return model.portrait_resolution
    raise ValueError(f"orientation must be 'landscape' or 'portrait', got {orientation!r}")


def orientation_of(width: int, height: int) -> str:
    return "landscape" if width >= height else "portrait"


def _entry_to_spec(entry: dict) -> ModelSpec:
    try:
        return ModelSpec(
            name=entry["name"],
            family=entry.get("family", "generic"),
            endpoint=entry["endpoint"],
            landscape_resolution=tuple(entry["landscape_resolution"]),
            portrait_resolution=tuple(entry["portrait_resolution"]),
            encoding=entry.get("encoding", "base64-inline"),
            auth_env=entry.get("auth_env"),
            poll_interval_s=float(entry.get("poll_interval_s", 1.0)),
            max_wait_s=float(entry.get("max_wait_s", 120.0)),
            options=entry.get("options", {}),
        )
    except KeyError as e:
        raise CatalogError(f"catalog entry {entry.get('name', '?')!r} missing field {e}") from None


def load_catalog(path: Path | str) -> list[ModelSpec]:
    path = Path(path)
    if not path.is_file():
        raise CatalogError(f"catalog file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CatalogError(f"bad catalog JSON in {path}: {e.msg} at byte {e.pos}") from None
    entries = doc["models"] if isinstance(doc, dict) else doc
    specs = [_entry_to_spec(e) for e in entries]
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise CatalogError(f"duplicate model names in catalog: {names}")
    return specs


def mock_catalog(modes=("oracle", "lazy")) -> list[ModelSpec]:
    """In-process mock models, one per requested behavior mode."""
    return [
        ModelSpec(
            name=f"mock-{mode}",
            family="mock",
            endpoint=f"mock:{mode}",
            landscape_resolution=(832, 480),
            portrait_resolution=(480, 832),
        )
        for mode in modes
    ]
