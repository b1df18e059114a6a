"""Label-vector codebook: deterministic generation, persistence, cleanup lookup.

A codebook holds every random label vector the encoder needs: one frame
label, three slot labels (token, pos, ner), one filler per POS tag, one
filler per NER type, and the unknown-token vector. All of them are drawn
from a single seeded generator in a fixed order, so (seed, dimension, tag
lists) reproduce the codebook bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from . import hrr
from ._fileio import atomic_write_text
from .errors import DimensionMismatchError, IntegrityError, ParseError

__all__ = [
    "Codebook",
    "DEFAULT_DIMENSION",
    "DEFAULT_SEED",
    "SLOT_NER",
    "SLOT_POS",
    "SLOT_TOKEN",
    "build_codebook",
    "cleanup",
    "default_ner_types",
    "default_pos_tags",
    "load_codebook",
    "read_tag_list",
    "save_codebook",
]

DEFAULT_DIMENSION = 300
DEFAULT_SEED = 42

SLOT_TOKEN = "token"
SLOT_POS = "pos"
SLOT_NER = "ner"

_FORMAT_NAME = "holovec-codebook"
_FORMAT_VERSION = 1


def _read_tag_lines(text: str) -> list[str]:
    return [line.strip() for line in text.splitlines() if line.strip()]


def read_tag_list(path: str | Path) -> list[str]:
    """Read one tag per line; blank lines and surrounding whitespace ignored."""
    tags = _read_tag_lines(Path(path).read_text(encoding="utf-8"))
    if not tags:
        raise ParseError(f"{path}: tag list is empty")
    return tags


def default_pos_tags() -> list[str]:
    """The shipped 50-entry fine-grained English POS tagset."""
    data = resources.files(__package__) / "data" / "pos_tags.txt"
    return _read_tag_lines(data.read_text(encoding="utf-8"))


def default_ner_types() -> list[str]:
    """The shipped 19-entry named-entity typeset."""
    data = resources.files(__package__) / "data" / "ner_types.txt"
    return _read_tag_lines(data.read_text(encoding="utf-8"))


@dataclass(eq=False)
class Codebook:
    """Immutable after construction; shareable across threads."""

    dimension: int
    seed: int
    frame_label: np.ndarray
    slot_labels: dict[str, np.ndarray]
    pos_fillers: dict[str, np.ndarray]
    ner_fillers: dict[str, np.ndarray]
    unknown_token: np.ndarray

    @property
    def pos_tags(self) -> list[str]:
        return list(self.pos_fillers)

    @property
    def ner_types(self) -> list[str]:
        return list(self.ner_fillers)

    @property
    def vector_count(self) -> int:
        return 2 + len(self.slot_labels) + len(self.pos_fillers) + len(self.ner_fillers)

    def all_vectors(self) -> dict[str, np.ndarray]:
        """Every vector under its persistent name, in draw order."""
        out: dict[str, np.ndarray] = {"frame": self.frame_label}
        for slot in (SLOT_TOKEN, SLOT_POS, SLOT_NER):
            out[f"slot:{slot}"] = self.slot_labels[slot]
        for tag, vec in self.pos_fillers.items():
            out[f"pos:{tag}"] = vec
        for typ, vec in self.ner_fillers.items():
            out[f"ner:{typ}"] = vec
        out["unknown"] = self.unknown_token
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Codebook):
            return NotImplemented
        if (self.dimension, self.seed, self.pos_tags, self.ner_types) != (
            other.dimension,
            other.seed,
            other.pos_tags,
            other.ner_types,
        ):
            return False
        mine, theirs = self.all_vectors(), other.all_vectors()
        return all(np.array_equal(mine[name], theirs[name]) for name in mine)


def _check_tags(tags: list[str], kind: str) -> None:
    if not tags:
        raise ValueError(f"{kind} list must not be empty")
    seen = set()
    for tag in tags:
        if not tag:
            raise ValueError(f"{kind} list contains an empty tag")
        if tag in seen:
            raise ValueError(f"duplicate {kind}: {tag!r}")
        seen.add(tag)


def build_codebook(
    pos_tags: list[str] | None = None,
    ner_types: list[str] | None = None,
    dimension: int = DEFAULT_DIMENSION,
    seed: int = DEFAULT_SEED,
) -> Codebook:
    """Draw every label vector from one seeded generator.

    Draw order is fixed and part of the reproducibility contract: frame,
    token slot, pos slot, ner slot, POS fillers in list order, NER fillers
    in list order, unknown-token vector last.
    """
    if dimension < 2:
        raise ValueError(f"dimension must be >= 2, got {dimension}")
    pos_tags = default_pos_tags() if pos_tags is None else list(pos_tags)
    ner_types = default_ner_types() if ner_types is None else list(ner_types)
    _check_tags(pos_tags, "POS tag")
    _check_tags(ner_types, "NER type")

    rng = np.random.default_rng(seed)
    frame = hrr.random_vector(rng, dimension)
    slots = {name: hrr.random_vector(rng, dimension) for name in (SLOT_TOKEN, SLOT_POS, SLOT_NER)}
    pos_fillers = {tag: hrr.random_vector(rng, dimension) for tag in pos_tags}
    ner_fillers = {typ: hrr.random_vector(rng, dimension) for typ in ner_types}
    unknown = hrr.random_vector(rng, dimension)
    return Codebook(
        dimension=dimension,
        seed=seed,
        frame_label=frame,
        slot_labels=slots,
        pos_fillers=pos_fillers,
        ner_fillers=ner_fillers,
        unknown_token=unknown,
    )


def save_codebook(cb: Codebook, destination: str | Path) -> None:
    """Serialize to a single JSON document; floats keep full precision.

    Python renders each float as the shortest decimal string that parses
    back to the identical bits, so load(save(cb)) == cb exactly.
    """
    doc = {
        "format": _FORMAT_NAME,
        "format_version": _FORMAT_VERSION,
        "dimension": cb.dimension,
        "seed": cb.seed,
        "pos_tags": cb.pos_tags,
        "ner_types": cb.ner_types,
        "vectors": {name: vec.tolist() for name, vec in cb.all_vectors().items()},
    }
    atomic_write_text(destination, json.dumps(doc, separators=(",", ":")) + "\n")


def _require(doc: dict, field: str, source: str):
    if field not in doc:
        raise ParseError(f"{source}: missing field {field!r}")
    return doc[field]


def _vector_from_doc(vectors: dict, name: str, dimension: int, source: str) -> np.ndarray:
    if name not in vectors:
        raise ParseError(f"{source}: missing vector {name!r}")
    raw = vectors[name]
    if not isinstance(raw, list):
        raise ParseError(f"{source}: vector {name!r} is not an array")
    vec = np.asarray(raw, dtype=np.float64)
    if vec.ndim != 1 or vec.shape[0] != dimension:
        raise IntegrityError(
            f"{source}: vector {name!r} has length {vec.shape[0] if vec.ndim == 1 else '?'}, "
            f"declared dimension is {dimension}"
        )
    if not np.all(np.isfinite(vec)):
        raise IntegrityError(f"{source}: vector {name!r} contains non-finite values")
    return vec


def load_codebook(source: str | Path) -> Codebook:
    """Parse and validate a codebook document written by `save_codebook`."""
    source = Path(source)
    try:
        doc = json.loads(source.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top-level value is not an object")
    name = _require(doc, "format", str(source))
    if name != _FORMAT_NAME:
        raise ParseError(f"{source}: format is {name!r}, expected {_FORMAT_NAME!r}")

    dimension = _require(doc, "dimension", str(source))
    seed = _require(doc, "seed", str(source))
    pos_tags = _require(doc, "pos_tags", str(source))
    ner_types = _require(doc, "ner_types", str(source))
    vectors = _require(doc, "vectors", str(source))
    if not isinstance(dimension, int) or dimension < 2:
        raise IntegrityError(f"{source}: dimension must be an integer >= 2")
    if not isinstance(seed, int):
        raise IntegrityError(f"{source}: seed must be an integer")
    try:
        _check_tags(pos_tags, "POS tag")
        _check_tags(ner_types, "NER type")
    except ValueError as exc:
        raise IntegrityError(f"{source}: {exc}") from exc

    expected = (
        ["frame"]
        + [f"slot:{s}" for s in (SLOT_TOKEN, SLOT_POS, SLOT_NER)]
        + [f"pos:{t}" for t in pos_tags]
        + [f"ner:{t}" for t in ner_types]
        + ["unknown"]
    )
    extras = set(vectors) - set(expected)
    if extras:
        raise IntegrityError(f"{source}: unexpected vectors {sorted(extras)}")
    named = {n: _vector_from_doc(vectors, n, dimension, str(source)) for n in expected}

    return Codebook(
        dimension=dimension,
        seed=seed,
        frame_label=named["frame"],
        slot_labels={s: named[f"slot:{s}"] for s in (SLOT_TOKEN, SLOT_POS, SLOT_NER)},
        pos_fillers={t: named[f"pos:{t}"] for t in pos_tags},
        ner_fillers={t: named[f"ner:{t}"] for t in ner_types},
        unknown_token=named["unknown"],
    )


def cleanup(query, candidates: Mapping[str, np.ndarray]) -> tuple[str, float]:
    """Nearest candidate by cosine; ties go to the lexicographically smallest key.

    Iteration is over sorted keys, so the result is independent of the
    candidates' insertion order.
    """
    if not candidates:
        raise ValueError("cleanup() requires a non-empty candidate set")
    q = np.asarray(query, dtype=np.float64)
    qn = float(np.linalg.norm(q))
    if qn == 0.0:
        raise ValueError("cleanup() query has zero norm")

    keys = sorted(candidates)
    matrix = np.stack([np.asarray(candidates[k], dtype=np.float64) for k in keys])
    if matrix.shape[1] != q.shape[0]:
        raise DimensionMismatchError(
            f"candidate length {matrix.shape[1]} differs from query length {q.shape[0]}"
        )
    norms = np.linalg.norm(matrix, axis=1)
    zero = np.nonzero(norms == 0.0)[0]
    if zero.size:
        raise ValueError(f"cleanup() candidate {keys[zero[0]]!r} has zero norm")
    sims = (matrix @ q) / (norms * qn)
    best = int(np.argmax(sims))  # first maximum == smallest key among ties
    return keys[best], float(sims[best])
