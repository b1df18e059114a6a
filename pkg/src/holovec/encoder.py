"""Compressed-vocabulary construction from an embedding table plus annotations.

Each annotated token (surface, POS tag, optional NER type) becomes one
fixed-dimension vector: a frame label plus slot-label bindings for the
token embedding, the POS filler, and the NER filler when present, averaged
over the number of summands. Tokens sharing the lowercased surface, POS
tag, and NER type collapse onto one composite key.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from . import hrr
from ._fileio import atomic_write_text
from .codebook import SLOT_NER, SLOT_POS, SLOT_TOKEN, Codebook
from .errors import (
    DimensionMismatchError,
    IntegrityError,
    ParseError,
    UnknownTagError,
)

__all__ = [
    "AnnotatedToken",
    "BuildStats",
    "CompressedVocabulary",
    "EmbeddingTable",
    "FILLER_EXACT",
    "FILLER_LOWERCASED",
    "FILLER_UNKNOWN",
    "VocabEntry",
    "build_vocabulary",
    "composite_key",
    "compress_token",
    "load_vocabulary",
    "lookup_filler",
    "read_annotations",
    "read_embeddings",
    "read_vectors",
    "write_sidecar",
    "write_vectors",
    "write_vocabulary",
]

FILLER_EXACT = "exact"
FILLER_LOWERCASED = "lowercased"
FILLER_UNKNOWN = "unknown"

_SIDECAR_FORMAT = "holovec-vocabulary-meta"
_SIDECAR_VERSION = 1


@dataclass(frozen=True)
class AnnotatedToken:
    """One token occurrence; ``line`` is source-file provenance for diagnostics."""

    surface: str
    pos_tag: str
    ner_type: str | None = None
    line: int | None = None

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        if not self.pos_tag:
            raise ValueError(f"token {self.surface!r} has an empty POS tag")
        if self.ner_type == "":
            raise ValueError(f"token {self.surface!r} has an empty NER type")


@dataclass
class EmbeddingTable:
    dimension: int
    entries: dict[str, np.ndarray]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, surface: str) -> bool:
        return surface in self.entries


@dataclass(frozen=True)
class VocabEntry:
    vector: np.ndarray
    component_count: int
    filler_source: str
    word_type: str
    pos_tag: str
    ner_type: str | None


@dataclass
class BuildStats:
    input_tokens: int = 0
    distinct_word_types: int = 0
    distinct_keys: int = 0
    unknown_filler_entries: int = 0

    @property
    def growth_ratio(self) -> float | None:
        if self.distinct_word_types == 0:
            return None
        return self.distinct_keys / self.distinct_word_types


@dataclass
class CompressedVocabulary:
    dimension: int
    entries: dict[str, VocabEntry] = field(default_factory=dict)
    stats: BuildStats = field(default_factory=BuildStats)

    def __len__(self) -> int:
        return len(self.entries)

    def as_space(self) -> dict[str, np.ndarray]:
        """Plain key -> vector view for similarity scans."""
        return {key: entry.vector for key, entry in self.entries.items()}


def composite_key(token: AnnotatedToken) -> str:
    """Lowercased surface, then POS tag, then NER type, with no separators."""
    return token.surface.lower() + token.pos_tag + (token.ner_type or "")


def lookup_filler(
    surface: str, table: EmbeddingTable, cb: Codebook
) -> tuple[np.ndarray, str]:
    """Resolve the token filler: exact-case hit, then lowercase, then unknown."""
    vec = table.entries.get(surface)
    if vec is not None:
        return vec, FILLER_EXACT
    vec = table.entries.get(surface.lower())
    if vec is not None:
        return vec, FILLER_LOWERCASED
    return cb.unknown_token, FILLER_UNKNOWN


def _tag_vectors(token: AnnotatedToken, cb: Codebook) -> tuple[np.ndarray, np.ndarray | None]:
    pos_vec = cb.pos_fillers.get(token.pos_tag)
    if pos_vec is None:
        where = f"line {token.line}" if token.line is not None else "token"
        raise UnknownTagError(
            f"{where}: POS tag {token.pos_tag!r} is not in the codebook"
        )
    ner_vec = None
    if token.ner_type is not None:
        ner_vec = cb.ner_fillers.get(token.ner_type)
        if ner_vec is None:
            where = f"line {token.line}" if token.line is not None else "token"
            raise UnknownTagError(
                f"{where}: NER type {token.ner_type!r} is not in the codebook"
            )
    return pos_vec, ner_vec


def compress_token(
    token: AnnotatedToken, table: EmbeddingTable, cb: Codebook
) -> tuple[np.ndarray, int]:
    """Compress one token into (vector, component count m).

    m is 4 when the token carries an NER type (frame + three bindings),
    otherwise 3; the sum is divided by m.
    """
    if table.dimension != cb.dimension:
        raise DimensionMismatchError(
            f"embedding dimension {table.dimension} differs from codebook dimension {cb.dimension}"
        )
    filler, _ = lookup_filler(token.surface, table, cb)
    pos_vec, ner_vec = _tag_vectors(token, cb)
    terms = [
        cb.frame_label,
        hrr.circular_convolve_fft(cb.slot_labels[SLOT_TOKEN], filler),
        hrr.circular_convolve_fft(cb.slot_labels[SLOT_POS], pos_vec),
    ]
    if ner_vec is not None:
        terms.append(hrr.circular_convolve_fft(cb.slot_labels[SLOT_NER], ner_vec))
    m = len(terms)
    return hrr.superpose(terms, m), m


def build_vocabulary(
    tokens: Iterable[AnnotatedToken],
    table: EmbeddingTable,
    cb: Codebook,
    threads: int = 1,
) -> CompressedVocabulary:
    """One entry per distinct composite key; the first occurrence wins.

    Vectors are computed once per key, so the result is independent of
    stream order beyond which occurrence is first, and independent of the
    thread count.
    """
    if table.dimension != cb.dimension:
        raise DimensionMismatchError(
            f"embedding dimension {table.dimension} differs from codebook dimension {cb.dimension}"
        )

    firsts: dict[str, AnnotatedToken] = {}
    word_types: set[str] = set()
    total = 0
    for token in tokens:
        total += 1
        word_types.add(token.surface.lower())
        _tag_vectors(token, cb)  # validate tags eagerly, with line diagnostics
        key = composite_key(token)
        if key not in firsts:
            firsts[key] = token

    keys = list(firsts)
    if threads > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vectors = list(pool.map(lambda k: compress_token(firsts[k], table, cb), keys))
    else:
        vectors = [compress_token(firsts[k], table, cb) for k in keys]

    entries: dict[str, VocabEntry] = {}
    unknown = 0
    for key, (vec, m) in zip(keys, vectors):
        token = firsts[key]
        _, source = lookup_filler(token.surface, table, cb)
        if source == FILLER_UNKNOWN:
            unknown += 1
        entries[key] = VocabEntry(
            vector=vec,
            component_count=m,
            filler_source=source,
            word_type=token.surface.lower(),
            pos_tag=token.pos_tag,
            ner_type=token.ner_type,
        )

    stats = BuildStats(
        input_tokens=total,
        distinct_word_types=len(word_types),
        distinct_keys=len(entries),
        unknown_filler_entries=unknown,
    )
    return CompressedVocabulary(dimension=cb.dimension, entries=entries, stats=stats)


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def read_vectors(
    path: str | Path, expected_dimension: int | None = None
) -> tuple[int, dict[str, np.ndarray]]:
    """Read a text vector file: ``key v1 v2 ... vn`` per line, single spaces.

    The dimension is inferred from the first record unless
    ``expected_dimension`` pins it. Malformed lines are reported by number.
    """
    path = Path(path)
    dimension = expected_dimension
    entries: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            fields = line.split(" ")
            if len(fields) < 2:
                raise ParseError(f"{path}:{lineno}: expected 'key value...' fields")
            key = fields[0]
            if not key:
                raise ParseError(f"{path}:{lineno}: empty key")
            if dimension is None:
                dimension = len(fields) - 1
            elif len(fields) - 1 != dimension:
                raise ParseError(
                    f"{path}:{lineno}: expected {dimension} values, got {len(fields) - 1}"
                )
            try:
                vec = np.asarray(fields[1:], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-numeric value ({exc})") from exc
            if not np.all(np.isfinite(vec)):
                raise ParseError(f"{path}:{lineno}: non-finite value")
            if key in entries:
                raise IntegrityError(f"{path}:{lineno}: duplicate key {key!r}")
            entries[key] = vec
    if dimension is None:
        raise ParseError(f"{path}: file contains no records")
    return dimension, entries


def read_embeddings(
    path: str | Path, expected_dimension: int | None = None
) -> EmbeddingTable:
    dimension, entries = read_vectors(path, expected_dimension)
    return EmbeddingTable(dimension=dimension, entries=entries)


def write_vectors(path: str | Path, entries: dict[str, np.ndarray]) -> None:
    """Write the text vector format with full-precision decimal values."""
    lines = []
    for key, vec in entries.items():
        values = " ".join(repr(v) for v in vec.tolist())
        lines.append(f"{key} {values}\n")
    atomic_write_text(path, "".join(lines))


def read_annotations(path: str | Path) -> list[AnnotatedToken]:
    """Read tab-separated annotations: surface, POS tag, NER type or ``-``.

    Blank lines are ignored; every token keeps its 1-based line number.
    """
    path = Path(path)
    tokens: list[AnnotatedToken] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(
                    f"{path}:{lineno}: expected 3 tab-separated fields, got {len(fields)}"
                )
            surface, pos_tag, ner = fields
            try:
                tokens.append(
                    AnnotatedToken(
                        surface=surface,
                        pos_tag=pos_tag,
                        ner_type=None if ner == "-" else ner,
                        line=lineno,
                    )
                )
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    return tokens


def write_vocabulary(path: str | Path, vocab: CompressedVocabulary) -> None:
    """Write compressed vectors keyed by composite key, in build order."""
    write_vectors(path, vocab.as_space())


def write_sidecar(path: str | Path, vocab: CompressedVocabulary) -> None:
    """Write the vocabulary metadata document (per-key facts plus build stats)."""
    doc = {
        "format": _SIDECAR_FORMAT,
        "format_version": _SIDECAR_VERSION,
        "dimension": vocab.dimension,
        "stats": {
            "input_tokens": vocab.stats.input_tokens,
            "distinct_word_types": vocab.stats.distinct_word_types,
            "distinct_keys": vocab.stats.distinct_keys,
            "growth_ratio": vocab.stats.growth_ratio,
            "unknown_filler_entries": vocab.stats.unknown_filler_entries,
        },
        "entries": {
            key: {
                "component_count": e.component_count,
                "filler_source": e.filler_source,
                "word_type": e.word_type,
                "pos_tag": e.pos_tag,
                "ner_type": e.ner_type,
            }
            for key, e in vocab.entries.items()
        },
    }
    atomic_write_text(path, json.dumps(doc, separators=(",", ":")) + "\n")


def _read_sidecar(path: str | Path) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict) or doc.get("format") != _SIDECAR_FORMAT:
        raise ParseError(f"{path}: not a vocabulary metadata document")
    for fieldname in ("dimension", "stats", "entries"):
        if fieldname not in doc:
            raise ParseError(f"{path}: missing field {fieldname!r}")
    return doc


def load_vocabulary(
    vectors_path: str | Path, sidecar_path: str | Path
) -> CompressedVocabulary:
    """Rebuild a CompressedVocabulary from its vector file and sidecar."""
    dimension, vectors = read_vectors(vectors_path)
    doc = _read_sidecar(sidecar_path)
    if doc["dimension"] != dimension:
        raise IntegrityError(
            f"{sidecar_path}: declares dimension {doc['dimension']}, "
            f"vector file has {dimension}"
        )
    meta = doc["entries"]
    missing = set(vectors) - set(meta)
    if missing:
        raise IntegrityError(
            f"{sidecar_path}: no metadata for key {sorted(missing)[0]!r}"
        )
    extra = set(meta) - set(vectors)
    if extra:
        raise IntegrityError(
            f"{sidecar_path}: metadata for absent key {sorted(extra)[0]!r}"
        )
    entries = {}
    for key, vec in vectors.items():
        m = meta[key]
        entries[key] = VocabEntry(
            vector=vec,
            component_count=int(m["component_count"]),
            filler_source=str(m["filler_source"]),
            word_type=str(m["word_type"]),
            pos_tag=str(m["pos_tag"]),
            ner_type=None if m["ner_type"] is None else str(m["ner_type"]),
        )
    st = doc["stats"]
    stats = BuildStats(
        input_tokens=int(st.get("input_tokens", 0)),
        distinct_word_types=int(st.get("distinct_word_types", 0)),
        distinct_keys=int(st.get("distinct_keys", len(entries))),
        unknown_filler_entries=int(st.get("unknown_filler_entries", 0)),
    )
    return CompressedVocabulary(dimension=dimension, entries=entries, stats=stats)
