"""Recover POS, NER, and token identity from compressed vectors.

Unbinding multiplies the compressed vector back up by its component count,
subtracts the frame label (known, so removing it cuts noise), and
correlates with the slot label; cleanup against a candidate set then names
the filler. All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hrr
from .codebook import SLOT_NER, SLOT_POS, SLOT_TOKEN, Codebook, cleanup
from .encoder import EmbeddingTable

__all__ = ["DecodedToken", "decode_attributes", "decode_token_identity", "unbind_slot"]


@dataclass(frozen=True)
class DecodedToken:
    pos_tag: str
    pos_similarity: float
    ner_type: str | None = None
    ner_similarity: float | None = None
    token_key: str | None = None
    token_similarity: float | None = None

    def with_token(self, key: str, similarity: float) -> "DecodedToken":
        """Attach a token-identity result from `decode_token_identity`."""
        return DecodedToken(
            pos_tag=self.pos_tag,
            pos_similarity=self.pos_similarity,
            ner_type=self.ner_type,
            ner_similarity=self.ner_similarity,
            token_key=key,
            token_similarity=similarity,
        )


def unbind_slot(
    compressed: np.ndarray,
    slot_label: np.ndarray,
    m: int,
    frame_label: np.ndarray,
) -> np.ndarray:
    """Estimate a slot's filler: correlate(slot, m * compressed - frame).

    The result is the filler plus crosstalk noise from the other bindings;
    it is not normalized because cleanup's cosine is scale-invariant.
    """
    if m < 1:
        raise ValueError(f"component count must be >= 1, got {m}")
    compressed = np.asarray(compressed, dtype=np.float64)
    return hrr.circular_correlate_fft(slot_label, m * compressed - frame_label)


def decode_attributes(compressed: np.ndarray, m: int, cb: Codebook) -> DecodedToken:
    """Decode the POS tag, and the NER type when m indicates one was bound."""
    if m not in (3, 4):
        raise ValueError(f"component count must be 3 or 4, got {m}")
    pos_query = unbind_slot(compressed, cb.slot_labels[SLOT_POS], m, cb.frame_label)
    pos_tag, pos_sim = cleanup(pos_query, cb.pos_fillers)
    if m == 3:
        return DecodedToken(pos_tag=pos_tag, pos_similarity=pos_sim)
    ner_query = unbind_slot(compressed, cb.slot_labels[SLOT_NER], m, cb.frame_label)
    ner_type, ner_sim = cleanup(ner_query, cb.ner_fillers)
    return DecodedToken(
        pos_tag=pos_tag,
        pos_similarity=pos_sim,
        ner_type=ner_type,
        ner_similarity=ner_sim,
    )


def decode_token_identity(
    compressed: np.ndarray, m: int, cb: Codebook, table: EmbeddingTable
) -> tuple[str, float]:
    """Best-matching table entry for the token slot, with its similarity.

    No thresholding happens here; the caller judges whether the similarity
    is convincing. Pre-trained embeddings are not mutually quasi-orthogonal,
    so identity decoding is noisier than attribute decoding.
    """
    if not table.entries:
        raise ValueError("decode_token_identity() requires a non-empty table")
    query = unbind_slot(compressed, cb.slot_labels[SLOT_TOKEN], m, cb.frame_label)
    return cleanup(query, table.entries)
