"""Shared fixtures: codebooks, fish corpus, and GloVe-like surrogate embeddings."""

from __future__ import annotations

import numpy as np
import pytest

from holovec.codebook import build_codebook
from holovec.encoder import AnnotatedToken, EmbeddingTable


@pytest.fixture(scope="session")
def default_codebook():
    return build_codebook()


@pytest.fixture(scope="session")
def small_codebook():
    """Cheap low-dimensional codebook for plumbing tests (not accuracy tests)."""
    return build_codebook(["NN", "VB", "NNP", "JJ", "DT"], ["PERSON", "ORG"], dimension=16, seed=3)


FISH_ANNOTATIONS = [
    AnnotatedToken("fish", "VB", None, line=1),
    AnnotatedToken("fish", "NN", None, line=2),
    AnnotatedToken("Fish", "NNP", "PERSON", line=3),
]


def fish_table(dimension: int, seed: int = 101) -> EmbeddingTable:
    rng = np.random.default_rng(seed)
    return EmbeddingTable(
        dimension=dimension,
        entries={"fish": rng.normal(0.0, np.sqrt(1.0 / dimension), dimension)},
    )


def make_surrogate_table(
    n_words: int,
    dimension: int,
    seed: int,
    n_clusters: int = 400,
    common_weight: float = 0.08,
    cluster_weight: float = 0.50,
) -> EmbeddingTable:
    """Dense vectors with pre-trained-embedding statistics.

    Not quasi-orthogonal by construction: every vector shares a common
    direction (anisotropy), words fall into semantic clusters with high
    within-cluster cosine, and norms are lognormal around 5 like the large
    GloVe models. Used wherever a test needs realistic filler statistics.
    """
    rng = np.random.default_rng(seed)
    common = rng.normal(0.0, 1.0, dimension)
    common /= np.linalg.norm(common)
    centers = rng.normal(0.0, 1.0, (n_clusters, dimension))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    cluster_of = rng.integers(0, n_clusters, n_words)
    noise = rng.normal(0.0, 1.0, (n_words, dimension))
    noise /= np.linalg.norm(noise, axis=1, keepdims=True)
    directions = (
        np.sqrt(common_weight) * common
        + np.sqrt(cluster_weight) * centers[cluster_of]
        + np.sqrt(1.0 - common_weight - cluster_weight) * noise
    )
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    norms = np.exp(rng.normal(np.log(5.2), 0.25, n_words))
    vectors = directions * norms[:, None]
    entries = {f"w{i:05d}": vectors[i] for i in range(n_words)}
    return EmbeddingTable(dimension=dimension, entries=entries)


def make_annotated_corpus(
    words: list[str],
    pos_tags: list[str],
    ner_types: list[str],
    seed: int,
    profiles_per_word: tuple[int, int] = (2, 3),
    ner_fraction: float = 0.15,
    oov_words: int = 0,
) -> list[AnnotatedToken]:
    """Give each word a few random (POS, NER) usage profiles, plus optional OOV tokens."""
    rng = np.random.default_rng(seed)
    tokens = []
    line = 0
    surfaces = list(words) + [f"oov{i:05d}" for i in range(oov_words)]
    for surface in surfaces:
        for _ in range(int(rng.integers(profiles_per_word[0], profiles_per_word[1] + 1))):
            line += 1
            ner = None
            if rng.random() < ner_fraction:
                ner = ner_types[int(rng.integers(len(ner_types)))]
            tokens.append(
                AnnotatedToken(
                    surface=surface,
                    pos_tag=pos_tags[int(rng.integers(len(pos_tags)))],
                    ner_type=ner,
                    line=line,
                )
            )
    return tokens


def brute_force_neighbors(space, core, k):
    """Oracle: all pairwise cosines via the raw formula, sorted by (-cos, key)."""
    sims = []
    for key, vec in space.items():
        if key == core:
            continue
        a, b = np.asarray(space[core]), np.asarray(vec)
        cos = float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))
        sims.append((key, cos))
    sims.sort(key=lambda pair: (-pair[1], pair[0]))
    return sims[:k]


def brute_force_classify(original, compressed, cores, k):
    """Oracle for the identity-keyed case: classify by the definition."""
    same = shifted = disjoint = denom = 0
    for core in sorted(set(cores)):
        top_a = [key for key, _ in brute_force_neighbors(original, core, k)]
        top_b = [key for key, _ in brute_force_neighbors(compressed, core, k)]
        denom += len(top_a)
        inter = set(top_a) & set(top_b)
        same_here = sum(1 for key in inter if top_a.index(key) == top_b.index(key))
        same += same_here
        shifted += len(inter) - same_here
        disjoint += len(top_a) - len(inter)
    return same / denom, shifted / denom, disjoint / denom


def write_vector_file(path, entries: dict[str, np.ndarray]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, vec in entries.items():
            fh.write(key + " " + " ".join(repr(v) for v in np.asarray(vec).tolist()) + "\n")


def write_annotation_file(path, tokens: list[AnnotatedToken]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in tokens:
            fh.write(f"{t.surface}\t{t.pos_tag}\t{t.ner_type or '-'}\n")
