import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from xar.embedder import (
    EmbedConfig,
    HttpEmbedder,
    cosine_similarity,
    embed,
    fnv1a_64,
    hash_embed,
    tokenize,
)
from xar.errors import BackendDimensionMismatch, BackendTimeout, BackendUnavailable, DimensionMismatch

# values produced by an independent reference script (regex tokenizer, direct FNV-1a)
GOLDEN_CAPTION = {12: 1 / 3, 26: 1 / 3, 32: -2 / 3, 34: 1 / 3, 36: 1 / 3, 62: -1 / 3}


def test_fnv_reference_vectors():
    assert fnv1a_64(b"") == 0xCBF29CE484222325
    assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a_64(b"foobar") == 0x85944171F73967E8


def test_tokenize():
    assert tokenize("image-to-text: a person's hand") == ["image", "to", "text", "a", "person", "s", "hand"]
    assert tokenize("OBSTACLE!") == ["obstacle"]
    assert tokenize("  ,, ") == []
    assert tokenize("x_y") == ["x", "y"]


def test_empty_is_zero():
    assert hash_embed("") == (0.0,) * 64
    assert hash_embed("?!") == (0.0,) * 64


def test_case_and_punctuation_insensitive():
    assert hash_embed("obstacle") == hash_embed("OBSTACLE!")


def test_golden_caption_vector():
    vec = hash_embed("image-to-text: a person's hand")
    assert len(vec) == 64
    for i, value in enumerate(vec):
        assert value == pytest.approx(GOLDEN_CAPTION.get(i, 0.0), abs=1e-15)


@given(st.text(max_size=80))
def test_unit_norm_or_zero(text):
    vec = hash_embed(text)
    norm = math.sqrt(sum(v * v for v in vec))
    assert norm == 0 or abs(norm - 1) <= 1e-9
    assert vec == hash_embed(text)


@given(st.text(max_size=20), st.text(max_size=20))
def test_bag_of_words(a, b):
    assert hash_embed(f"{a} {b}") == hash_embed(f"{b} {a}")


def test_cosine_examples():
    v = hash_embed("robot blocked by person")
    assert cosine_similarity(v, v) == pytest.approx(1.0, abs=1e-12)
    e0 = [1.0, 0.0, 0.0]
    e1 = [0.0, 1.0, 0.0]
    assert cosine_similarity(e0, e1) == 0.0
    assert cosine_similarity([0.0] * 3, e0) == 0.0
    with pytest.raises(DimensionMismatch):
        cosine_similarity([1.0], [1.0, 0.0])


vectors = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=4, max_size=4)


@given(vectors, vectors)
def test_cosine_symmetric_bounded(a, b):
    s = cosine_similarity(a, b)
    assert s == cosine_similarity(b, a)
    assert -1.0 <= s <= 1.0


def test_http_embedder(fake_backend):
    emb = HttpEmbedder(fake_backend.url)
    assert emb.embed("hello") == (0.6, 0.8)
    assert fake_backend.requests == [("/embed", {"input": "hello"})]
    assert emb.dimension == 2
    fake_backend.embedding = [1.0, 0.0, 0.0]
    with pytest.raises(BackendDimensionMismatch):
        emb.embed("again")


def test_http_embed_via_config(fake_backend):
    assert embed("x", EmbedConfig("http", fake_backend.url)) == (0.6, 0.8)


def test_http_embedder_errors(fake_backend, dead_url):
    with pytest.raises(BackendUnavailable):
        HttpEmbedder(dead_url).embed("x")
    fake_backend.status = 500
    with pytest.raises(BackendUnavailable):
        HttpEmbedder(fake_backend.url).embed("x")
    fake_backend.status = 200
    fake_backend.delay = 0.5
    with pytest.raises(BackendTimeout):
        HttpEmbedder(fake_backend.url, timeout=0.1).embed("x")


def test_http_config_requires_url():
    with pytest.raises(ValueError):
        EmbedConfig("http")
