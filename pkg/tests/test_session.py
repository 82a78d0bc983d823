import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xar.errors import InvariantViolation, MalformedLine, NonMonotonicTimestamp, UnknownKind
from xar.session import FrameRecord, Level, LogRecord, PlanSnapshot, parse_session, write_session


def test_parse_single_log():
    line = b'{"kind":"log","t":0.0,"level":"INFO","node":"nav","msg":"goal accepted"}'
    assert parse_session(line) == [LogRecord(0.0, Level.INFO, "nav", "goal accepted")]


def test_parse_empty():
    assert parse_session(b"") == []


def test_parse_all_kinds():
    data = "\n".join(
        [
            '{"kind":"log","t":0,"level":"DEBUG","node":"n","msg":"m"}',
            '{"kind":"plan","t":1,"poses":[[0,0],[3,4]]}',
            '{"kind":"image","t":1.5,"image_ref":"f.png"}',
            '{"kind":"image","t":2,"caption_hint":"hint","image_ref":null}',
        ]
    )
    events = parse_session(data.encode())
    assert events == [
        LogRecord(0.0, Level.DEBUG, "n", "m"),
        PlanSnapshot(1.0, ((0.0, 0.0), (3.0, 4.0))),
        FrameRecord(1.5, image_ref="f.png"),
        FrameRecord(2.0, caption_hint="hint"),
    ]
    assert all(isinstance(e.t, float) for e in events)


@pytest.mark.parametrize(
    "line",
    [
        '{"kind":"plan","t":1.0,"poses":[]}',
        '{"kind":"plan","t":1.0,"poses":[[0,"a"]]}',
        '{"kind":"plan","t":1.0,"poses":[[0,1,2]]}',
        '{"kind":"log","t":-1,"level":"INFO","node":"n","msg":"m"}',
        '{"kind":"log","t":0,"level":"LOUD","node":"n","msg":"m"}',
        '{"kind":"log","t":0,"level":"INFO","node":"","msg":"m"}',
        '{"kind":"log","t":0,"level":"INFO","node":"n","msg":""}',
        '{"kind":"log","t":0,"level":"INFO","node":"n"}',
        '{"kind":"log","t":0,"level":"INFO","node":"n","msg":"m","extra":1}',
        '{"kind":"log","t":true,"level":"INFO","node":"n","msg":"m"}',
        '{"kind":"log","t":NaN,"level":"INFO","node":"n","msg":"m"}',
        '{"kind":"image","t":0}',
        '{"t":0}',
        "[1, 2]",
        "not json",
    ],
)
def test_malformed_lines(line):
    with pytest.raises(MalformedLine) as info:
        parse_session(('{"kind":"log","t":0,"level":"INFO","node":"n","msg":"ok"}\n' + line).encode())
    assert info.value.line == 2


def test_unknown_kind():
    with pytest.raises(UnknownKind) as info:
        parse_session(b'{"kind":"imu","t":0}')
    assert info.value.line == 1


def test_non_monotonic():
    data = b'{"kind":"plan","t":2,"poses":[[0,0]]}\n{"kind":"plan","t":1,"poses":[[0,0]]}\n'
    with pytest.raises(NonMonotonicTimestamp) as info:
        parse_session(data)
    assert info.value.line == 2


def test_tiny_backwards_jitter_allowed():
    data = b'{"kind":"plan","t":1.0,"poses":[[0,0]]}\n{"kind":"plan","t":0.9999999999,"poses":[[0,0]]}\n'
    assert len(parse_session(data)) == 2


def test_write_empty():
    assert write_session([]) == b""


def test_write_single_log():
    out = write_session([LogRecord(0.0, Level.INFO, "nav", "goal accepted")])
    assert out == b'{"kind":"log","t":0.0,"level":"INFO","node":"nav","msg":"goal accepted"}\n'


def test_write_rejects_invalid():
    with pytest.raises(InvariantViolation) as info:
        write_session([LogRecord(0.0, Level.INFO, "n", "m"), PlanSnapshot(1.0, ())])
    assert info.value.index == 1
    with pytest.raises(InvariantViolation):
        write_session([LogRecord(2.0, Level.INFO, "n", "m"), LogRecord(1.0, Level.INFO, "n", "m")])
    with pytest.raises(InvariantViolation):
        write_session([FrameRecord(0.0)])


def test_unicode_preserved():
    events = [LogRecord(0.0, Level.WARN, "cámara", "obstáculo ✓ 人")]
    out = write_session(events)
    assert "obstáculo".encode() in out
    assert parse_session(out) == events


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
text = st.text(min_size=1, max_size=30)
payload = st.one_of(
    st.builds(lambda lvl, node, msg: ("log", lvl, node, msg), st.sampled_from(list(Level)), text, text),
    st.builds(lambda poses: ("plan", poses), st.lists(st.tuples(finite, finite), min_size=1, max_size=6)),
    st.builds(
        lambda ref, hint: ("image", ref, hint),
        st.one_of(st.none(), text),
        text,
    ),
)


def _build(t, p):
    if p[0] == "log":
        return LogRecord(t, *p[1:])
    if p[0] == "plan":
        return PlanSnapshot(t, tuple(p[1]))
    return FrameRecord(t, p[1], p[2])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1e5, allow_nan=False), min_size=50, max_size=50), st.lists(payload, min_size=50, max_size=50))
def test_round_trip_50_events(times, payloads):
    events = [_build(t, p) for t, p in zip(sorted(times), payloads)]
    data = write_session(events)
    assert parse_session(data) == events
    assert write_session(parse_session(data)) == data
    assert all(json.loads(line) for line in data.decode().split("\n") if line)
