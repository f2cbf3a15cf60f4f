"""Text formats: "trn" for tournaments, "dg" for general digraphs, DOT export."""

from __future__ import annotations

import hashlib

from .core import Digraph, InvlabError, Tournament


class ParseError(InvlabError, ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _lines(text: str) -> list[tuple[int, str]]:
    # (line number, stripped content), blank lines kept out
    return [(i + 1, s.strip()) for i, s in enumerate(text.splitlines()) if s.strip()]


def _int(token: str, line: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line) from None
    if value < 0:
        raise ParseError(f"{what} must be non-negative", line)
    return value


def emit_trn(t: Tournament) -> str:
    if not isinstance(t, Tournament):
        t = Tournament.from_digraph(t)
    return f"{t.n}\n{t.to_bits()}\n"


def parse_trn(text: str) -> Tournament:
    lines = _lines(text)
    if not lines:
        raise ParseError("empty input", 1)
    ln, first = lines[0]
    n = _int(first, ln, "vertex count")
    if n < 1:
        raise ParseError("vertex count must be at least 1", ln)
    want = n * (n - 1) // 2
    if want == 0:
        if len(lines) > 1:
            raise ParseError("trailing content", lines[1][0])
        return Tournament(1, [0])
    if len(lines) < 2:
        raise ParseError("missing bit string", ln + 1)
    ln, code = lines[1]
    if len(code) != want:
        raise ParseError(f"bit string has length {len(code)}, expected {want}", ln)
    if set(code) - {"0", "1"}:
        raise ParseError("bit string may only contain 0 and 1", ln)
    if len(lines) > 2:
        raise ParseError("trailing content", lines[2][0])
    return Tournament.from_bits(n, code)


def emit_dg(d: Digraph) -> str:
    arcs = d.arcs()
    body = "".join(f"{u} {v}\n" for u, v in arcs)
    return f"{d.n} {len(arcs)}\n{body}"


def parse_dg(text: str) -> Digraph:
    lines = _lines(text)
    if not lines:
        raise ParseError("empty input", 1)
    ln, first = lines[0]
    head = first.split()
    if len(head) != 2:
        raise ParseError("header must be 'n m'", ln)
    n = _int(head[0], ln, "vertex count")
    m = _int(head[1], ln, "arc count")
    if len(lines) - 1 < m:
        raise ParseError(f"expected {m} arcs, found {len(lines) - 1}", lines[-1][0] + 1)
    out = [0] * n
    for ln, s in lines[1:m + 1]:
        parts = s.split()
        if len(parts) != 2:
            raise ParseError("arc line must be 'u v'", ln)
        u = _int(parts[0], ln, "tail")
        v = _int(parts[1], ln, "head")
        if u >= n or v >= n:
            raise ParseError(f"arc ({u}, {v}) out of range for n = {n}", ln)
        if u == v:
            raise ParseError(f"loop at vertex {u}", ln)
        if out[u] >> v & 1:
            raise ParseError(f"repeated arc ({u}, {v})", ln)
        out[u] |= 1 << v
    if len(lines) > m + 1:
        raise ParseError("trailing content", lines[m + 1][0])
    return Digraph(n, out)


def parse_any(text: str) -> Digraph:
    """Pick the format from the header: one token means trn, two mean dg."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty input", 1)
    if len(lines[0][1].split()) == 1:
        return parse_trn(text)
    d = parse_dg(text)
    return Tournament.from_digraph(d) if d.is_tournament() else d


def read_digraph(path: str, fmt: str | None = None) -> Digraph:
    with open(path) as fh:
        text = fh.read()
    if fmt == "trn" or (fmt is None and path.endswith(".trn")):
        return parse_trn(text)
    if fmt == "dg" or (fmt is None and path.endswith(".dg")):
        d = parse_dg(text)
        return Tournament.from_digraph(d) if d.is_tournament() else d
    return parse_any(text)


def emit(d: Digraph) -> str:
    return emit_trn(d) if d.is_tournament() and d.n >= 1 else emit_dg(d)


def emit_dot(d: Digraph, name: str = "D", highlight: int = 0) -> str:
    lines = [f"digraph {name} {{"]
    for v in range(d.n):
        style = ' [style=filled, fillcolor="#ffd27f"]' if highlight >> v & 1 else ""
        lines.append(f"  {v}{style};")
    for u, v in d.arcs():
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def digraph_id(d: Digraph) -> str:
    return hashlib.sha256(emit_dg(d).encode()).hexdigest()[:16]
