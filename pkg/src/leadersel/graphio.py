"""Read and write graph files.

Two formats are supported:

* Edge list: first non-comment line is the node count; then one edge per
  line as ``u v [w]``; ``#`` starts a comment anywhere on a line; an optional
  trailing block starting with ``kappa:`` holds ``u kappa_u`` lines.
  Node tokens may be 1-based integers (the common convention for printed
  graphs) or arbitrary whitespace-free string labels.
* JSON: ``{"nodes": [...], "edges": [[u, v, w], ...], "kappa": {label: value}}``
  where ``nodes`` fixes the internal order and ``kappa`` defaults to 1 per node.

Reading a written file reproduces the network exactly (canonical ordering).
"""

from __future__ import annotations

import json
import re

from .errors import ParseError
from .graph import Network, build_network

_INT_RE = re.compile(r"^[+-]?\d+$")


def read_network(data: bytes | str, format: str | None = None) -> Network:
    """Parse graph file content. ``format`` is 'edgelist', 'json', or None to sniff."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"graph file is not UTF-8 text: {exc.reason}") from None
    else:
        text = data
    if format is None:
        format = "json" if text.lstrip()[:1] == "{" else "edgelist"
    if format == "json":
        return _read_json(text)
    if format == "edgelist":
        return _read_edgelist(text)
    raise ParseError(f"unknown format {format!r}")


def write_network(net: Network, format: str = "edgelist") -> str:
    if format == "json":
        return _write_json(net)
    if format == "edgelist":
        return _write_edgelist(net)
    raise ParseError(f"unknown format {format!r}")


def _format_number(x: float) -> str:
    return repr(int(x)) if float(x).is_integer() else repr(float(x))


def _read_edgelist(text: str) -> Network:
    n = None
    raw_edges: list[tuple[str, str, float, int]] = []
    raw_kappa: list[tuple[str, float, int]] = []
    in_kappa = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if n is None:
            if not _INT_RE.match(stripped):
                raise ParseError(f"expected node count, got {stripped!r}", line=lineno)
            n = int(stripped)
            if n < 1:
                raise ParseError(f"node count must be >= 1, got {n}", line=lineno)
            continue
        if stripped.lower() == "kappa:":
            if in_kappa:
                raise ParseError("duplicate kappa: block", line=lineno)
            in_kappa = True
            continue
        tokens = stripped.split()
        if in_kappa:
            if len(tokens) != 2:
                raise ParseError("kappa line must be 'node value'", line=lineno)
            raw_kappa.append((tokens[0], _parse_float(tokens[1], lineno), lineno))
        else:
            if len(tokens) not in (2, 3):
                raise ParseError("edge line must be 'u v' or 'u v w'", line=lineno)
            w = _parse_float(tokens[2], lineno) if len(tokens) == 3 else 1.0
            raw_edges.append((tokens[0], tokens[1], w, lineno))
    if n is None:
        raise ParseError("empty graph file: missing node count")

    tokens = []
    for u, v, _, lineno in raw_edges:
        tokens.append((u, lineno))
        tokens.append((v, lineno))
    tokens.extend((u, lineno) for u, _, lineno in raw_kappa)
    index, labels = _resolve_labels(n, tokens)
    edges = [(index[u], index[v], w) for u, v, w, _ in raw_edges]
    kappa = [1.0] * n
    seen_kappa: set[str] = set()
    for u, value, lineno in raw_kappa:
        if u in seen_kappa:
            raise ParseError(f"duplicate kappa entry for node {u!r}", line=lineno)
        seen_kappa.add(u)
        kappa[index[u]] = value
    return build_network(n, edges, kappa, labels)


def _parse_float(token: str, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", line=lineno) from None


def _resolve_labels(n: int, tokens: list[tuple[str, int]]):
    """Map node tokens to internal indices.

    All-integer tokens are treated as 1-based labels and must lie in [1, n].
    Otherwise tokens are opaque labels, indexed by order of first appearance,
    and all n labels must appear.
    """
    if all(_INT_RE.match(tok) for tok, _ in tokens):
        index: dict[str, int] = {}
        for tok, lineno in tokens:
            value = int(tok)
            if not 1 <= value <= n:
                raise ParseError(
                    f"node {value} out of range for 1-based labels with n={n}", line=lineno
                )
            index[tok] = value - 1
        return index, None
    index = {}
    for tok, _ in tokens:
        if tok not in index:
            index[tok] = len(index)
    if len(index) > n:
        raise ParseError(f"found {len(index)} distinct node labels but node count is {n}")
    if len(index) < n:
        raise ParseError(f"only {len(index)} of {n} node labels appear in the file")
    labels = sorted(index, key=index.get)
    return index, labels


def _write_edgelist(net: Network) -> str:
    def name(i: int) -> str:
        return str(net.label_of(i))

    for i in range(net.n):
        if "#" in name(i) or any(ch.isspace() for ch in name(i)):
            raise ParseError(
                f"label {name(i)!r} contains whitespace or '#'; use the JSON format"
            )
    lines = [str(net.n)]
    for i, j, w in net.edges:
        if w == 1.0:
            lines.append(f"{name(i)} {name(j)}")
        else:
            lines.append(f"{name(i)} {name(j)} {_format_number(w)}")
    if not all(float(x) == 1.0 for x in net.kappa):
        lines.append("kappa:")
        for i in range(net.n):
            lines.append(f"{name(i)} {_format_number(float(net.kappa[i]))}")
    return "\n".join(lines) + "\n"


def _read_json(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    if "nodes" not in doc:
        raise ParseError("missing required field", field="nodes")
    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not nodes:
        raise ParseError("must be a nonempty list", field="nodes")
    n = len(nodes)
    names = [str(x) for x in nodes]
    if len(set(names)) != n:
        raise ParseError("node labels must be unique", field="nodes")
    plain = names == [str(i) for i in range(1, n + 1)]
    labels = None if plain else names
    index = {name: i for i, name in enumerate(names)}

    edges = []
    for pos, entry in enumerate(doc.get("edges", [])):
        if not isinstance(entry, list) or len(entry) not in (2, 3):
            raise ParseError("edge must be [u, v] or [u, v, w]", field=f"edges[{pos}]")
        u, v = str(entry[0]), str(entry[1])
        for tok in (u, v):
            if tok not in index:
                raise ParseError(f"unknown node {tok!r}", field=f"edges[{pos}]")
        w = float(entry[2]) if len(entry) == 3 else 1.0
        edges.append((index[u], index[v], w))

    kappa = [1.0] * n
    kappa_doc = doc.get("kappa", {})
    if not isinstance(kappa_doc, dict):
        raise ParseError("must be an object mapping label to value", field="kappa")
    for key, value in kappa_doc.items():
        if str(key) not in index:
            raise ParseError(f"unknown node {key!r}", field="kappa")
        kappa[index[str(key)]] = float(value)
    return build_network(n, edges, kappa, labels)


def _write_json(net: Network) -> str:
    nodes = list(net.labels) if net.labels is not None else list(range(1, net.n + 1))
    doc = {
        "nodes": nodes,
        "edges": [[nodes[i], nodes[j], w] for i, j, w in net.edges],
        "kappa": {str(nodes[i]): float(net.kappa[i]) for i in range(net.n)},
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
