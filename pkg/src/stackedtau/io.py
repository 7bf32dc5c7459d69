"""Instance files: a plain text format and a JSON format carrying provenance.

Text layout (vertex ids rewritten to 0..n-1)::

    ball d m            or    sphere d n f
    <m simplex lines>         <f facet lines>
    removed r                 removed r
    <r facet lines>           <r facet lines>

The ``removed`` section is optional. The JSON form stores the same payload plus
a ``metadata`` object whose ``labels`` entry maps each written id back to the
original vertex label.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .constructions import FamilyInstance
from .core import (
    StackedBall,
    StackedError,
    StackedSphere,
    boundary,
    canonical_ids,
    make_ball,
    remove_facets,
    simplex,
)


class InstanceFormatError(ValueError):
    pass


@dataclass
class InstanceFile:
    kind: str  # "ball" or "sphere"
    dim: int
    payload: list[tuple[int, ...]]
    removed: list[tuple[int, ...]] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def ball(self) -> StackedBall:
        if self.kind != "ball":
            raise InstanceFormatError("instance holds a sphere, not a ball")
        return make_ball(self.dim, self.payload)

    def sphere(self) -> StackedSphere:
        if self.kind == "ball":
            return remove_facets(boundary(self.ball()), self.removed)
        return StackedSphere(self.dim, frozenset(simplex(f) for f in self.payload),
                             frozenset(simplex(f) for f in self.removed))

    @property
    def vertices(self) -> list[int]:
        return sorted({v for s in self.payload + self.removed for v in s})


def from_ball(ball: StackedBall, removed=(), metadata: dict | None = None) -> InstanceFile:
    return InstanceFile("ball", ball.d, list(ball.simplices),
                        sorted(simplex(f) for f in removed), dict(metadata or {}))


def from_sphere(sphere: StackedSphere, metadata: dict | None = None) -> InstanceFile:
    return InstanceFile("sphere", sphere.dim, sorted(sphere.facets),
                        sorted(sphere.removed), dict(metadata or {}))


def from_family(inst: FamilyInstance, kind: str = "ball") -> InstanceFile:
    meta = {
        "family": inst.name,
        **{k: v for k, v in inst.params.items() if k != "phis"},
        "claimed_n": inst.claimed_n,
        "claimed_tau_lower": inst.claimed_tau_lower,
    }
    if kind == "sphere":
        return from_sphere(inst.sphere, meta)
    return from_ball(inst.ball, inst.removed_facets, meta)


def canonicalize(inst: InstanceFile) -> InstanceFile:
    """Rewrite vertex ids to 0..n-1; the reverse map goes to metadata['labels']."""
    ids = canonical_ids(inst.vertices)
    old_labels = inst.metadata.get("labels")
    labels = {str(new): (old_labels[str(old)] if old_labels else old) for old, new in ids.items()}
    meta = dict(inst.metadata, labels=labels)
    relabel = lambda s: tuple(sorted(ids[v] for v in s))  # noqa: E731
    payload = [relabel(s) for s in inst.payload]
    if inst.kind == "sphere":
        payload.sort()
    return InstanceFile(inst.kind, inst.dim, payload,
                        sorted(relabel(s) for s in inst.removed), meta)


def restore_labels(inst: InstanceFile) -> InstanceFile:
    labels = inst.metadata.get("labels")
    if not labels:
        return inst
    back = {int(k): int(v) for k, v in labels.items()}
    relabel = lambda s: tuple(sorted(back[v] for v in s))  # noqa: E731
    meta = {k: v for k, v in inst.metadata.items() if k != "labels"}
    return InstanceFile(inst.kind, inst.dim, [relabel(s) for s in inst.payload],
                        [relabel(s) for s in inst.removed], meta)


def dumps_text(inst: InstanceFile) -> str:
    c = canonicalize(inst)
    if c.kind == "ball":
        lines = [f"ball {c.dim} {len(c.payload)}"]
    else:
        lines = [f"sphere {c.dim} {len(c.vertices)} {len(c.payload)}"]
    lines += [" ".join(map(str, s)) for s in c.payload]
    if c.removed:
        lines.append(f"removed {len(c.removed)}")
        lines += [" ".join(map(str, s)) for s in c.removed]
    return "\n".join(lines) + "\n"


def _ints(line: str, lineno: int) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in line.split())
    except ValueError:
        raise InstanceFormatError(f"line {lineno}: expected integers, got {line!r}") from None


def loads_text(text: str) -> InstanceFile:
    lines = [ln.strip() for ln in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise InstanceFormatError("empty instance")
    head = lines[0].split()
    if not head or head[0] not in ("ball", "sphere"):
        raise InstanceFormatError("first line must start with 'ball' or 'sphere'")
    kind = head[0]
    nums = _ints(" ".join(head[1:]), 1)
    if kind == "ball" and len(nums) == 2:
        dim, count = nums
        n_declared = None
    elif kind == "sphere" and len(nums) == 3:
        dim, n_declared, count = nums
    else:
        raise InstanceFormatError("bad header: 'ball d m' or 'sphere d n f'")
    size = dim + 2 if kind == "ball" else dim + 1
    pos = 1
    payload = []
    for _ in range(count):
        if pos >= len(lines):
            raise InstanceFormatError(f"expected {count} simplices, file ended early")
        s = _ints(lines[pos], pos + 1)
        if len(s) != size:
            raise InstanceFormatError(f"line {pos + 1}: expected {size} vertices")
        payload.append(s)
        pos += 1
    removed = []
    if pos < len(lines):
        tail = lines[pos].split()
        if len(tail) != 2 or tail[0] != "removed":
            raise InstanceFormatError(f"line {pos + 1}: expected 'removed r'")
        r = _ints(tail[1], pos + 1)[0]
        pos += 1
        for _ in range(r):
            if pos >= len(lines):
                raise InstanceFormatError("removed section ended early")
            f = _ints(lines[pos], pos + 1)
            if len(f) != dim + 1:
                raise InstanceFormatError(f"line {pos + 1}: expected {dim + 1} vertices")
            removed.append(f)
            pos += 1
        if pos != len(lines):
            raise InstanceFormatError(f"line {pos + 1}: trailing content")
    inst = InstanceFile(kind, dim, payload, removed)
    if n_declared is not None and len(inst.vertices) != n_declared:
        raise InstanceFormatError(f"header says {n_declared} vertices, found {len(inst.vertices)}")
    return inst


def dumps_json(inst: InstanceFile) -> str:
    c = canonicalize(inst)
    key = "simplices" if c.kind == "ball" else "facets"
    doc = {
        "kind": c.kind,
        "dim": c.dim,
        key: [list(s) for s in c.payload],
        "removed": [list(s) for s in c.removed],
        "metadata": c.metadata,
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def loads_json(text: str) -> InstanceFile:
    try:
        doc = json.loads(text)
        kind = doc["kind"]
        key = "simplices" if kind == "ball" else "facets"
        inst = InstanceFile(
            kind, int(doc["dim"]),
            [tuple(int(v) for v in s) for s in doc[key]],
            [tuple(int(v) for v in s) for s in doc.get("removed", [])],
            dict(doc.get("metadata", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad JSON instance: {exc}") from None
    if kind not in ("ball", "sphere"):
        raise InstanceFormatError(f"unknown kind {kind!r}")
    return restore_labels(inst)


def write_instance(inst: InstanceFile, path) -> None:
    path = Path(path)
    text = dumps_json(inst) if path.suffix == ".json" else dumps_text(inst)
    path.write_text(text)


def read_instance(path) -> InstanceFile:
    text = Path(path).read_text()
    inst = loads_json(text) if text.lstrip().startswith("{") else loads_text(text)
    try:
        inst.sphere()
    except StackedError as exc:
        raise InstanceFormatError(f"invalid complex: {exc}") from None
    return inst
