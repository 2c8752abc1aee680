"""Node sets, the modulus h(x) = prod (x - x_i)^m_i, and Rolle zero counting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError, DuplicateNode, NodeParseError
from .poly import Polynomial
from .scalar import EXACT, FLOAT, Domain, Scalar, common_domain, convert, format_scalar, lift

NODE_RTOL = 1e-12
ROLLE_GRID = 4096


@dataclass(frozen=True)
class NodeSet:
    """Distinct nodes ``x_i`` with multiplicities ``m_i``, sorted ascending.

    ``interval`` is an optional ``(a, b)`` that must contain every node.
    """

    nodes: tuple
    domain: Domain
    interval: tuple | None = None

    def __init__(self, nodes: Iterable, interval=None, domain: Domain | None = None):
        pairs = [(x, int(m)) for x, m in nodes]
        if not pairs:
            raise DomainError("a node set needs at least one node")
        if domain is None:
            domain = common_domain([x for x, _ in pairs] + list(interval or ()))
        pairs = sorted(((lift(x, domain), m) for x, m in pairs), key=lambda p: p[0])
        for x, m in pairs:
            if m < 1:
                raise DomainError(f"multiplicity of node {format_scalar(x)} must be >= 1, got {m}")
        xs = [x for x, _ in pairs]
        if domain is EXACT:
            tol = 0
        else:
            tol = NODE_RTOL * (1.0 + max(abs(x) for x in xs))
        for a, b in zip(xs, xs[1:]):
            if abs(b - a) <= tol:
                raise DuplicateNode(
                    f"nodes {format_scalar(a)} and {format_scalar(b)} are not distinct; "
                    "merge them into one node with the combined multiplicity"
                )
        if interval is not None:
            lo, hi = (lift(v, domain) for v in interval)
            if not lo < hi:
                raise DomainError(f"interval [{format_scalar(lo)}, {format_scalar(hi)}] is empty")
            for x in xs:
                if not lo <= x <= hi:
                    raise DomainError(
                        f"node {format_scalar(x)} lies outside [{format_scalar(lo)}, {format_scalar(hi)}]"
                    )
            interval = (lo, hi)
        object.__setattr__(self, "nodes", tuple(pairs))
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "interval", interval)

    @property
    def xs(self) -> list[Scalar]:
        return [x for x, _ in self.nodes]

    @property
    def ms(self) -> list[int]:
        return [m for _, m in self.nodes]

    @property
    def r(self) -> int:
        return len(self.nodes)

    @property
    def n(self) -> int:
        return sum(self.ms)

    def to_domain(self, domain: Domain) -> "NodeSet":
        if domain is self.domain:
            return self
        iv = None if self.interval is None else tuple(convert(v, domain) for v in self.interval)
        return NodeSet([(convert(x, domain), m) for x, m in self.nodes], iv, domain)

    def with_interval(self, interval) -> "NodeSet":
        return NodeSet(self.nodes, interval, self.domain)

    def __str__(self) -> str:
        return format_nodes(self)


def build_modulus(ns: NodeSet) -> Polynomial:
    """Monic ``h(x) = prod_i (x - x_i)**m_i`` of degree ``n``."""
    h = Polynomial.constant(1, ns.domain)
    for x, m in ns.nodes:
        h = h * Polynomial.linear_factor(x, m, ns.domain)
    return h


def sigma(u: int, v: int) -> int:
    return 1 if u < v else 0


def zero_count_table(ns: NodeSet) -> list[int]:
    """Entry ``k`` is the guaranteed number of distinct zeros of ``h^(k)``.

    ``#h^(k) = sum_i sum_{j<=k} sigma(j, m_i) - k`` for ``k = 0 .. n-1``.
    """
    table = []
    count = 0
    for k in range(ns.n):
        count += sum(sigma(k, m) for m in ns.ms)
        table.append(count - k)
    return table


def verify_rolle_numeric(ns: NodeSet, k: int, grid: int = ROLLE_GRID) -> int:
    """Count distinct real zeros of ``h^(k)`` numerically.

    Nodes with ``m_i > k`` are known zeros of ``h^(k)`` and are counted
    directly.  Their factors are divided out exactly, and the zeros of the
    deflated derivative are found as sign changes on a uniform grid over
    ``[min x_i, max x_i]`` (all real zeros lie there by Rolle).
    """
    if not 0 <= k < ns.n:
        raise ValueError(f"derivative order {k} outside 0..{ns.n - 1}")
    exact = ns.to_domain(EXACT)
    hk = build_modulus(exact).derivative(k)
    known = [x for x, m in exact.nodes if m > k]
    deflator = Polynomial.constant(1, EXACT)
    for x, m in exact.nodes:
        if m > k:
            deflator = deflator * Polynomial.linear_factor(x, m - k, EXACT)
    q, rem = divmod(hk, deflator)
    assert rem.is_zero()
    if q.degree < 1:
        return len(known)
    lo, hi = float(exact.xs[0]), float(exact.xs[-1])
    ts = np.linspace(lo, hi, grid)
    coeffs = np.array([float(c) for c in q.coeffs])
    vals = np.polynomial.polynomial.polyval(ts, coeffs)
    signs = np.sign(vals)
    crossings = 0
    prev = 0.0
    for s in signs:
        if s == 0:
            crossings += 1
            prev = 0.0
            continue
        if prev != 0 and s != prev:
            crossings += 1
        prev = s
    return len(known) + crossings


def parse_nodes(text: str, domain: Domain = EXACT, interval=None) -> NodeSet:
    """Parse the ``x:m,x:m,...`` node-list format.

    ``x`` is a decimal, a ``p/q`` rational, or (float domain only) any
    constant expression such as ``pi/2``.
    """
    from .expr import constant_value

    items = [s.strip() for s in text.split(",")]
    pairs = []
    for item in items:
        if not item:
            raise NodeParseError(f"empty item in node list {text!r}")
        head, sep, tail = item.rpartition(":")
        if not sep:
            raise NodeParseError(f"node item {item!r} is not of the form x:m")
        try:
            m = int(tail)
        except ValueError:
            raise NodeParseError(f"multiplicity {tail!r} in {item!r} is not an integer") from None
        try:
            x = constant_value(head, domain)
        except Exception as exc:
            raise NodeParseError(f"cannot read node {head!r}: {exc}") from None
        pairs.append((x, m))
    return NodeSet(pairs, interval, domain)


def format_nodes(ns: NodeSet) -> str:
    return ",".join(f"{format_scalar(x)}:{m}" for x, m in ns.nodes)
