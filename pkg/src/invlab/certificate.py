"""Verified inversion certificates and their JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field

from .connectivity import Verdict, is_acyclic, is_k_arc_strong, is_k_strong
from .core import Digraph, InversionFamily, PreconditionError, VerificationError, invert_family
from .formats import digraph_id

PROPERTIES = ("k-strong", "k-arc-strong", "acyclic", "equals-target")


def check_property(d: Digraph, prop: str, k: int, target: Digraph | None = None) -> Verdict:
    if prop == "k-strong":
        return is_k_strong(d, k)
    if prop == "k-arc-strong":
        return is_k_arc_strong(d, k)
    if prop == "acyclic":
        return Verdict("acyclic", 0, is_acyclic(d))
    if prop == "equals-target":
        if target is None:
            raise PreconditionError("equals-target needs a target digraph")
        return Verdict("equals-target", 0, d == target)
    raise PreconditionError(f"unknown property {prop!r}")


@dataclass(frozen=True)
class Certificate:
    property: str
    k: int
    family: InversionFamily
    verified: bool
    provenance: str
    n: int
    digraph_id: str
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def family_size(self) -> int:
        return len(self.family)

    def apply(self, d: Digraph) -> Digraph:
        return invert_family(d, self.family)

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "k": self.k,
            "n": self.n,
            "digraph_id": self.digraph_id,
            "family": self.family.as_lists(),
            "family_size": self.family_size,
            "verified": self.verified,
            "provenance": self.provenance,
            "stats": self.stats,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        return cls(
            property=data["property"],
            k=data["k"],
            family=InversionFamily.of(data["n"], data["family"]),
            verified=data["verified"],
            provenance=data["provenance"],
            n=data["n"],
            digraph_id=data["digraph_id"],
            stats=data.get("stats", {}),
        )


def certify(d: Digraph, family, prop: str, k: int, provenance: str,
            stats: dict | None = None, target: Digraph | None = None) -> Certificate:
    """Apply the family, check the property independently, and refuse failures."""
    if not isinstance(family, InversionFamily):
        family = InversionFamily.of(d.n, family)
    result = invert_family(d, family)
    verdict = check_property(result, prop, k, target)
    if not verdict:
        raise VerificationError(f"{provenance}: family of size {len(family)} does not yield {prop} (k={k})")
    return Certificate(prop, k, family, True, provenance, d.n, digraph_id(d), dict(stats or {}))
