"""JSON Schemas for everything the command line prints."""

_family = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}

WITNESS = {
    "type": ["object", "null"],
    "required": ["kind", "members", "deficit"],
    "properties": {
        "kind": {"enum": ["vertex-set", "arc-side", "infeasible-set"]},
        "members": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "deficit": {"type": "integer"},
    },
}

VERDICT = {
    "type": "object",
    "required": ["property", "k", "verdict", "witness"],
    "properties": {
        "property": {"type": "string"},
        "k": {"type": "integer", "minimum": 0},
        "verdict": {"type": "boolean"},
        "witness": WITNESS,
    },
}

CERTIFICATE = {
    "type": "object",
    "required": ["property", "k", "n", "digraph_id", "family", "family_size", "verified", "provenance"],
    "properties": {
        "property": {"enum": ["k-strong", "k-arc-strong", "acyclic", "equals-target"]},
        "k": {"type": "integer", "minimum": 0},
        "n": {"type": "integer", "minimum": 0},
        "digraph_id": {"type": "string", "pattern": "^[0-9a-f]{16}$"},
        "family": _family,
        "family_size": {"type": "integer", "minimum": 0},
        "verified": {"const": True},
        "provenance": {"type": "string"},
        "stats": {"type": "object"},
    },
}

SEARCH = {
    "type": "object",
    "required": ["property", "k", "status", "value", "lower_bound", "upper_bound", "family", "nodes"],
    "properties": {
        "status": {"enum": ["exact", "unknown"]},
        "value": {"type": ["integer", "null"]},
        "lower_bound": {"type": "integer", "minimum": 0},
        "upper_bound": {"type": ["integer", "null"]},
        "family": {"anyOf": [_family, {"type": "null"}]},
        "nodes": {"type": "integer", "minimum": 0},
    },
}

SIDECAR = {
    "type": "object",
    "required": ["kind", "n", "format", "claim", "expected_property", "params"],
    "properties": {
        "kind": {"type": "string"},
        "n": {"type": "integer", "minimum": 0},
        "format": {"enum": ["trn", "dg"]},
        "claim": {"type": "string"},
        "expected_property": {"type": "string"},
        "params": {"type": "object"},
    },
}


def with_spec(schema: dict) -> dict:
    """The schema of a command output: the payload plus the run's "spec" header."""
    out = dict(schema)
    out["required"] = ["spec"] + list(schema["required"])
    out["properties"] = {"spec": {"type": "object", "required": ["command"]}, **schema["properties"]}
    return out


SCHEMAS = {
    "verdict": with_spec(VERDICT),
    "certificate": with_spec(CERTIFICATE),
    "search": with_spec(SEARCH),
    "sidecar": with_spec(SIDECAR),
}
