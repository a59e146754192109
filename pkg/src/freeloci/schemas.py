"""JSON schemas for CLI inputs and result payloads."""

SCHEMA_VERSION = "1.0"

_rational = {"type": ["string", "integer"], "pattern": r"^-?\d+(/\d+)?$"}
_matrix = {"type": "array", "items": {"type": "array", "items": _rational}}
_vector = {"type": "array", "items": _rational}
_complex = {"oneOf": [{"type": "number"}, {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}
_cmatrix = {"type": "array", "items": {"type": "array", "items": _complex}}

PENCIL = {
    "type": "object",
    "required": ["coeffs"],
    "properties": {"d": {"type": "integer", "minimum": 1}, "g": {"type": "integer", "minimum": 1}, "coeffs": {"type": "array", "minItems": 1, "items": _matrix}},
}

TUPLE = {
    "oneOf": [
        {"type": "array", "items": _matrix},
        {"type": "object", "required": ["matrices"], "properties": {"matrices": {"type": "array", "items": _matrix}}},
    ]
}

REALIZATION = {
    "type": "object",
    "required": ["g", "d", "delta", "c", "A", "b"],
    "properties": {
        "g": {"type": "integer", "minimum": 0},
        "d": {"type": "integer", "minimum": 0},
        "delta": _rational,
        "c": _vector,
        "A": {"type": "array", "items": _matrix},
        "b": {"type": "array", "items": _vector},
    },
}

PERTURBATION = {
    "type": "object",
    "required": ["A", "b", "c", "S"],
    "properties": {
        "A": {"type": "array", "items": _matrix},
        "b": {"type": "array", "items": _vector},
        "c": _vector,
        "S": {"type": "array", "items": _vector, "minItems": 1},
    },
}

HPENCIL = {
    "type": "object",
    "required": ["coeffs"],
    "properties": {"coeffs": {"type": "array", "minItems": 1, "items": _cmatrix}},
}

POINT = {"type": "array", "items": _cmatrix}

INPUTS = {"pencil": PENCIL, "tuple": TUPLE, "realization": REALIZATION, "perturbation": PERTURBATION, "hpencil": HPENCIL, "point": POINT}

_strs = {"type": "array", "items": {"type": "string"}}

PAYLOADS = {
    "factor": {"type": "object", "required": ["unit", "factors", "seed", "certificates"], "properties": {"unit": {"type": "string"}, "factors": _strs, "seed": {"type": "integer"}, "certificates": {"type": "array"}}},
    "locus-eq": {"type": "object", "required": ["equal", "subset", "superset"], "properties": {"equal": {"type": "boolean"}, "subset": {"type": "boolean"}, "superset": {"type": "boolean"}}},
    "atom": {"type": "object", "required": ["atom"], "properties": {"atom": {"type": "boolean"}}},
    "linearize": {"type": "object", "required": ["pencil", "size"], "properties": {"pencil": PENCIL, "size": {"type": "integer"}}},
    "minimize": {"type": "object", "required": ["realization", "report"], "properties": {"realization": REALIZATION}},
    "pencil-irreducible": {"type": "object", "required": ["irreducible", "span_dim"], "properties": {"irreducible": {"type": "boolean"}, "span_dim": {"type": "integer"}}},
    "pencil-decompose": {"type": "object", "required": ["T", "blocks", "block_sizes", "complete"]},
    "pencil-similar": {"type": "object", "required": ["similar"], "properties": {"similar": {"type": "boolean"}, "P": {"oneOf": [_matrix, {"type": "null"}]}}},
    "nilpotent": {"type": "object", "required": ["jointly_nilpotent"], "properties": {"jointly_nilpotent": {"type": "boolean"}}},
    "det-generic": {"type": "object", "required": ["n", "degree", "polynomial"], "properties": {"n": {"type": "integer"}, "degree": {"type": "integer"}}},
    "perturb-complement": {"type": "object", "required": ["complement"], "properties": {"complement": {"type": "array", "items": _vector}}},
    "spectra": {"type": "object"},
}

RESULT = {
    "type": "object",
    "required": ["status", "payload", "seed", "timing"],
    "properties": {
        "status": {"enum": ["ok", "needs-extension", "error"]},
        "seed": {"type": "integer"},
        "timing": {"type": "object"},
        "schema_version": {"type": "string"},
    },
}


def all_schemas() -> dict:
    return {"version": SCHEMA_VERSION, "inputs": INPUTS, "payloads": PAYLOADS, "result": RESULT}
