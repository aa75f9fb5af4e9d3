REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "n", "param", "checks"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "n": {"type": "integer", "minimum": 2},
        "param": {
            "type": "object",
            "required": ["mode"],
            "additionalProperties": False,
            "properties": {"mode": {"enum": ["formal", "rational"]}, "value": {"type": "string"}},
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "detail", "ms"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "skip"]},
                    "detail": {"type": "string"},
                    "ms": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
}
