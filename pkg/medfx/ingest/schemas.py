# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"JSON schemas of the input files"

LEVEL = {"type": ["string", "integer"]}

VARIABLE = {
    "type": "object",
    "required": ["name", "levels"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "levels": {"type": "array", "minItems": 1, "items": LEVEL},
        "values": {"type": "array", "items": {"type": "number"}},
    },
    "additionalProperties": False,
}

ASSIGNMENT = {"type": "object", "additionalProperties": LEVEL}

FACTOR = {
    "type": "object",
    "required": ["target", "table"],
    "properties": {
        "target": {"type": "string"},
        "given": {"type": "array", "items": {"type": "string"}},
        "table": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["p"],
                "properties": {
                    "given": ASSIGNMENT,
                    "p": {"type": "object", "additionalProperties": {"type": "number"}},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

DISTRIBUTION = {
    "type": "object",
    "required": ["variables"],
    "properties": {
        "variables": {"type": "array", "minItems": 1, "items": VARIABLE},
        "joint": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["assign", "p"],
                "properties": {"assign": ASSIGNMENT, "p": {"type": "number"}},
                "additionalProperties": False,
            },
        },
        "factors": {"type": "array", "minItems": 1, "items": FACTOR},
    },
    "oneOf": [{"required": ["joint"]}, {"required": ["factors"]}],
}

SCM = {
    "type": "object",
    "required": ["exogenous", "endogenous"],
    "properties": {
        "exogenous": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "levels", "probs"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "levels": {"type": "array", "minItems": 1, "items": LEVEL},
                    "probs": {"type": "array", "items": {"type": "number"}},
                },
                "additionalProperties": False,
            },
        },
        "endogenous": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "parents", "mechanism"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "levels": {"type": "array", "minItems": 1, "items": LEVEL},
                    "values": {"type": "array", "items": {"type": "number"}},
                    "parents": {"type": "array", "items": {"type": "string"}},
                    "mechanism": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "required": ["value"],
                            "properties": {"parents": ASSIGNMENT, "value": LEVEL},
                            "additionalProperties": False,
                        },
                    },
                },
                "additionalProperties": False,
            },
        },
    },
}

RECORD_SCHEMA = {
    "type": "object",
    "required": ["variables"],
    "properties": {"variables": {"type": "array", "minItems": 1, "items": VARIABLE}},
}
