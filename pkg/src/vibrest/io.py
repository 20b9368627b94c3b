"""Readers and writers for PES, second-quantized and qubit Hamiltonian files.

PES and second-quantized Hamiltonians are JSON documents carrying a
``schema_version``.  Qubit Hamiltonians are plain text, one
``<coeff> <pauli>`` term per line, preceded by a ``#!`` header line holding
JSON metadata; other ``#`` lines are comments.  Coefficients are written
with ``repr`` so a read/write cycle reproduces the text exactly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .errors import ValidationError
from .hamiltonian import PesTerm, SecondQuantizedHamiltonian, SqTerm, VibProblem
from .pauli import PauliString, WeightedPauli, WeightedPauliHamiltonian

SCHEMA_VERSION = 1
PAULI_FORMAT = "vibrest-pauli"
SQ_FORMAT = "vibrest-sq"

_INDEX = {"type": "integer", "minimum": 0}

PES_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "n_modes", "truncation_order", "omegas_cm1", "terms"],
    "anyOf": [{"required": ["modals"]}, {"required": ["modals_per_mode"]}],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "n_modes": {"type": "integer", "minimum": 1},
        "truncation_order": {"type": "integer", "minimum": 1},
        "modals": {"type": "integer", "minimum": 2},
        "modals_per_mode": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "omegas_cm1": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["modes", "powers", "coeff_cm1"],
                "properties": {
                    "modes": {"type": "array", "items": _INDEX},
                    "powers": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                    "coeff_cm1": {"type": "number"},
                },
            },
        },
    },
}

SQ_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "n_modes", "modals", "terms"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "format": {"const": SQ_FORMAT},
        "n_modes": {"type": "integer", "minimum": 1},
        "modals": {"type": "integer", "minimum": 1},
        "truncation_order": {"type": ["integer", "null"], "minimum": 1},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeff_cm1", "factors"],
                "properties": {
                    "coeff_cm1": {"type": "number"},
                    "factors": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["mode", "raise", "lower"],
                            "properties": {"mode": _INDEX, "raise": _INDEX, "lower": _INDEX},
                        },
                    },
                },
            },
        },
    },
}


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _validate(doc: Any, schema: dict, source: str) -> None:
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        msgs = []
        for e in errors[:10]:
            path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
            msgs.append(f"{source}: {path.lstrip('.') or '<root>'}: {e.message}")
        raise ValidationError("\n".join(msgs))


def parse_pes(text: str, source: str = "<pes>") -> tuple[VibProblem, list[PesTerm]]:
    doc = _load_json(text, source)
    _validate(doc, PES_SCHEMA, source)
    L = doc["n_modes"]
    modals = doc.get("modals")
    if modals is None:
        per_mode = doc["modals_per_mode"]
        if len(per_mode) != L:
            raise ValidationError(f"{source}: modals_per_mode: expected {L} entries")
        modals = max(per_mode)
    if len(doc["omegas_cm1"]) != L:
        raise ValidationError(f"{source}: omegas_cm1: expected {L} entries, got {len(doc['omegas_cm1'])}")
    D = doc["truncation_order"]
    if D > L:
        raise ValidationError(f"{source}: truncation_order: {D} exceeds n_modes {L}")
    problem = VibProblem(L, D, modals, tuple(doc["omegas_cm1"]))
    terms = []
    for i, t in enumerate(doc["terms"]):
        where = f"{source}: terms[{i}]"
        modes, powers = t["modes"], t["powers"]
        if len(modes) != len(powers):
            raise ValidationError(f"{where}: modes and powers differ in length")
        bad = [m for m in modes if m >= L]
        if bad:
            raise ValidationError(f"{where}: mode index {bad[0]} out of range for {L} modes")
        if len(modes) > D:
            raise ValidationError(f"{where}: couples {len(modes)} modes, above truncation order {D}")
        # equal modes are summed into one power
        merged: dict[int, int] = {}
        for m, k in zip(modes, powers):
            merged[m] = merged.get(m, 0) + k
        ms = sorted(merged)
        terms.append(PesTerm(tuple(ms), tuple(merged[m] for m in ms), float(t["coeff_cm1"])))
    return problem, terms


def read_pes(path: str | Path) -> tuple[VibProblem, list[PesTerm]]:
    return parse_pes(Path(path).read_text(), str(path))


def sq_to_dict(sq: SecondQuantizedHamiltonian) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "format": SQ_FORMAT,
        "n_modes": sq.n_modes,
        "modals": sq.modals,
        "truncation_order": sq.truncation_order,
        "terms": [
            {
                "coeff_cm1": t.coeff,
                "factors": [{"mode": l, "raise": k, "lower": h} for l, k, h in t.factors],
            }
            for t in sq.terms
        ],
    }


def dumps_sq(sq: SecondQuantizedHamiltonian) -> str:
    return json.dumps(sq_to_dict(sq), indent=1) + "\n"


def parse_sq(text: str, source: str = "<sq>") -> SecondQuantizedHamiltonian:
    doc = _load_json(text, source)
    _validate(doc, SQ_SCHEMA, source)
    terms = []
    for i, t in enumerate(doc["terms"]):
        facs = sorted((f["mode"], f["raise"], f["lower"]) for f in t["factors"])
        modes = [f[0] for f in facs]
        if len(set(modes)) != len(modes):
            raise ValidationError(f"{source}: terms[{i}]: repeated mode in factors")
        terms.append(SqTerm(float(t["coeff_cm1"]), tuple(facs)))
    sq = SecondQuantizedHamiltonian(
        doc["n_modes"], doc["modals"], tuple(terms), doc.get("truncation_order")
    )
    try:
        sq.validate()
    except ValidationError as exc:
        raise ValidationError(f"{source}: {exc}") from None
    return sq


def read_sq(path: str | Path) -> SecondQuantizedHamiltonian:
    return parse_sq(Path(path).read_text(), str(path))


def write_sq(sq: SecondQuantizedHamiltonian, path: str | Path) -> None:
    Path(path).write_text(dumps_sq(sq))


def dumps_pauli(h: WeightedPauliHamiltonian) -> str:
    header = {"format": PAULI_FORMAT, "schema_version": SCHEMA_VERSION, "n_qubits": h.n_qubits}
    header["meta"] = h.meta
    lines = ["#! " + json.dumps(header, sort_keys=True)]
    lines += [f"{t.coeff!r} {t.pauli.to_label(with_phase=False)}" for t in h.terms]
    return "\n".join(lines) + "\n"


def parse_pauli(text: str, source: str = "<pauli>") -> WeightedPauliHamiltonian:
    header = None
    terms = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#!") and header is None and not terms:
            header = _load_json(line[2:], f"{source}:{lineno}")
            if header.get("format") != PAULI_FORMAT or header.get("schema_version") != SCHEMA_VERSION:
                raise ValidationError(f"{source}:{lineno}: unsupported header {line!r}")
            continue
        if line.startswith("#"):
            continue
        if header is None:
            raise ValidationError(f"{source}:{lineno}: missing '#!' header line")
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"{source}:{lineno}: expected '<coeff> <pauli>', got {raw!r}")
        try:
            coeff = float(parts[0])
            p = PauliString.from_label(parts[1])
        except ValueError as exc:
            raise ValidationError(f"{source}:{lineno}: {exc}") from None
        if p.n_qubits != header["n_qubits"] or p.phase not in (0, 2):
            raise ValidationError(f"{source}:{lineno}: bad Pauli string {parts[1]!r}")
        if p.phase == 2:
            coeff = -coeff
            p = p.unsigned()
        key = (p.x, p.z)
        if key in seen:
            raise ValidationError(f"{source}:{lineno}: duplicate of line {seen[key]}")
        seen[key] = lineno
        terms.append(WeightedPauli(coeff, p))
    if header is None:
        raise ValidationError(f"{source}: empty file")
    return WeightedPauliHamiltonian(header["n_qubits"], tuple(terms), header.get("meta", {}))


def read_pauli(path: str | Path) -> WeightedPauliHamiltonian:
    return parse_pauli(Path(path).read_text(), str(path))


def write_pauli(h: WeightedPauliHamiltonian, path: str | Path) -> None:
    Path(path).write_text(dumps_pauli(h))
