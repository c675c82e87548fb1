#!/usr/bin/env python3
"""
Descriptor Handler Module
Reads and writes lattice descriptor files (JSON).

A descriptor is an object with exactly one of the keys:
  {"family": "Zn", "rank": 3}
  {"gram": [[2, 1], [1, 2]]}
  {"direct_sum": [<descriptor>, ...]}
  {"scaled": {"inner": <descriptor>, "factor": 3}}
Unknown keys are rejected.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Tuple

from errors import DescriptorError
from lattice_core import (
    DirectSumDescriptor,
    ExplicitDescriptor,
    FamilyDescriptor,
    Lattice,
    LatticeDescriptor,
    ScaledDescriptor,
    make_lattice,
)
from lattice_families import FAMILY_FIXED_RANK, FAMILY_MIN_RANK

logger = logging.getLogger(__name__)

DESCRIPTOR_KINDS = ('family', 'gram', 'direct_sum', 'scaled')


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def parse_descriptor(obj: Any, path: str = '$') -> LatticeDescriptor:
    """Turn a decoded JSON object into a descriptor; `path` locates errors."""
    if not isinstance(obj, dict):
        raise DescriptorError(f"{path}: descriptor must be an object, got {type(obj).__name__}")
    kinds = [key for key in DESCRIPTOR_KINDS if key in obj]
    if len(kinds) != 1:
        raise DescriptorError(f"{path}: need exactly one of {', '.join(DESCRIPTOR_KINDS)}, found {kinds or 'none'}")
    kind = kinds[0]
    allowed = {'family': {'family', 'rank'}}.get(kind, {kind})
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise DescriptorError(f"{path}: unknown keys {unknown}")

    if kind == 'family':
        name = obj['family']
        if name not in FAMILY_MIN_RANK:
            raise DescriptorError(f"{path}.family: unknown family {name!r}")
        rank = obj.get('rank', FAMILY_FIXED_RANK.get(name))
        if not _is_int(rank):
            raise DescriptorError(f"{path}.rank: family {name} needs an integer rank")
        return FamilyDescriptor(name, rank)

    if kind == 'gram':
        rows = obj['gram']
        if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
            raise DescriptorError(f"{path}.gram: must be an array of arrays")
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                if not _is_int(value):
                    raise DescriptorError(f"{path}.gram[{i}][{j}]: {value!r} is not an integer")
        return ExplicitDescriptor(tuple(tuple(row) for row in rows))

    if kind == 'direct_sum':
        parts = obj['direct_sum']
        if not isinstance(parts, list) or not parts:
            raise DescriptorError(f"{path}.direct_sum: must be a non-empty array")
        return DirectSumDescriptor(tuple(
            parse_descriptor(part, f"{path}.direct_sum[{i}]") for i, part in enumerate(parts)
        ))

    scaled = obj['scaled']
    if not isinstance(scaled, dict):
        raise DescriptorError(f"{path}.scaled: must be an object with 'inner' and 'factor'")
    unknown = sorted(set(scaled) - {'inner', 'factor'})
    if unknown or 'inner' not in scaled or 'factor' not in scaled:
        raise DescriptorError(f"{path}.scaled: expected keys 'inner' and 'factor', got {sorted(scaled)}")
    factor = scaled['factor']
    if not _is_int(factor) or factor < 1:
        raise DescriptorError(f"{path}.scaled.factor: must be a positive integer, got {factor!r}")
    return ScaledDescriptor(parse_descriptor(scaled['inner'], f"{path}.scaled.inner"), factor)


def descriptor_to_dict(descriptor: LatticeDescriptor) -> Dict[str, Any]:
    if isinstance(descriptor, FamilyDescriptor):
        return {'family': descriptor.family, 'rank': descriptor.rank}
    if isinstance(descriptor, ExplicitDescriptor):
        return {'gram': [list(row) for row in descriptor.gram]}
    if isinstance(descriptor, DirectSumDescriptor):
        return {'direct_sum': [descriptor_to_dict(part) for part in descriptor.parts]}
    if isinstance(descriptor, ScaledDescriptor):
        return {'scaled': {'inner': descriptor_to_dict(descriptor.inner), 'factor': descriptor.factor}}
    raise DescriptorError(f"Unknown descriptor type: {type(descriptor).__name__}")


def load_descriptor(path) -> LatticeDescriptor:
    """Read a descriptor file; malformed JSON or structure raises DescriptorError."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise DescriptorError(f"Cannot read descriptor file {path}: {e}") from e
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise DescriptorError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e
    return parse_descriptor(obj)


def load_lattice(path) -> Lattice:
    lattice = make_lattice(load_descriptor(path))
    logger.info(f"✅ Loaded lattice {lattice.name} (rank {lattice.n}, det_gram {lattice.det_gram}) from {path}")
    return lattice


def save_descriptor(descriptor: LatticeDescriptor, path):
    Path(path).write_text(json.dumps(descriptor_to_dict(descriptor), indent=2) + '\n', encoding='utf-8')


def validate_descriptor_file(path) -> Tuple[bool, List[str]]:
    """Check that a file holds a buildable descriptor; returns (ok, errors)."""
    errors = []
    try:
        make_lattice(load_descriptor(path))
    except (DescriptorError, ValueError) as e:
        errors.append(str(e))
    return len(errors) == 0, errors
