"""
Storage Service

CSV and JSON files exchanged between the command-line steps:

- node sets: one point per row, 17 significant digits, preceded by a comment
  line "# measure=<tag> seed=<int> d=<int>"
- index sets: one multi-index per row
- design matrices: header of multi-indices "k1|k2|...", one row per node
- experiment records: fixed column order RECORD_COLUMNS
- metadata: one JSON object per line
"""
import csv
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import numpy as np
from pydantic import BaseModel

from app.exceptions import DomainError
from app.logconf import DEFAULT_LOGGER
from app.schemas.base import Measure
from app.schemas.experiment import RECORD_COLUMNS, ExperimentRecord
from app.schemas.frames import DesignMatrix
from app.schemas.index_set import MultiIndexSet
from app.schemas.nodes import NodeSet

logger = logging.getLogger(DEFAULT_LOGGER)

PathLike = Union[str, Path]


def _parse_header(path: PathLike) -> Dict[str, str]:
    metadata = {}
    with open(path) as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            for token in line.lstrip("#").split():
                if "=" in token:
                    key, value = token.split("=", 1)
                    metadata[key] = value
    return metadata


def write_nodes(path: PathLike, nodes: NodeSet) -> None:
    """Write a node set with its measure, seed and dimension in the header"""
    header = f"measure={nodes.measure.value} seed={nodes.seed} d={nodes.d}"
    np.savetxt(path, nodes.points, fmt="%.17g", delimiter=",", header=header, comments="# ")
    logger.debug("wrote %d nodes to %s", nodes.count, path)


def read_nodes(
    path: PathLike,
    d: Optional[int] = None,
    measure: Optional[Measure] = None,
    seed: Optional[int] = None,
) -> NodeSet:
    """
    Read a node set written by write_nodes.

    Header values win over the keyword arguments, which serve files without
    a header.
    """
    metadata = _parse_header(path)
    points = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    dimension = int(metadata.get("d", points.shape[1]))
    if d is not None and d != dimension:
        raise DomainError(f"{path} holds {dimension}-dimensional nodes, expected d={d}")
    if points.shape[1] != dimension:
        raise DomainError(f"{path} has {points.shape[1]} columns but declares d={dimension}")
    return NodeSet(
        d=dimension,
        points=points,
        measure=Measure(metadata.get("measure", measure or Measure.CHEBYSHEV)),
        seed=int(metadata.get("seed", seed or 0)),
    )


def write_index_set(path: PathLike, index_set: MultiIndexSet) -> None:
    header = ",".join(f"k{axis + 1}" for axis in range(index_set.d))
    np.savetxt(path, index_set.indices, fmt="%d", delimiter=",", header=header, comments="")


def write_design_matrix(path: PathLike, matrix: DesignMatrix) -> None:
    """Dump a design matrix with one "k1|k2|..." label per column"""
    labels = ["|".join(str(k) for k in index) for index in matrix.indices.as_tuples()]
    np.savetxt(path, matrix.entries, fmt="%.17g", delimiter=",", header=",".join(labels), comments="")
    logger.debug("wrote %dx%d design matrix to %s", matrix.rows, matrix.cols, path)


def write_records(path: PathLike, records: Iterable[ExperimentRecord]) -> int:
    """Write experiment records as CSV; returns the number of rows"""
    count = 0
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=RECORD_COLUMNS)
        writer.writeheader()
        for record in records:
            writer.writerow(record.to_row())
            count += 1
    return count


def read_records(path: PathLike) -> List[ExperimentRecord]:
    with open(path, newline="") as handle:
        rows = list(csv.DictReader(handle))
    return [
        ExperimentRecord(**{key: (None if value == "" else value) for key, value in row.items()})
        for row in rows
    ]


def append_jsonl(path: PathLike, model: BaseModel) -> None:
    with open(path, "a") as handle:
        handle.write(model.model_dump_json() + "\n")


def write_json(path: PathLike, model: BaseModel) -> None:
    Path(path).write_text(model.model_dump_json(indent=2) + "\n")
