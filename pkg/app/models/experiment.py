"""
Experiment run model

This module defines the table of experiment records, one row per
(kind, d, R, seed) cell.
"""
from sqlalchemy import JSON, Column, Float, Integer, String

from app.models.base import Base, BaseModel


class ExperimentRun(Base, BaseModel):
    """ExperimentRun model for persisted experiment records"""

    __tablename__ = "experiment_runs"

    kind = Column(String(16), index=True, nullable=False)  # frame_bounds, cheb_sweep, cosine_sweep
    d = Column(Integer, nullable=False)
    R = Column(Integer, nullable=False)
    m = Column(Integer, nullable=False)
    # SQLite column names are case-insensitive, so M needs its own SQL name next to m
    M = Column("M_budget", Integer, nullable=False)
    n = Column(Integer, nullable=False)
    b = Column(Float, nullable=False)
    basis = Column(String(8), index=True, nullable=False)
    error_method = Column(String(16), nullable=True)
    error = Column(Float, nullable=True)
    a_before = Column(Float, nullable=False)
    b_before = Column(Float, nullable=False)
    a_after = Column(Float, nullable=False)
    b_after = Column(Float, nullable=False)
    # 64-bit seeds overflow signed integer columns
    seed = Column(String(24), nullable=False)
    ms = Column(Float, default=0.0)
    selected = Column(JSON, nullable=True)

    @classmethod
    def from_record(cls, record, kind: str, selected=None) -> dict:
        """Column values for an ExperimentRecord"""
        row = record.model_dump(mode="json")
        row["seed"] = str(record.seed)
        return {**row, "kind": kind, "selected": selected}

    def __repr__(self):
        return f"<ExperimentRun {self.id} {self.kind} d={self.d} R={self.R} n={self.n}>"
