"""
Base models for database operations

This module defines the declarative base and the mixin with the common columns
and query helpers shared by all models.
"""
from datetime import datetime, timezone

from sqlalchemy import Column, DateTime, Integer
from sqlalchemy.orm import declarative_base

Base = declarative_base()


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


class BaseModel:
    """Base model with common fields and methods for all models"""

    id = Column(Integer, primary_key=True, index=True)
    created_at = Column(DateTime, default=utcnow)
    updated_at = Column(DateTime, default=utcnow, onupdate=utcnow)

    @classmethod
    def create(cls, db, **kwargs):
        """Create a new record in the database"""
        db_obj = cls(**kwargs)
        db.add(db_obj)
        db.commit()
        db.refresh(db_obj)
        return db_obj

    @classmethod
    def create_many(cls, db, rows):
        """Create several records in one transaction"""
        db_objs = [cls(**row) for row in rows]
        db.add_all(db_objs)
        db.commit()
        for db_obj in db_objs:
            db.refresh(db_obj)
        return db_objs

    @classmethod
    def get(cls, db, id):
        """Get a record by ID"""
        return db.query(cls).filter(cls.id == id).first()

    @classmethod
    def get_all(cls, db, skip=0, limit=100, **filters):
        """Get records matching column filters, with pagination"""
        query = db.query(cls).filter_by(**{key: value for key, value in filters.items() if value is not None})
        return query.order_by(cls.id).offset(skip).limit(limit).all()

    @classmethod
    def count(cls, db, **filters):
        """Count records matching column filters"""
        return db.query(cls).filter_by(**{key: value for key, value in filters.items() if value is not None}).count()

    @classmethod
    def delete(cls, db, id):
        """Delete a record by ID"""
        db_obj = cls.get(db, id)
        if not db_obj:
            return False

        db.delete(db_obj)
        db.commit()
        return True
