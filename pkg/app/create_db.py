"""
Database initialization script.

This script creates all tables defined in SQLAlchemy models.
Run this script before starting the application for the first time.
"""
import logging
from logging.config import dictConfig

from sqlalchemy import text

from app.database import engine
from app.logconf import DEFAULT_LOGGER, log_config
from app.models import Base

logger = logging.getLogger(DEFAULT_LOGGER)


def init_db(bind=engine) -> bool:
    """Create all tables and test the connection."""
    Base.metadata.create_all(bind=bind)
    with bind.connect() as conn:
        ok = conn.execute(text("SELECT 1")).scalar() == 1
    logger.info("Database tables created, connection test: %s", ok)
    return ok


if __name__ == "__main__":
    dictConfig(log_config)
    init_db()
