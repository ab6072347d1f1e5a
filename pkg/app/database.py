"""
Database connection module

This module manages the SQLAlchemy engine and session for the experiment
results store.
"""
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from app.config import settings


def make_engine(url: str):
    """Engine for a database URL; SQLite connections may cross threads"""
    return create_engine(
        url,
        connect_args={"check_same_thread": False} if url.startswith("sqlite") else {},
    )


# Create database engine
engine = make_engine(settings.DATABASE_URL)

# Create session factory
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


# Dependency for getting a database session
def get_db():
    """Get a database session and ensure it's closed after use"""
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()
