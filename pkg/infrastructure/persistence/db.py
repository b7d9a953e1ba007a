# infrastructure/persistence/db.py
"""
Engine and session factory of the run catalog (SQLite by default).
"""
from pathlib import Path

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool

from core.services.persistence.run_model import Base

CATALOG_FILE = "catalog.sqlite"


def default_catalog_url(output_dir: str) -> str:
    return f"sqlite:///{Path(output_dir).resolve() / CATALOG_FILE}"


def make_engine(url: str) -> Engine:
    if url in ("sqlite://", "sqlite:///:memory:"):
        # one shared connection, otherwise every session sees an empty database
        return create_engine(url, connect_args={"check_same_thread": False}, poolclass=StaticPool)
    return create_engine(url, pool_pre_ping=True)


def make_session_factory(url: str) -> sessionmaker:
    """Creates the schema when missing and returns a configured Session class."""
    engine = make_engine(url)
    Base.metadata.create_all(bind=engine)
    return sessionmaker(autoflush=False, bind=engine)
