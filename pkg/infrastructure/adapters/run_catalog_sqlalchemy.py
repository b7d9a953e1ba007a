from typing import List, Optional

from sqlalchemy import select
from sqlalchemy.orm import Session

from application.mappers.run_entry_mapper import RunEntryMapper
from core.entities.run_entry import RunEntry
from core.services.persistence.run_model import RunModel
from core.services.ports.run_catalog_port import RunCatalog


class RunCatalogSqlAlchemyAdapter(RunCatalog):
    def __init__(self, session: Session):
        self.session = session

    def save(self, entry: RunEntry) -> None:
        """
        Persiste ou substitui a entrada; a run_key e a chave primaria.
        """
        self.session.merge(RunEntryMapper.to_model(entry))
        self.session.commit()

    def get_by_key(self, run_key: str) -> Optional[RunEntry]:
        model = self.session.get(RunModel, run_key)
        if model is None:
            return None
        return RunEntryMapper.to_entity(model)

    def list_all(self) -> List[RunEntry]:
        models = self.session.scalars(select(RunModel).order_by(RunModel.run_key)).all()
        return [RunEntryMapper.to_entity(m) for m in models]
