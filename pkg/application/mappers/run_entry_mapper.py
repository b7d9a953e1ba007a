# application/mappers/run_entry_mapper.py
"""
Converte entre o modelo SQLAlchemy do catalogo e a entidade RunEntry.
"""
from core.entities.run_entry import RunEntry
from core.services.persistence.run_model import RunModel

_RESULT_FIELDS = (
    "final_loss",
    "final_mse",
    "lambda_max_full",
    "weighted_tv",
    "knot_count",
    "stable",
    "optimized",
    "certificates_passed",
    "status",
)


class RunEntryMapper:
    @staticmethod
    def to_entity(model: RunModel) -> RunEntry:
        entry = RunEntry(
            run_key=model.run_key,
            command=model.command,
            design=model.design,
            n=model.n,
            k=model.k,
            eta=model.eta,
            seed=model.seed,
            output_dir=model.output_dir,
        )
        for name in _RESULT_FIELDS:
            setattr(entry, name, getattr(model, name))
        entry.created_at = model.created_at
        return entry

    @staticmethod
    def to_model(entry: RunEntry) -> RunModel:
        model = RunModel(
            run_key=entry.run_key,
            command=entry.command,
            design=entry.design,
            n=entry.n,
            k=entry.k,
            eta=entry.eta,
            seed=entry.seed,
            output_dir=entry.output_dir,
            created_at=entry.created_at,
        )
        for name in _RESULT_FIELDS:
            setattr(model, name, getattr(entry, name))
        return model
