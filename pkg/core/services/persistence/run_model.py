from sqlalchemy import Boolean, Column, DateTime, Float, Integer, String
from sqlalchemy.orm import declarative_base

Base = declarative_base()


class RunModel(Base):
    __tablename__ = "run"

    run_key = Column(String, primary_key=True)
    command = Column(String(32), nullable=False, index=True)
    design = Column(String(32), nullable=False)
    n = Column(Integer, nullable=False)
    k = Column(Integer, nullable=True)
    eta = Column(Float, nullable=True)
    seed = Column(Integer, nullable=True)
    status = Column(String(32), nullable=False, default="ok")

    final_loss = Column(Float, nullable=True)
    final_mse = Column(Float, nullable=True)
    lambda_max_full = Column(Float, nullable=True)
    weighted_tv = Column(Float, nullable=True)
    knot_count = Column(Integer, nullable=True)
    stable = Column(Boolean, nullable=True)
    optimized = Column(Boolean, nullable=True)
    certificates_passed = Column(Boolean, nullable=True)

    output_dir = Column(String, nullable=True)
    created_at = Column(DateTime(timezone=True), nullable=False)
