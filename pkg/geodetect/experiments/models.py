from datetime import datetime, timezone

from sqlalchemy import Column, DateTime, Float, Integer, String, Text

from geodetect.db.base_class import Base


class ReplicaRecord(Base):
    id = Column(Integer, primary_key=True, index=True)
    experiment = Column(String, nullable=False)  # fig1, fig2, fig3, custom
    run_key = Column(String, nullable=False, index=True)  # canonical parameter string of the run
    hypothesis = Column(String, nullable=False)  # H0 or H1
    k = Column(Integer, nullable=False)
    replica = Column(Integer, nullable=False)
    seed = Column(String, nullable=False)  # 64-bit seeds exceed SQLite's signed integer range
    status = Column(String, nullable=False)  # ok or failed
    w_value = Column(Float, nullable=True)
    triangle_count = Column(Integer, nullable=True)
    error = Column(Text, nullable=True)
    created_at = Column(DateTime(timezone=True), default=lambda: datetime.now(timezone.utc), nullable=False)
