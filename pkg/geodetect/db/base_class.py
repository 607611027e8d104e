import re
from typing import Any, Dict

from sqlalchemy import inspect
from sqlalchemy.orm import as_declarative, declared_attr

_CAMEL_BOUNDARY = re.compile(r"(?<!^)(?=[A-Z])")


@as_declarative()
class Base:
    id: Any
    __name__: str

    # ReplicaRecord -> replica_records
    @declared_attr
    def __tablename__(cls) -> str:
        return _CAMEL_BOUNDARY.sub("_", cls.__name__).lower() + "s"

    def as_dict(self) -> Dict[str, Any]:
        """Column values keyed by attribute name."""
        return {column.key: getattr(self, column.key) for column in inspect(self).mapper.column_attrs}
