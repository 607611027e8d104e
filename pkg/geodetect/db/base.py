from geodetect.db.base_class import Base
from geodetect.experiments.models import ReplicaRecord
