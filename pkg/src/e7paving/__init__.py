"""Point counts, Gamma graphs and Schubert-cell checks for the E7(a4) and
E7(a5) Springer-fiber pavings."""

from .cases import CASES, CaseId, get_case
from .subspaces import SubspaceParams

__version__ = "0.1.0"

__all__ = ["CASES", "CaseId", "SubspaceParams", "get_case", "__version__"]
