"""Single-deme drivers."""

from hybridmoea.drivers.nsga2 import NSGAII
from hybridmoea.drivers.omopso import OMOPSO, EpsilonArchive
from hybridmoea.drivers.spea2 import SPEA2
from hybridmoea.hybrid import register

for _cls in (NSGAII, SPEA2, OMOPSO):
    register(_cls)

__all__ = ["NSGAII", "SPEA2", "OMOPSO", "EpsilonArchive"]
