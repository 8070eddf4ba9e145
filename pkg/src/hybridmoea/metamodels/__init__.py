"""Multi-deme meta-models."""

from hybridmoea.hybrid import register
from hybridmoea.metamodels.hgs import HGS, HgsNode
from hybridmoea.metamodels.imga import IMGA, topology_edges

register(HGS)
register(IMGA)

__all__ = ["HGS", "HgsNode", "IMGA", "topology_edges"]
