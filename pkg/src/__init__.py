# Qubit coherence ordering toolkit
# Core modules for coherence measures, Markovian channels and ordering scans

from .channels import ChannelVariant, MarkovianKind, make_markovian
from .measures import CoherenceMeasureId
from .qubit_core import BlochState, DensityMatrix

__all__ = ['BlochState', 'DensityMatrix', 'CoherenceMeasureId', 'ChannelVariant', 'MarkovianKind', 'make_markovian']
