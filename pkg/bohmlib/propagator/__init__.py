from .propagator import Propagator, PropagatorSpec
from .split_operator import SplitOperator, order_of_accuracy
from .utils import time_steps, time_grid, emission_times, mean_momentum, width
__all__ = ( 'Propagator',
            'PropagatorSpec',
            'SplitOperator',
            'order_of_accuracy',
            'time_steps',
            'time_grid',
            'emission_times',
            'mean_momentum',
            'width')
