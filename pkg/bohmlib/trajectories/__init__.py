from .sampler import SamplerSpec, TabulatedCDF, sample_initial, default_support
from .integrator import (VelocityProvider, AnalyticVelocity, FrameVelocity, RK4Integrator,
                         Trajectory, integrate, fringe_guard)
from .ensemble import Ensemble, ensemble_run
__all__ = ( 'SamplerSpec',
            'TabulatedCDF',
            'sample_initial',
            'default_support',
            'VelocityProvider',
            'AnalyticVelocity',
            'FrameVelocity',
            'RK4Integrator',
            'Trajectory',
            'integrate',
            'fringe_guard',
            'Ensemble',
            'ensemble_run')
