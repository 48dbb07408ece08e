from .analysis import (REGIMES, DEFAULT_REGIME_THRESHOLDS, EquivarianceReport, RegimeReport,
                       equivariance_test, measure_fringe_spacing,
                       classify_regime, residual_summary, node_avoidance, asymptotic_convergence,
                       fringe_law, crossing_violations, mirror_defect, cross_term_visibility,
                       find_maxima, fringe_minima)
from .suite import VerificationSuite
__all__ = ( 'REGIMES',
            'DEFAULT_REGIME_THRESHOLDS',
            'EquivarianceReport',
            'RegimeReport',
            'equivariance_test',
            'measure_fringe_spacing',
            'classify_regime',
            'residual_summary',
            'node_avoidance',
            'asymptotic_convergence',
            'fringe_law',
            'crossing_violations',
            'mirror_defect',
            'cross_term_visibility',
            'find_maxima',
            'fringe_minima',
            'VerificationSuite')
