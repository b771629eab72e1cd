"""Scalar wave-optics simulator of the idealized Afshar double-pinhole experiment.

Two independent engines: closed-form Fresnel expressions (:mod:`.analytic`)
and numerical propagation (:mod:`.propagation`). The scenarios in
:mod:`.scenarios` run both and report how closely they agree.
"""
from .analysis import (EventLedger, FringeMetrics, PhotonEvents, absorption_fraction,
                       cross_engine_residual, measure_distinguishability, measure_visibility,
                       sample_photons, spot_metrics)
from .analytic import OpticalConfig, duality_check, duality_misuse_demo
from .config import SCENARIOS, ScenarioConfig, load_config
from .errors import *  # noqa: F401,F403
from .field import ComplexField, GridSpec, IntensityMap
from .propagation import Element, Propagate, Record, angular_spectrum, fresnel_scaled, run_chain
from .scenarios import RunReport, ScenarioResult, preflight, run_scenario

__version__ = "0.1.0"
