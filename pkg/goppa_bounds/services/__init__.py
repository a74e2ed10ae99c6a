# Services module - domain logic layer
from goppa_bounds.services.bounds import (
    BoundReport,
    FixedCountTable,
    affine_orbit_bound,
    closed_form_extended_bound,
    extended_bound,
    scan_parameters,
)
from goppa_bounds.services.fields import Backend, FieldTower, Level, TowerParams, build_tower
from goppa_bounds.services.oracle import GeneratorSet, OrbitPartition, verify_bound

__all__ = [
    "Backend",
    "BoundReport",
    "FieldTower",
    "FixedCountTable",
    "GeneratorSet",
    "Level",
    "OrbitPartition",
    "TowerParams",
    "affine_orbit_bound",
    "build_tower",
    "closed_form_extended_bound",
    "extended_bound",
    "scan_parameters",
    "verify_bound",
]
